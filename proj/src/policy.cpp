#include "hjb/policy.hpp"

#include "hjb/errors.hpp"
#include "hjb/kernels.hpp"

#include <algorithm>
#include <string>

namespace hjb {

std::vector<std::size_t> select_policy(const ControlProblem& p, std::span<const double> x) {
    if (x.size() != p.size())
        throw DimensionError("select_policy: length " + std::to_string(x.size()) +
                             " != " + std::to_string(p.size()));
    Vector env(p.size());
    std::vector<std::size_t> policy(p.size());
    kernels::parallel::envelope(p, x, env, policy);
    return policy;
}

SolveReport solve_policy(const ControlProblem& p, const PolicyConfig& cfg,
                         std::span<const double> x0) {
    if (p.sense() != Sense::min)
        throw ParameterError("policy iteration expects a min-sense problem; negate it first");
    if (!(cfg.tol > 0.0)) throw ParameterError("policy tolerance must be positive");
    if (x0.size() != p.size())
        throw DimensionError("solve_policy x0: length " + std::to_string(x0.size()) +
                             " != " + std::to_string(p.size()));

    const std::size_t n = p.size();
    const double bound = cfg.tol * p.scale();

    SolveReport report;
    report.x.assign(x0.begin(), x0.end());
    if (cfg.record_iterates) report.iterates.push_back(report.x);

    BandedMatrix spliced(n);
    Vector rhs(n);
    Vector env(n);
    std::vector<std::size_t> policy(n);
    std::vector<std::size_t> next_policy(n);
    kernels::parallel::envelope(p, report.x, env, policy);

    std::vector<std::vector<std::size_t>> history;
    std::vector<Vector> computed;

    while (report.iterations < cfg.max_iters) {
        history.push_back(policy);
        kernels::parallel::splice_policy_system(p, policy, spliced, rhs);
        report.x = solve(spliced, rhs);
        ++report.iterations;
        computed.push_back(report.x);
        if (cfg.record_iterates) report.iterates.push_back(report.x);

        // The envelope carries both sides of the two-sided criterion: its
        // minimum bounds every (A_s x - b_s)_i from below and its maximum is
        // the worst row-wise attained minimum.
        kernels::parallel::envelope(p, report.x, env, next_policy);
        const auto [lo, hi] = std::ranges::minmax(env);
        report.residual_trace.push_back(std::max(-lo, hi) / p.scale());

        if ((lo >= -bound && hi <= bound) || next_policy == policy) {
            report.termination = Termination::converged;
            return report;
        }
        // Same argument as for the penalty iteration: a revisited policy
        // means round-off is steering the argmin.
        for (std::size_t m = 0; m + 1 < history.size(); ++m) {
            if (history[m] != next_policy) continue;
            const auto first = report.residual_trace.begin() + static_cast<std::ptrdiff_t>(m);
            const auto best = std::min_element(first, report.residual_trace.end());
            report.x = computed[static_cast<std::size_t>(best - report.residual_trace.begin())];
            report.termination = Termination::rounding_cycle;
            return report;
        }
        std::swap(policy, next_policy);
    }
    report.termination = Termination::cap_exceeded;
    return report;
}

}  // namespace hjb
