#include "hjb/timestepper.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace hjb {

std::string_view to_string(SolverKind kind) {
    return kind == SolverKind::penalty ? "penalty" : "policy";
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
    if (name == "penalty") return SolverKind::penalty;
    if (name == "policy") return SolverKind::policy;
    return std::nullopt;
}

ControlProblem step_problem(const MarketParams& mp, const Grid& grid) {
    const auto controls = borrow_lend_controls(mp);
    std::vector<std::string> labels;
    std::vector<BandedMatrix> matrices;
    for (const auto& c : controls) {
        labels.push_back(c.label);
        matrices.push_back(bs_matrix(c, mp.sigma, grid));
    }
    std::vector<Vector> rhs(controls.size(), Vector(grid.space_nodes(), 0.0));
    return ControlProblem(std::move(labels), std::move(matrices), std::move(rhs));
}

namespace {

void require_zero_boundary(const PiecewiseLinearPayoff& payoff, const Grid& grid) {
    if (payoff(0.0) != 0.0 || payoff(grid.s_max()) != 0.0)
        throw ParameterError("payoff must vanish at S = 0 and S = s_max");
}

}  // namespace

PricingRun price(const MarketParams& mp, const Grid& grid, const PiecewiseLinearPayoff& payoff,
                 SolverKind kind, const SolverSettings& settings, const StepObserver& observer) {
    using clock = std::chrono::steady_clock;
    require_zero_boundary(payoff, grid);
    const ControlProblem base = step_problem(mp, grid);
    if (kind == SolverKind::penalty) validate(settings.penalty, base);

    const std::size_t levels = grid.time_levels();
    PricingRun run;
    run.solver_kind = kind;
    run.market = mp;
    run.settings = settings;
    run.surface.resize(levels);
    run.step_iterations.assign(levels - 1, 0);
    run.step_wall_time.assign(levels - 1, 0.0);
    run.surface[levels - 1] = sample_payoff(payoff, grid);

    const auto run_start = clock::now();
    for (std::size_t j = levels - 1; j-- > 0;) {
        const auto step_start = clock::now();
        const Vector& known = run.surface[j + 1];
        const ControlProblem step = base.with_uniform_rhs(known);
        SolveReport report = kind == SolverKind::penalty
                                 ? solve_penalised(step, settings.penalty, known)
                                 : solve_policy(step, settings.policy, known);
        run.step_wall_time[j] = std::chrono::duration<double>(clock::now() - step_start).count();
        run.step_iterations[j] = report.iterations;

        if (!report.converged()) {
            const double last = report.residual_trace.empty() ? 0.0 : report.residual_trace.back();
            throw SolverFailure(std::string(to_string(kind)) + " solver hit its iteration cap (" +
                                std::to_string(report.iterations) + ") at time level " +
                                std::to_string(j) + "; last scaled residual " +
                                std::to_string(last));
        }
        if (observer) observer(j, step, report);
        run.surface[j] = std::move(report.x);
    }
    run.total_wall_time = std::chrono::duration<double>(clock::now() - run_start).count();
    return run;
}

std::vector<Vector> price_linear(const RateControl& control, double sigma, const Grid& grid,
                                 const PiecewiseLinearPayoff& payoff) {
    require_zero_boundary(payoff, grid);
    const BandedMatrix a = bs_matrix(control, sigma, grid);
    const std::size_t levels = grid.time_levels();
    std::vector<Vector> surface(levels);
    surface[levels - 1] = sample_payoff(payoff, grid);
    for (std::size_t j = levels - 1; j-- > 0;) surface[j] = solve(a, surface[j + 1]);
    return surface;
}

bool stability_check(const PricingRun& run, std::span<const double> sampled_payoff) {
    const double bound = inf_norm(sampled_payoff);
    const double limit = bound + 1e-8 * std::max(1.0, bound);
    return std::ranges::all_of(run.surface,
                               [limit](const Vector& v) { return inf_norm(v) <= limit; });
}

}  // namespace hjb
