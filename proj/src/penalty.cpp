#include "hjb/penalty.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjb {

namespace {

void require_min_sense(const ControlProblem& p) {
    if (p.sense() != Sense::min)
        throw ParameterError("penalty solver expects a min-sense problem; negate it first");
}

void check_length(const ControlProblem& p, std::span<const double> x, const char* what) {
    if (x.size() != p.size())
        throw DimensionError(std::string(what) + ": length " + std::to_string(x.size()) +
                             " != " + std::to_string(p.size()));
}

struct Workspace {
    explicit Workspace(std::size_t n) : jac(n), rhs(n), g(n) {}
    BandedMatrix jac;
    Vector rhs;
    Vector g;
};

Vector solve_masked_system(const ControlProblem& p, const PenaltyConfig& cfg,
                           const PenaltyMasks& masks, Workspace& ws) {
    kernels::parallel::assemble_penalty_system(p, cfg.reference_control, cfg.rho, masks, ws.jac,
                                               ws.rhs);
    return solve(ws.jac, ws.rhs);
}

}  // namespace

void validate(const PenaltyConfig& cfg, const ControlProblem& p) {
    if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho))
        throw ParameterError("penalty parameter rho must be positive");
    if (!(cfg.tol > 0.0)) throw ParameterError("penalty tolerance must be positive");
    if (cfg.reference_control >= p.num_controls())
        throw ParameterError("reference control " + std::to_string(cfg.reference_control) +
                             " out of range for " + std::to_string(p.num_controls()) +
                             " controls");
}

Vector penalty_residual(const ControlProblem& p, const PenaltyConfig& cfg,
                        std::span<const double> x) {
    validate(cfg, p);
    check_length(p, x, "penalty_residual");
    Vector g(p.size());
    kernels::parallel::penalty_residual(p, cfg.reference_control, cfg.rho, x, g);
    return g;
}

PenaltyMasks penalty_masks(const ControlProblem& p, const PenaltyConfig& cfg,
                           std::span<const double> x) {
    validate(cfg, p);
    check_length(p, x, "penalty_masks");
    PenaltyMasks masks;
    kernels::parallel::penalty_masks(p, cfg.reference_control, cfg.strict_mask, x, masks);
    return masks;
}

BandedMatrix build_jacobian(const ControlProblem& p, const PenaltyConfig& cfg,
                            const PenaltyMasks& masks) {
    validate(cfg, p);
    BandedMatrix jac(p.size());
    Vector rhs(p.size());
    kernels::parallel::assemble_penalty_system(p, cfg.reference_control, cfg.rho, masks, jac, rhs);
    require_m_matrix(jac, "penalty jacobian");
    return jac;
}

PenaltyIterate iterate(const ControlProblem& p, const PenaltyConfig& cfg,
                       std::span<const double> x_prev) {
    require_min_sense(p);
    PenaltyIterate it;
    it.masks = penalty_masks(p, cfg, x_prev);
    Workspace ws(p.size());
    it.x = solve_masked_system(p, cfg, it.masks, ws);
    it.g_residual.resize(p.size());
    kernels::parallel::penalty_residual(p, cfg.reference_control, cfg.rho, it.x, it.g_residual);
    it.iter = 1;
    return it;
}

SolveReport solve_penalised(const ControlProblem& p, const PenaltyConfig& cfg,
                            std::span<const double> x0) {
    require_min_sense(p);
    validate(cfg, p);
    check_length(p, x0, "solve_penalised x0");

    const std::size_t ref = cfg.reference_control;
    const double inv_scale = 1.0 / p.scale();

    SolveReport report;
    report.x.assign(x0.begin(), x0.end());
    if (cfg.record_iterates) report.iterates.push_back(report.x);

    Workspace ws(p.size());
    PenaltyMasks masks;
    PenaltyMasks next_masks;
    kernels::parallel::penalty_masks(p, ref, cfg.strict_mask, report.x, masks);

    // history[k] holds the masks that produced x^{k+1}; computed[k] is x^{k+1}.
    std::vector<PenaltyMasks> history;
    std::vector<Vector> computed;

    while (report.iterations < cfg.max_iters) {
        history.push_back(masks);
        report.x = solve_masked_system(p, cfg, masks, ws);
        ++report.iterations;
        computed.push_back(report.x);
        if (cfg.record_iterates) report.iterates.push_back(report.x);

        kernels::parallel::penalty_residual(p, ref, cfg.rho, report.x, ws.g);
        const double measure = inf_norm(ws.g) * inv_scale;
        report.residual_trace.push_back(measure);

        kernels::parallel::penalty_masks(p, ref, cfg.strict_mask, report.x, next_masks);
        if (measure <= cfg.tol || next_masks == masks) {
            report.termination = Termination::converged;
            return report;
        }
        // Iterates are monotone in exact arithmetic, so an earlier mask set
        // can only come back through round-off: x^{m+1}..x^n would repeat.
        for (std::size_t m = 0; m + 1 < history.size(); ++m) {
            if (history[m] != next_masks) continue;
            const auto first = report.residual_trace.begin() + static_cast<std::ptrdiff_t>(m);
            const auto best = std::min_element(first, report.residual_trace.end());
            report.x = computed[static_cast<std::size_t>(best - report.residual_trace.begin())];
            report.termination = Termination::rounding_cycle;
            return report;
        }
        std::swap(masks, next_masks);
    }
    report.termination = Termination::cap_exceeded;
    return report;
}

}  // namespace hjb
