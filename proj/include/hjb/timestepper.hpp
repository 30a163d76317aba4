#pragma once

#include "hjb/bs_model.hpp"
#include "hjb/penalty.hpp"
#include "hjb/policy.hpp"
#include "hjb/problem.hpp"
#include "hjb/solve_report.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hjb {

enum class SolverKind { penalty, policy };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(std::string_view name);

struct SolverSettings {
    PenaltyConfig penalty;
    PolicyConfig policy;
};

/// Value surface of one backward pricing run plus per-step statistics.
struct PricingRun {
    SolverKind solver_kind = SolverKind::penalty;
    MarketParams market;
    SolverSettings settings;
    /// surface[j] = V^j for time levels j = 0..M-1; surface[M-1] is the payoff.
    std::vector<Vector> surface;
    /// Iterations and seconds spent computing V^j, j = 0..M-2.
    std::vector<std::size_t> step_iterations;
    std::vector<double> step_wall_time;
    double total_wall_time = 0.0;

    std::span<const double> time_zero() const { return surface.front(); }
};

/// Called after each time level is solved, with the per-step problem and the
/// solver's report.
using StepObserver =
    std::function<void(std::size_t level, const ControlProblem& problem, const SolveReport& report)>;

/// The per-step control problem with b_s = 0: one implicit Black-Scholes
/// matrix per control of borrow_lend_controls(mp). Time independent, so one
/// instance serves every step through with_uniform_rhs.
ControlProblem step_problem(const MarketParams& mp, const Grid& grid);

/// Marches  min_s { A_s V^{j-1} - V^j } = 0  backward from V^{M-1} = payoff,
/// warm-starting each step from V^j. The payoff must vanish at 0 and s_max.
/// Throws SolverFailure if a step hits its iteration cap.
PricingRun price(const MarketParams& mp, const Grid& grid, const PiecewiseLinearPayoff& payoff,
                 SolverKind kind, const SolverSettings& settings,
                 const StepObserver& observer = {});

/// Backward solve of the single linear operator given by `control`.
std::vector<Vector> price_linear(const RateControl& control, double sigma, const Grid& grid,
                                 const PiecewiseLinearPayoff& payoff);

/// True iff every level satisfies ||V^j||_inf <= max|P| + 1e-8 * max(1, max|P|),
/// with P sampled on the grid.
bool stability_check(const PricingRun& run, std::span<const double> sampled_payoff);

}  // namespace hjb
