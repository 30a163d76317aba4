#pragma once

#include "hjb/problem.hpp"
#include "hjb/solve_report.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hjb {

struct PolicyConfig {
    double tol = 1e-8;
    std::size_t max_iters = 100;
    bool record_iterates = false;
};

/// Row i gets the lowest-index control minimising (A_s x - b_s)_i.
std::vector<std::size_t> select_policy(const ControlProblem& p, std::span<const double> x);

/// Policy iteration (Howard): select the row-wise minimising controls,
/// splice their rows into A* and b*, solve A* x = b*, repeat. Stops once the
/// fresh iterate passes verify_solution at cfg.tol, or when the policy it
/// selects equals the one that produced it.
SolveReport solve_policy(const ControlProblem& p, const PolicyConfig& cfg,
                         std::span<const double> x0);

}  // namespace hjb
