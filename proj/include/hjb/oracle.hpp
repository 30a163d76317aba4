#pragma once

#include "hjb/banded.hpp"
#include "hjb/problem.hpp"

#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>

// Exhaustive reference solver for small instances. Not used by the
// production solve path; tests and the `oracle-check` subcommand use it as
// ground truth.

namespace hjb::oracle {

/// |S|^N above this is refused with ParameterError.
inline constexpr std::size_t kMaxAssignments = 1'000'000;

/// Tolerance for the verify_solution test applied to each candidate.
inline constexpr double kVerifyTol = 1e-9;

/// No assignment verifies, or two verifying candidates disagree.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Enumeration {
    Vector x;
    std::size_t assignments = 0;
    /// Assignments whose spliced solution passed verification. Several may
    /// produce the same x.
    std::size_t verifying = 0;
    /// Largest inf-norm distance between any verifying candidate and x.
    double spread = 0.0;
};

/// Tries every row-wise assignment sigma: rows -> controls, solves the
/// spliced system A* x = b* and keeps the candidates that verify.
Enumeration enumerate(const ControlProblem& p);

/// The unique solution found by enumerate(). Throws OracleError when none
/// verifies or when verifying candidates differ by more than kVerifyTol.
Vector brute_force_solve(const ControlProblem& p);

struct InstanceShape {
    std::size_t min_n = 2;
    std::size_t max_n = 6;
    std::size_t min_controls = 2;
    std::size_t max_controls = 3;
};

/// Random min-sense problem: strictly diagonally dominant tridiagonal
/// M-matrices (off-diagonals in [-1, 0], diagonal margin in [0.05, 1]) and
/// right-hand sides uniform in [-1, 1]. All row sums are positive, so the
/// positive rows coincide across controls.
ControlProblem random_instance(std::mt19937_64& rng, const InstanceShape& shape = {});

/// Full data of a problem with 17 significant digits, for reproducing failures.
std::string describe(const ControlProblem& p);

}  // namespace hjb::oracle
