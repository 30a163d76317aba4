#pragma once

#include "hjb/banded.hpp"
#include "hjb/problem.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Row-wise kernels shared by the solvers. Every row of every kernel is
// independent, so each has an OpenMP version (namespace `parallel`, used by
// the solvers) and a plain serial reference (namespace `serial`, used by tests
// and benchmarks to check the parallel one). The two are written with
// different loop orders on purpose: serial walks control-major, parallel
// walks row-major with the control loop innermost.

namespace hjb::kernels {

/// One flag per row; uint8_t rather than vector<bool> so rows can be written
/// concurrently.
using RowMask = std::vector<std::uint8_t>;

/// Rows below this count run single-threaded even in the parallel kernels.
inline constexpr std::size_t kParallelMinRows = 2048;

namespace serial {

/// min_out[i] = min_s (A_s x - b_s)_i; argmin_out[i] = lowest minimising s.
/// argmin_out may be empty.
void envelope(const ControlProblem& p, std::span<const double> x,
              std::span<double> min_out, std::span<std::size_t> argmin_out);

/// G(x) = (A_ref x - b_ref) - rho * sum_{s != ref} max(b_s - A_s x, 0).
void penalty_residual(const ControlProblem& p, std::size_t ref, double rho,
                      std::span<const double> x, std::span<double> out);

/// masks[s][i] = (b_s - A_s x)_i > 0 (>= 0 when !strict); masks[ref] is all zero.
void penalty_masks(const ControlProblem& p, std::size_t ref, bool strict,
                   std::span<const double> x, std::vector<RowMask>& masks);

/// jac = A_ref + rho * sum_{s != ref} masked(A_s),
/// rhs = b_ref + rho * sum_{s != ref} masked(b_s).
void assemble_penalty_system(const ControlProblem& p, std::size_t ref, double rho,
                             const std::vector<RowMask>& masks,
                             BandedMatrix& jac, std::span<double> rhs);

/// Row i of (mat, rhs) is row i of (A_{policy[i]}, b_{policy[i]}).
void splice_policy_system(const ControlProblem& p, std::span<const std::size_t> policy,
                          BandedMatrix& mat, std::span<double> rhs);

}  // namespace serial

namespace parallel {

void envelope(const ControlProblem& p, std::span<const double> x,
              std::span<double> min_out, std::span<std::size_t> argmin_out);

void penalty_residual(const ControlProblem& p, std::size_t ref, double rho,
                      std::span<const double> x, std::span<double> out);

void penalty_masks(const ControlProblem& p, std::size_t ref, bool strict,
                   std::span<const double> x, std::vector<RowMask>& masks);

void assemble_penalty_system(const ControlProblem& p, std::size_t ref, double rho,
                             const std::vector<RowMask>& masks,
                             BandedMatrix& jac, std::span<double> rhs);

void splice_policy_system(const ControlProblem& p, std::span<const std::size_t> policy,
                          BandedMatrix& mat, std::span<double> rhs);

}  // namespace parallel

}  // namespace hjb::kernels
