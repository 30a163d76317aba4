#pragma once

#include "hjb/banded.hpp"
#include "hjb/kernels.hpp"
#include "hjb/problem.hpp"
#include "hjb/solve_report.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hjb {

struct PenaltyConfig {
    double rho = 1e4;
    /// Index of the control whose equation is kept exactly; every other
    /// control enters through the penalty term.
    std::size_t reference_control = 0;
    double tol = 1e-8;
    std::size_t max_iters = 100;
    /// Penalise rows where b_s - A_s x > 0 (true) or >= 0 (false).
    bool strict_mask = true;
    bool record_iterates = false;
};

/// Throws ParameterError unless rho > 0, tol > 0 and the reference control exists.
void validate(const PenaltyConfig& cfg, const ControlProblem& p);

using PenaltyMasks = std::vector<kernels::RowMask>;

struct PenaltyIterate {
    Vector x;
    /// Masks of the previous iterate that produced x (one per control; the
    /// reference control's mask is all zero).
    PenaltyMasks masks;
    Vector g_residual;
    std::size_t iter = 0;
};

/// G(x) = (A_ref x - b_ref) - rho * sum_{s != ref} max(b_s - A_s x, 0).
Vector penalty_residual(const ControlProblem& p, const PenaltyConfig& cfg,
                        std::span<const double> x);

PenaltyMasks penalty_masks(const ControlProblem& p, const PenaltyConfig& cfg,
                           std::span<const double> x);

/// A_ref + rho * sum_{s != ref} (A_s restricted to the masked rows).
/// The result is certified as an M-matrix; throws MMatrixError otherwise.
BandedMatrix build_jacobian(const ControlProblem& p, const PenaltyConfig& cfg,
                            const PenaltyMasks& masks);

/// One step: masks from x_prev, then solve
///   (A_ref + rho sum A_s^masked) x = b_ref + rho sum b_s^masked.
PenaltyIterate iterate(const ControlProblem& p, const PenaltyConfig& cfg,
                       std::span<const double> x_prev);

/// Iterates from x0 until ||G(x^n)||_inf / scale <= tol, or until the masks of
/// a fresh iterate repeat those that produced it (the next step would return
/// the same vector, so x^n is the exact fixed point). Running out of
/// iterations is reported through the termination field, not thrown.
SolveReport solve_penalised(const ControlProblem& p, const PenaltyConfig& cfg,
                            std::span<const double> x0);

}  // namespace hjb
