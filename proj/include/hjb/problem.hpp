#pragma once

#include "hjb/banded.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hjb {

enum class Sense { min, max };

/// Discrete HJB system  min_s { A_s x - b_s } = 0  (or max_s for Sense::max)
/// over a finite, ordered control set.
///
/// Matrices and labels live in a shared immutable block so that problems
/// differing only in their right-hand sides (one per time level) share them.
/// Min-sense problems require every A_s to be an M-matrix and the rows with
/// strictly positive row sum to be the same set for all controls.
class ControlProblem {
public:
    ControlProblem(std::vector<std::string> labels,
                   std::vector<BandedMatrix> matrices,
                   std::vector<Vector> rhs,
                   Sense sense = Sense::min);

    /// Same controls and matrices, new right-hand sides. No revalidation.
    ControlProblem with_rhs(std::vector<Vector> rhs) const;

    /// Same controls and matrices with b_s = b for every control.
    ControlProblem with_uniform_rhs(std::span<const double> b) const;

    std::size_t size() const { return ops_->matrices.front().size(); }
    std::size_t num_controls() const { return ops_->matrices.size(); }
    Sense sense() const { return sense_; }

    const std::string& label(std::size_t s) const { return ops_->labels[s]; }
    std::span<const std::string> labels() const { return ops_->labels; }
    const BandedMatrix& matrix(std::size_t s) const { return ops_->matrices[s]; }
    std::span<const BandedMatrix> matrices() const { return ops_->matrices; }
    std::span<const double> rhs(std::size_t s) const { return rhs_[s]; }

    /// max(|| max_s b_s ||_inf, 1): the denominator of the relative termination
    /// criteria. The floor keeps zero data well defined.
    double scale() const { return scale_; }

private:
    struct Operators {
        std::vector<std::string> labels;
        std::vector<BandedMatrix> matrices;
    };

    ControlProblem(std::shared_ptr<const Operators> ops, std::vector<Vector> rhs, Sense sense);
    void check_rhs() const;
    void compute_scale();

    std::shared_ptr<const Operators> ops_;
    std::vector<Vector> rhs_;
    Sense sense_;
    double scale_ = 1.0;
};

struct Residual {
    /// per_control[s][i] = (A_s x - b_s)_i
    std::vector<Vector> per_control;
    /// min_envelope[i] = min_s per_control[s][i]
    Vector min_envelope;
};

Residual residual(const ControlProblem& p, std::span<const double> x);

struct Verification {
    bool ok = false;
    /// Largest scaled amount by which either side of the criterion is
    /// exceeded; <= 0 when ok.
    double worst_excess = 0.0;
    std::size_t worst_row = 0;
    std::size_t worst_control = 0;
    std::string diagnostic;

    explicit operator bool() const { return ok; }
};

/// Two-sided test on the scaled residual: every (A_s x - b_s)_i / scale is
/// >= -tol, and every row has some control r with (A_r x - b_r)_i / scale <= tol.
Verification verify_solution(const ControlProblem& p, std::span<const double> x, double tol);

/// max_s {A_s x - b_s} = 0  is rewritten as  min_s {(-A_s) x - (-b_s)} = 0.
/// Throws MMatrixError when some -A_s is not an M-matrix.
ControlProblem negate_to_min_form(const ControlProblem& p);

}  // namespace hjb
