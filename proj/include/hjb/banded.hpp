#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hjb {

using Vector = std::vector<double>;

enum class MMatrixViolation {
    none,
    nonpositive_diagonal,
    positive_off_diagonal,
    negative_row_sum,
    no_positive_row_sum,
};

struct MMatrixReport {
    MMatrixViolation violation = MMatrixViolation::none;
    std::size_t row = 0;

    bool ok() const { return violation == MMatrixViolation::none; }
    explicit operator bool() const { return ok(); }
    std::string message() const;
};

/// Tridiagonal matrix stored as three bands.
///
/// Memory layout:
/// - lower[i] holds A[i+1, i]   (i = 0..n-2)
/// - diag[i]  holds A[i, i]     (i = 0..n-1)
/// - upper[i] holds A[i, i+1]   (i = 0..n-2)
///
/// The matrix remembers whether it passed M-matrix validation. Any mutable
/// band access drops that mark.
class BandedMatrix {
public:
    explicit BandedMatrix(std::size_t n);
    BandedMatrix(Vector lower, Vector diag, Vector upper);

    static BandedMatrix identity(std::size_t n);

    std::size_t size() const { return diag_.size(); }

    std::span<const double> lower() const { return lower_; }
    std::span<const double> diag() const { return diag_; }
    std::span<const double> upper() const { return upper_; }

    std::span<double> lower() { checked_ = false; return lower_; }
    std::span<double> diag() { checked_ = false; return diag_; }
    std::span<double> upper() { checked_ = false; return upper_; }

    /// Entry (i, j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;

    /// (A x)_i without forming the product vector.
    double apply_row(std::size_t i, std::span<const double> x) const {
        double v = diag_[i] * x[i];
        if (i > 0) v += lower_[i - 1] * x[i - 1];
        if (i + 1 < diag_.size()) v += upper_[i] * x[i + 1];
        return v;
    }

    double row_sum(std::size_t i) const;

    Vector multiply(std::span<const double> x) const;

    BandedMatrix negated() const;

    /// Overwrites row i with row i of `src`.
    void copy_row_from(const BandedMatrix& src, std::size_t i);

    /// Adds `factor` times row i of `src` to row i of this matrix.
    void add_row_from(const BandedMatrix& src, std::size_t i, double factor);

    bool m_matrix_checked() const { return checked_; }

    /// Runs validate_m_matrix and records the outcome.
    MMatrixReport certify();

    friend bool operator==(const BandedMatrix& a, const BandedMatrix& b) {
        return a.lower_ == b.lower_ && a.diag_ == b.diag_ && a.upper_ == b.upper_;
    }

private:
    Vector lower_;
    Vector diag_;
    Vector upper_;
    bool checked_ = false;
};

/// Structural M-matrix test: positive diagonal, non-positive off-diagonals,
/// non-negative row sums, at least one strictly positive row sum. Reports the
/// first offending row.
MMatrixReport validate_m_matrix(const BandedMatrix& m);

/// Certifies `m` in place, throwing MMatrixError with `context` prepended when
/// validation fails.
void require_m_matrix(BandedMatrix& m, const std::string& context);

/// Row indices whose row sum is strictly positive.
std::vector<std::size_t> positive_row_sum_rows(const BandedMatrix& m);

/// Direct tridiagonal solve (Thomas elimination, no pivoting).
///
/// Throws SingularPivotError when a pivot magnitude falls below
/// 1e-14 times the largest diagonal magnitude.
Vector solve(const BandedMatrix& m, std::span<const double> rhs);

struct RowSource {
    const BandedMatrix* matrix;
    std::size_t row;
};

/// Builds a matrix whose row i is row i of the source naming row i. Every
/// output row must be named exactly once. The result is certified when it
/// passes M-matrix validation.
BandedMatrix row_splice(std::span<const RowSource> sources);

/// Row i taken from family[choice[i]].
BandedMatrix row_splice(std::span<const BandedMatrix> family,
                        std::span<const std::size_t> choice);

double inf_norm(std::span<const double> v);

}  // namespace hjb
