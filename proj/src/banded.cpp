#include "hjb/banded.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hjb {

BandedMatrix::BandedMatrix(std::size_t n)
    : lower_(n > 0 ? n - 1 : 0, 0.0)
    , diag_(n, 0.0)
    , upper_(n > 0 ? n - 1 : 0, 0.0) {
    if (n == 0) throw DimensionError("banded matrix dimension must be at least 1");
}

BandedMatrix::BandedMatrix(Vector lower, Vector diag, Vector upper)
    : lower_(std::move(lower))
    , diag_(std::move(diag))
    , upper_(std::move(upper)) {
    if (diag_.empty()) throw DimensionError("banded matrix dimension must be at least 1");
    if (lower_.size() + 1 != diag_.size() || upper_.size() + 1 != diag_.size())
        throw DimensionError("band lengths inconsistent with diagonal length " +
                             std::to_string(diag_.size()));
}

BandedMatrix BandedMatrix::identity(std::size_t n) {
    BandedMatrix m(n);
    std::fill(m.diag_.begin(), m.diag_.end(), 1.0);
    m.checked_ = true;
    return m;
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i == j) return diag_[i];
    if (j + 1 == i) return lower_[j];
    if (i + 1 == j) return upper_[i];
    return 0.0;
}

double BandedMatrix::row_sum(std::size_t i) const {
    double s = diag_[i];
    if (i > 0) s += lower_[i - 1];
    if (i + 1 < diag_.size()) s += upper_[i];
    return s;
}

Vector BandedMatrix::multiply(std::span<const double> x) const {
    if (x.size() != size())
        throw DimensionError("multiply: vector length " + std::to_string(x.size()) +
                             " != " + std::to_string(size()));
    Vector out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = apply_row(i, x);
    return out;
}

BandedMatrix BandedMatrix::negated() const {
    BandedMatrix m(*this);
    for (auto& v : m.lower_) v = -v;
    for (auto& v : m.diag_) v = -v;
    for (auto& v : m.upper_) v = -v;
    m.checked_ = false;
    return m;
}

void BandedMatrix::copy_row_from(const BandedMatrix& src, std::size_t i) {
    checked_ = false;
    diag_[i] = src.diag_[i];
    if (i > 0) lower_[i - 1] = src.lower_[i - 1];
    if (i + 1 < diag_.size()) upper_[i] = src.upper_[i];
}

void BandedMatrix::add_row_from(const BandedMatrix& src, std::size_t i, double factor) {
    checked_ = false;
    diag_[i] += factor * src.diag_[i];
    if (i > 0) lower_[i - 1] += factor * src.lower_[i - 1];
    if (i + 1 < diag_.size()) upper_[i] += factor * src.upper_[i];
}

MMatrixReport BandedMatrix::certify() {
    auto report = validate_m_matrix(*this);
    checked_ = report.ok();
    return report;
}

std::string MMatrixReport::message() const {
    const auto at = " at row " + std::to_string(row);
    switch (violation) {
        case MMatrixViolation::none: return "ok";
        case MMatrixViolation::nonpositive_diagonal: return "non-positive diagonal entry" + at;
        case MMatrixViolation::positive_off_diagonal: return "positive off-diagonal entry" + at;
        case MMatrixViolation::negative_row_sum: return "negative row sum" + at;
        case MMatrixViolation::no_positive_row_sum: return "no positive row sum";
    }
    return "unknown violation";
}

MMatrixReport validate_m_matrix(const BandedMatrix& m) {
    const std::size_t n = m.size();
    const auto lo = m.lower();
    const auto di = m.diag();
    const auto up = m.upper();
    bool any_positive = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(di[i] > 0.0)) return {MMatrixViolation::nonpositive_diagonal, i};
        if ((i > 0 && !(lo[i - 1] <= 0.0)) || (i + 1 < n && !(up[i] <= 0.0)))
            return {MMatrixViolation::positive_off_diagonal, i};
        const double s = m.row_sum(i);
        if (!(s >= 0.0)) return {MMatrixViolation::negative_row_sum, i};
        any_positive = any_positive || s > 0.0;
    }
    if (!any_positive) return {MMatrixViolation::no_positive_row_sum, 0};
    return {};
}

void require_m_matrix(BandedMatrix& m, const std::string& context) {
    const auto report = m.certify();
    if (!report) throw MMatrixError(context + ": " + report.message());
}

std::vector<std::size_t> positive_row_sum_rows(const BandedMatrix& m) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.row_sum(i) > 0.0) rows.push_back(i);
    return rows;
}

Vector solve(const BandedMatrix& m, std::span<const double> rhs) {
    const std::size_t n = m.size();
    if (rhs.size() != n)
        throw DimensionError("solve: rhs length " + std::to_string(rhs.size()) +
                             " != " + std::to_string(n));
    const auto lo = m.lower();
    const auto di = m.diag();
    const auto up = m.upper();

    double max_diag = 0.0;
    for (double d : di) max_diag = std::max(max_diag, std::abs(d));
    const double threshold = 1e-14 * max_diag;

    Vector c_prime(n);
    Vector x(n);
    double pivot = di[0];
    if (!(std::abs(pivot) >= threshold) || pivot == 0.0) throw SingularPivotError(0, pivot);
    c_prime[0] = n > 1 ? up[0] / pivot : 0.0;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = di[i] - lo[i - 1] * c_prime[i - 1];
        if (!(std::abs(pivot) >= threshold) || pivot == 0.0) throw SingularPivotError(i, pivot);
        c_prime[i] = i + 1 < n ? up[i] / pivot : 0.0;
        x[i] = (rhs[i] - lo[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
    return x;
}

BandedMatrix row_splice(std::span<const RowSource> sources) {
    if (sources.empty()) throw DimensionError("row_splice: no sources");
    const std::size_t n = sources.front().matrix->size();
    if (sources.size() != n)
        throw DimensionError("row_splice: " + std::to_string(sources.size()) +
                             " row assignments for dimension " + std::to_string(n));
    std::vector<bool> assigned(n, false);
    BandedMatrix out(n);
    for (const auto& src : sources) {
        if (src.matrix->size() != n)
            throw DimensionError("row_splice: source dimension " +
                                 std::to_string(src.matrix->size()) + " != " + std::to_string(n));
        if (src.row >= n || assigned[src.row])
            throw DimensionError("row_splice: row " + std::to_string(src.row) +
                                 " missing or assigned twice");
        assigned[src.row] = true;
        out.copy_row_from(*src.matrix, src.row);
    }
    out.certify();
    return out;
}

BandedMatrix row_splice(std::span<const BandedMatrix> family,
                        std::span<const std::size_t> choice) {
    std::vector<RowSource> sources;
    sources.reserve(choice.size());
    for (std::size_t i = 0; i < choice.size(); ++i) {
        if (choice[i] >= family.size())
            throw DimensionError("row_splice: choice " + std::to_string(choice[i]) +
                                 " out of range at row " + std::to_string(i));
        sources.push_back({&family[choice[i]], i});
    }
    return row_splice(sources);
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace hjb
