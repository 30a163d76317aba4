#include "hjb/problem.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hjb {

ControlProblem::ControlProblem(std::vector<std::string> labels,
                               std::vector<BandedMatrix> matrices,
                               std::vector<Vector> rhs,
                               Sense sense)
    : rhs_(std::move(rhs))
    , sense_(sense) {
    if (matrices.empty()) throw DimensionError("control problem needs at least one control");
    if (labels.size() != matrices.size())
        throw DimensionError("control problem: " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(matrices.size()) + " matrices");
    const std::size_t n = matrices.front().size();
    for (const auto& m : matrices)
        if (m.size() != n) throw DimensionError("control problem: matrices differ in dimension");

    if (sense == Sense::min) {
        std::vector<std::size_t> positive_rows;
        for (std::size_t s = 0; s < matrices.size(); ++s) {
            require_m_matrix(matrices[s], "control '" + labels[s] + "'");
            auto rows = positive_row_sum_rows(matrices[s]);
            if (s == 0) {
                positive_rows = std::move(rows);
            } else if (rows != positive_rows) {
                throw MMatrixError("control '" + labels[s] +
                                   "': positive row sums not co-located with control '" +
                                   labels[0] + "'");
            }
        }
    }

    auto ops = std::make_shared<Operators>();
    ops->labels = std::move(labels);
    ops->matrices = std::move(matrices);
    ops_ = std::move(ops);
    check_rhs();
    compute_scale();
}

ControlProblem::ControlProblem(std::shared_ptr<const Operators> ops, std::vector<Vector> rhs,
                               Sense sense)
    : ops_(std::move(ops))
    , rhs_(std::move(rhs))
    , sense_(sense) {
    check_rhs();
    compute_scale();
}

ControlProblem ControlProblem::with_rhs(std::vector<Vector> rhs) const {
    return ControlProblem(ops_, std::move(rhs), sense_);
}

ControlProblem ControlProblem::with_uniform_rhs(std::span<const double> b) const {
    return ControlProblem(ops_, std::vector<Vector>(num_controls(), Vector(b.begin(), b.end())),
                          sense_);
}

void ControlProblem::check_rhs() const {
    if (rhs_.size() != ops_->matrices.size())
        throw DimensionError("control problem: " + std::to_string(rhs_.size()) +
                             " right-hand sides for " + std::to_string(ops_->matrices.size()) +
                             " controls");
    for (const auto& b : rhs_)
        if (b.size() != size()) throw DimensionError("control problem: rhs length mismatch");
}

void ControlProblem::compute_scale() {
    double norm = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& b : rhs_) m = std::max(m, b[i]);
        norm = std::max(norm, std::abs(m));
    }
    scale_ = std::max(norm, 1.0);
}

Residual residual(const ControlProblem& p, std::span<const double> x) {
    if (x.size() != p.size())
        throw DimensionError("residual: x has length " + std::to_string(x.size()) +
                             ", problem dimension " + std::to_string(p.size()));
    Residual r;
    r.per_control.reserve(p.num_controls());
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        Vector v = p.matrix(s).multiply(x);
        const auto b = p.rhs(s);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b[i];
        r.per_control.push_back(std::move(v));
    }
    r.min_envelope = r.per_control.front();
    for (const auto& v : r.per_control)
        for (std::size_t i = 0; i < v.size(); ++i)
            r.min_envelope[i] = std::min(r.min_envelope[i], v[i]);
    return r;
}

Verification verify_solution(const ControlProblem& p, std::span<const double> x, double tol) {
    if (!(tol > 0.0)) throw ParameterError("verify_solution: tol must be positive");
    if (x.size() != p.size())
        throw DimensionError("verify_solution: x has length " + std::to_string(x.size()) +
                             ", problem dimension " + std::to_string(p.size()));

    // Max-sense rows are checked through the negated values.
    const double sign = p.sense() == Sense::max ? -1.0 : 1.0;
    const double inv_scale = 1.0 / p.scale();
    const std::size_t n = p.size();

    Verification v;
    v.worst_excess = -std::numeric_limits<double>::infinity();
    Vector row_min(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> row_arg(n, 0);
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        const auto& a = p.matrix(s);
        const auto b = p.rhs(s);
        for (std::size_t i = 0; i < n; ++i) {
            const double value = sign * (a.apply_row(i, x) - b[i]) * inv_scale;
            // lower side: value >= -tol
            const double excess = -value - tol;
            if (excess > v.worst_excess) {
                v.worst_excess = excess;
                v.worst_row = i;
                v.worst_control = s;
            }
            if (value < row_min[i]) {
                row_min[i] = value;
                row_arg[i] = s;
            }
        }
    }
    bool upper_side_worst = false;
    for (std::size_t i = 0; i < n; ++i) {
        // upper side: some control has value <= tol
        const double excess = row_min[i] - tol;
        if (excess > v.worst_excess) {
            v.worst_excess = excess;
            v.worst_row = i;
            v.worst_control = row_arg[i];
            upper_side_worst = true;
        }
    }
    v.ok = v.worst_excess <= 0.0;

    std::ostringstream msg;
    msg.precision(6);
    if (v.ok) {
        msg << "verified (worst margin " << v.worst_excess << ")";
    } else if (upper_side_worst) {
        msg << "row " << v.worst_row << ": no control attains the minimum; smallest scaled value "
            << (v.worst_excess + tol) << " from control '" << p.label(v.worst_control) << "'";
    } else {
        msg << "row " << v.worst_row << ", control '" << p.label(v.worst_control)
            << "': scaled value " << -(v.worst_excess + tol) << " below -tol";
    }
    v.diagnostic = msg.str();
    return v;
}

ControlProblem negate_to_min_form(const ControlProblem& p) {
    if (p.sense() != Sense::max)
        throw ParameterError("negate_to_min_form: problem is already in min form");
    std::vector<std::string> labels(p.labels().begin(), p.labels().end());
    std::vector<BandedMatrix> matrices;
    std::vector<Vector> rhs;
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        matrices.push_back(p.matrix(s).negated());
        Vector b(p.rhs(s).begin(), p.rhs(s).end());
        for (auto& v : b) v = -v;
        rhs.push_back(std::move(b));
    }
    return ControlProblem(std::move(labels), std::move(matrices), std::move(rhs), Sense::min);
}

}  // namespace hjb
