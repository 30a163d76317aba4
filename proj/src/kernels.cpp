#include "hjb/kernels.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <string>

namespace hjb::kernels {

namespace {

void check_vector(const ControlProblem& p, std::span<const double> v, const char* what) {
    if (v.size() != p.size())
        throw DimensionError(std::string(what) + ": length " + std::to_string(v.size()) +
                             " != " + std::to_string(p.size()));
}

void check_masks(const ControlProblem& p, const std::vector<RowMask>& masks) {
    if (masks.size() != p.num_controls())
        throw DimensionError("penalty masks: expected one mask per control");
    for (const auto& m : masks)
        if (m.size() != p.size()) throw DimensionError("penalty masks: wrong mask length");
}

void check_reference(const ControlProblem& p, std::size_t ref) {
    if (ref >= p.num_controls())
        throw ParameterError("reference control " + std::to_string(ref) + " out of range");
}

void resize_masks(const ControlProblem& p, std::vector<RowMask>& masks) {
    masks.resize(p.num_controls());
    for (auto& m : masks) m.assign(p.size(), 0);
}

}  // namespace

namespace serial {

void envelope(const ControlProblem& p, std::span<const double> x,
              std::span<double> min_out, std::span<std::size_t> argmin_out) {
    check_vector(p, x, "envelope x");
    check_vector(p, min_out, "envelope output");
    const bool want_arg = !argmin_out.empty();
    if (want_arg && argmin_out.size() != p.size())
        throw DimensionError("envelope: argmin output has wrong length");

    const std::size_t n = p.size();
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        const auto& a = p.matrix(s);
        const auto b = p.rhs(s);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = a.apply_row(i, x) - b[i];
            if (s == 0 || v < min_out[i]) {
                min_out[i] = v;
                if (want_arg) argmin_out[i] = s;
            }
        }
    }
}

void penalty_residual(const ControlProblem& p, std::size_t ref, double rho,
                      std::span<const double> x, std::span<double> out) {
    check_reference(p, ref);
    check_vector(p, x, "penalty residual x");
    check_vector(p, out, "penalty residual output");
    const std::size_t n = p.size();
    {
        const auto& a = p.matrix(ref);
        const auto b = p.rhs(ref);
        for (std::size_t i = 0; i < n; ++i) out[i] = a.apply_row(i, x) - b[i];
    }
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        if (s == ref) continue;
        const auto& a = p.matrix(s);
        const auto b = p.rhs(s);
        for (std::size_t i = 0; i < n; ++i)
            out[i] -= rho * std::max(b[i] - a.apply_row(i, x), 0.0);
    }
}

void penalty_masks(const ControlProblem& p, std::size_t ref, bool strict,
                   std::span<const double> x, std::vector<RowMask>& masks) {
    check_reference(p, ref);
    check_vector(p, x, "penalty masks x");
    resize_masks(p, masks);
    const std::size_t n = p.size();
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        if (s == ref) continue;
        const auto& a = p.matrix(s);
        const auto b = p.rhs(s);
        for (std::size_t i = 0; i < n; ++i) {
            const double gap = b[i] - a.apply_row(i, x);
            masks[s][i] = strict ? gap > 0.0 : gap >= 0.0;
        }
    }
}

void assemble_penalty_system(const ControlProblem& p, std::size_t ref, double rho,
                             const std::vector<RowMask>& masks,
                             BandedMatrix& jac, std::span<double> rhs) {
    check_reference(p, ref);
    check_masks(p, masks);
    check_vector(p, rhs, "penalty rhs");
    if (jac.size() != p.size()) throw DimensionError("penalty jacobian: wrong dimension");

    jac = p.matrix(ref);
    std::ranges::copy(p.rhs(ref), rhs.begin());
    for (std::size_t s = 0; s < p.num_controls(); ++s) {
        if (s == ref) continue;
        const auto& a = p.matrix(s);
        const auto b = p.rhs(s);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!masks[s][i]) continue;
            jac.add_row_from(a, i, rho);
            rhs[i] += rho * b[i];
        }
    }
}

void splice_policy_system(const ControlProblem& p, std::span<const std::size_t> policy,
                          BandedMatrix& mat, std::span<double> rhs) {
    if (policy.size() != p.size()) throw DimensionError("policy: wrong length");
    check_vector(p, rhs, "policy rhs");
    if (mat.size() != p.size()) throw DimensionError("policy matrix: wrong dimension");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (policy[i] >= p.num_controls())
            throw DimensionError("policy: control index out of range at row " + std::to_string(i));
        mat.copy_row_from(p.matrix(policy[i]), i);
        rhs[i] = p.rhs(policy[i])[i];
    }
}

}  // namespace serial

namespace parallel {

void envelope(const ControlProblem& p, std::span<const double> x,
              std::span<double> min_out, std::span<std::size_t> argmin_out) {
    check_vector(p, x, "envelope x");
    check_vector(p, min_out, "envelope output");
    const bool want_arg = !argmin_out.empty();
    if (want_arg && argmin_out.size() != p.size())
        throw DimensionError("envelope: argmin output has wrong length");

    const auto n = static_cast<std::ptrdiff_t>(p.size());
    const std::size_t controls = p.num_controls();
#pragma omp parallel for schedule(static) if (p.size() >= kParallelMinRows)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double best = p.matrix(0).apply_row(i, x) - p.rhs(0)[i];
        std::size_t arg = 0;
        for (std::size_t s = 1; s < controls; ++s) {
            const double v = p.matrix(s).apply_row(i, x) - p.rhs(s)[i];
            if (v < best) {
                best = v;
                arg = s;
            }
        }
        min_out[i] = best;
        if (want_arg) argmin_out[i] = arg;
    }
}

void penalty_residual(const ControlProblem& p, std::size_t ref, double rho,
                      std::span<const double> x, std::span<double> out) {
    check_reference(p, ref);
    check_vector(p, x, "penalty residual x");
    check_vector(p, out, "penalty residual output");
    const auto n = static_cast<std::ptrdiff_t>(p.size());
    const std::size_t controls = p.num_controls();
#pragma omp parallel for schedule(static) if (p.size() >= kParallelMinRows)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double g = p.matrix(ref).apply_row(i, x) - p.rhs(ref)[i];
        for (std::size_t s = 0; s < controls; ++s) {
            if (s == ref) continue;
            g -= rho * std::max(p.rhs(s)[i] - p.matrix(s).apply_row(i, x), 0.0);
        }
        out[i] = g;
    }
}

void penalty_masks(const ControlProblem& p, std::size_t ref, bool strict,
                   std::span<const double> x, std::vector<RowMask>& masks) {
    check_reference(p, ref);
    check_vector(p, x, "penalty masks x");
    resize_masks(p, masks);
    const auto n = static_cast<std::ptrdiff_t>(p.size());
    const std::size_t controls = p.num_controls();
#pragma omp parallel for schedule(static) if (p.size() >= kParallelMinRows)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t s = 0; s < controls; ++s) {
            if (s == ref) continue;
            const double gap = p.rhs(s)[i] - p.matrix(s).apply_row(i, x);
            masks[s][i] = strict ? gap > 0.0 : gap >= 0.0;
        }
    }
}

void assemble_penalty_system(const ControlProblem& p, std::size_t ref, double rho,
                             const std::vector<RowMask>& masks,
                             BandedMatrix& jac, std::span<double> rhs) {
    check_reference(p, ref);
    check_masks(p, masks);
    check_vector(p, rhs, "penalty rhs");
    if (jac.size() != p.size()) throw DimensionError("penalty jacobian: wrong dimension");

    const std::size_t size = p.size();
    const auto n = static_cast<std::ptrdiff_t>(size);
    const std::size_t controls = p.num_controls();
    auto lo = jac.lower();
    auto di = jac.diag();
    auto up = jac.upper();
#pragma omp parallel for schedule(static) if (size >= kParallelMinRows)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto& a0 = p.matrix(ref);
        double l = i > 0 ? a0.lower()[i - 1] : 0.0;
        double d = a0.diag()[i];
        double u = i + 1 < size ? a0.upper()[i] : 0.0;
        double r = p.rhs(ref)[i];
        for (std::size_t s = 0; s < controls; ++s) {
            if (s == ref || !masks[s][i]) continue;
            const auto& a = p.matrix(s);
            if (i > 0) l += rho * a.lower()[i - 1];
            d += rho * a.diag()[i];
            if (i + 1 < size) u += rho * a.upper()[i];
            r += rho * p.rhs(s)[i];
        }
        if (i > 0) lo[i - 1] = l;
        di[i] = d;
        if (i + 1 < size) up[i] = u;
        rhs[i] = r;
    }
}

void splice_policy_system(const ControlProblem& p, std::span<const std::size_t> policy,
                          BandedMatrix& mat, std::span<double> rhs) {
    if (policy.size() != p.size()) throw DimensionError("policy: wrong length");
    check_vector(p, rhs, "policy rhs");
    if (mat.size() != p.size()) throw DimensionError("policy matrix: wrong dimension");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (policy[i] >= p.num_controls())
            throw DimensionError("policy: control index out of range at row " + std::to_string(i));

    const std::size_t size = p.size();
    const auto n = static_cast<std::ptrdiff_t>(size);
    auto lo = mat.lower();
    auto di = mat.diag();
    auto up = mat.upper();
#pragma omp parallel for schedule(static) if (size >= kParallelMinRows)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto& a = p.matrix(policy[i]);
        if (i > 0) lo[i - 1] = a.lower()[i - 1];
        di[i] = a.diag()[i];
        if (i + 1 < size) up[i] = a.upper()[i];
        rhs[i] = p.rhs(policy[i])[i];
    }
}

}  // namespace parallel

}  // namespace hjb::kernels
