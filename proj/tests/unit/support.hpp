#pragma once

#include "hjb/banded.hpp"
#include "hjb/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

namespace testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline hjb::BandedMatrix tridiag(hjb::Vector lower, hjb::Vector diag, hjb::Vector upper) {
    return hjb::BandedMatrix(std::move(lower), std::move(diag), std::move(upper));
}

/// min{x, x - 1} = 0, solution x = 1.
inline hjb::ControlProblem scalar_instance() {
    return hjb::ControlProblem({"s0", "s1"},
                               {hjb::BandedMatrix::identity(1), hjb::BandedMatrix::identity(1)},
                               {{0.0}, {1.0}});
}

/// A0 = tridiag(-1, 2, -1), b0 = (1, 1); A1 = I, b1 = (0.3, 0.2). Solution (1, 1).
inline hjb::ControlProblem two_by_two_instance() {
    return hjb::ControlProblem({"s0", "s1"},
                               {tridiag({-1.0}, {2.0, 2.0}, {-1.0}), hjb::BandedMatrix::identity(2)},
                               {{1.0, 1.0}, {0.3, 0.2}});
}

/// Random tridiagonal M-matrix. With `weak` some rows get a zero row sum
/// (entries are then multiples of 1/8 so the sums are exact); row 0 always
/// keeps a positive one.
inline hjb::BandedMatrix random_m_matrix(std::mt19937_64& rng, std::size_t n, bool weak = false,
                                         double min_margin = 0.01) {
    std::uniform_real_distribution<double> off(-1.0, 0.0);
    std::uniform_real_distribution<double> margin(min_margin, 1.0);
    std::bernoulli_distribution zero_sum(0.3);
    hjb::BandedMatrix m(n);
    auto lo = m.lower();
    auto up = m.upper();
    auto d = m.diag();
    // Nonzero couplings keep weak matrices irreducible, hence nonsingular.
    std::uniform_int_distribution<int> eighths(1, 8);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        lo[i] = weak ? -eighths(rng) / 8.0 : off(rng);
        up[i] = weak ? -eighths(rng) / 8.0 : off(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        if (i > 0) s -= lo[i - 1];
        if (i + 1 < n) s -= up[i];
        const bool tight = weak && i > 0 && s > 0.0 && zero_sum(rng);
        d[i] = s + (tight ? 0.0 : weak ? eighths(rng) / 8.0 + 0.125 : margin(rng));
    }
    return m;
}

/// Problem with random strictly dominant M-matrices and random rhs. The
/// diagonal margin bounds ||A_s^-1||_inf by 1 / min_margin.
inline hjb::ControlProblem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t controls,
                                          double min_margin = 0.01) {
    std::uniform_real_distribution<double> rhs(-1.0, 1.0);
    std::vector<std::string> labels;
    std::vector<hjb::BandedMatrix> mats;
    std::vector<hjb::Vector> b;
    for (std::size_t s = 0; s < controls; ++s) {
        labels.push_back("c" + std::to_string(s));
        mats.push_back(random_m_matrix(rng, n, false, min_margin));
        hjb::Vector v(n);
        for (auto& x : v) x = rhs(rng);
        b.push_back(std::move(v));
    }
    return hjb::ControlProblem(std::move(labels), std::move(mats), std::move(b));
}

}  // namespace testing
