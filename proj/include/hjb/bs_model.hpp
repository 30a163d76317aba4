#pragma once

#include "hjb/banded.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hjb {

/// Cash borrowing/lending rates, stock borrowing fee and volatility, all per
/// year. No-arbitrage requires r_b >= r_l >= r_f >= 0.
struct MarketParams {
    double r_b = 0.15;
    double r_l = 0.1;
    double r_f = 0.08;
    double sigma = 0.4;

    void validate() const;

    friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

/// Uniform grid on [0, s_max] x [0, T] with M time levels and N space nodes.
class Grid {
public:
    Grid(double s_max, double horizon, std::size_t time_levels, std::size_t space_nodes);

    double s_max() const { return s_max_; }
    double horizon() const { return horizon_; }
    std::size_t time_levels() const { return m_; }
    std::size_t space_nodes() const { return n_; }
    /// k = T / (M - 1)
    double dt() const { return dt_; }
    /// h = s_max / (N - 1)
    double ds() const { return ds_; }
    double spot(std::size_t i) const {
        return static_cast<double>(i) * s_max_ / static_cast<double>(n_ - 1);
    }

private:
    double s_max_;
    double horizon_;
    std::size_t m_;
    std::size_t n_;
    double dt_;
    double ds_;
};

/// Interest rate r and dividend-like yield q of one Black-Scholes operator.
struct RateControl {
    double r = 0.0;
    double q = 0.0;
    std::string label;

    friend bool operator==(const RateControl& a, const RateControl& b) {
        return a.r == b.r && a.q == b.q;
    }
};

/// The four hedging regimes, in this order:
///   (r_l, 0), (r_b, 0), (r_l, r_f), (r_b, r_b - r_l + r_f).
std::vector<RateControl> borrow_lend_controls(const MarketParams& mp);

/// Fully implicit step matrix: for interior node i (S = i h)
///   a_i = -1/2 i^2 sigma^2 k + 1/2 i (r - q) k      (sub-diagonal)
///   b_i = 1 + i^2 sigma^2 k + r k                    (diagonal)
///   c_i = -1/2 i^2 sigma^2 k - 1/2 i (r - q) k      (super-diagonal)
/// and identity rows at nodes 0 and N-1 (Dirichlet data carried by the
/// right-hand side). Throws MMatrixError when a row is drift dominated
/// (i sigma^2 < |r - q|), ParameterError when sigma <= 0.
BandedMatrix bs_matrix(const RateControl& control, double sigma, const Grid& grid);

/// Payoff given by breakpoints (S, P); linear in between, constant outside.
class PiecewiseLinearPayoff {
public:
    explicit PiecewiseLinearPayoff(std::vector<std::pair<double, double>> breakpoints);

    double operator()(double s) const;
    std::span<const std::pair<double, double>> breakpoints() const { return points_; }

    friend bool operator==(const PiecewiseLinearPayoff&, const PiecewiseLinearPayoff&) = default;

private:
    std::vector<std::pair<double, double>> points_;
};

/// Short butterfly: 0 up to 100, up to 25 at 200, back to 0 at 300.
PiecewiseLinearPayoff butterfly_payoff();

/// P(i h) for i = 0..N-1.
Vector sample_payoff(const PiecewiseLinearPayoff& payoff, const Grid& grid);

/// Same on N nodes spanning [0, s_max]; accepts N >= 2.
Vector sample_payoff(const PiecewiseLinearPayoff& payoff, double s_max, std::size_t nodes);

}  // namespace hjb
