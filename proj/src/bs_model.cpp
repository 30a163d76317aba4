#include "hjb/bs_model.hpp"

#include "hjb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hjb {

void MarketParams::validate() const {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    if (!(r_f >= 0.0)) throw ParameterError("stock borrowing fee r_f must be non-negative");
    if (!(r_l >= r_f))
        throw ParameterError("no-arbitrage requires r_l >= r_f (got r_l = " + std::to_string(r_l) +
                             ", r_f = " + std::to_string(r_f) + ")");
    if (!(r_b >= r_l))
        throw ParameterError("no-arbitrage requires r_b >= r_l (got r_b = " + std::to_string(r_b) +
                             ", r_l = " + std::to_string(r_l) + ")");
}

Grid::Grid(double s_max, double horizon, std::size_t time_levels, std::size_t space_nodes)
    : s_max_(s_max)
    , horizon_(horizon)
    , m_(time_levels)
    , n_(space_nodes) {
    if (!(s_max > 0.0)) throw ParameterError("s_max must be positive");
    if (!(horizon > 0.0)) throw ParameterError("horizon T must be positive");
    if (time_levels < 2) throw ParameterError("need at least 2 time levels");
    if (space_nodes < 3) throw ParameterError("need at least 3 space nodes");
    dt_ = horizon / static_cast<double>(time_levels - 1);
    ds_ = s_max / static_cast<double>(space_nodes - 1);
}

std::vector<RateControl> borrow_lend_controls(const MarketParams& mp) {
    mp.validate();
    return {
        {mp.r_l, 0.0, "(r_l,0)"},
        {mp.r_b, 0.0, "(r_b,0)"},
        {mp.r_l, mp.r_f, "(r_l,r_f)"},
        {mp.r_b, mp.r_b - mp.r_l + mp.r_f, "(r_b,r_b-r_l+r_f)"},
    };
}

BandedMatrix bs_matrix(const RateControl& control, double sigma, const Grid& grid) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    const std::size_t n = grid.space_nodes();
    const double k = grid.dt();
    const double var = sigma * sigma;
    const double drift = control.r - control.q;

    BandedMatrix m(n);
    auto lo = m.lower();
    auto di = m.diag();
    auto up = m.upper();
    di[0] = 1.0;
    up[0] = 0.0;
    di[n - 1] = 1.0;
    lo[n - 2] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = static_cast<double>(i);
        lo[i - 1] = -0.5 * x * x * var * k + 0.5 * x * drift * k;
        di[i] = 1.0 + x * x * var * k + control.r * k;
        up[i] = -0.5 * x * x * var * k - 0.5 * x * drift * k;
    }

    const auto report = m.certify();
    if (!report) {
        std::ostringstream msg;
        msg << "control " << control.label << " (r = " << control.r << ", q = " << control.q
            << "): " << report.message();
        if (report.violation == MMatrixViolation::positive_off_diagonal) {
            const double x = static_cast<double>(report.row);
            msg << "; drift dominates diffusion: i*sigma^2 = " << x * var
                << " < |r - q| = " << std::abs(drift);
        }
        throw MMatrixError(msg.str());
    }
    return m;
}

PiecewiseLinearPayoff::PiecewiseLinearPayoff(std::vector<std::pair<double, double>> breakpoints)
    : points_(std::move(breakpoints)) {
    if (points_.empty()) throw ParameterError("payoff needs at least one breakpoint");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i].first > points_[i - 1].first))
            throw ParameterError("payoff breakpoints must have strictly increasing S");
}

double PiecewiseLinearPayoff::operator()(double s) const {
    if (s <= points_.front().first) return points_.front().second;
    if (s >= points_.back().first) return points_.back().second;
    const auto it = std::upper_bound(points_.begin(), points_.end(), s,
                                     [](double v, const auto& p) { return v < p.first; });
    const auto& [s1, p1] = *it;
    const auto& [s0, p0] = *(it - 1);
    return p0 + (p1 - p0) * (s - s0) / (s1 - s0);
}

PiecewiseLinearPayoff butterfly_payoff() {
    return PiecewiseLinearPayoff({{0.0, 0.0}, {100.0, 0.0}, {200.0, 25.0}, {300.0, 0.0}, {600.0, 0.0}});
}

Vector sample_payoff(const PiecewiseLinearPayoff& payoff, const Grid& grid) {
    return sample_payoff(payoff, grid.s_max(), grid.space_nodes());
}

Vector sample_payoff(const PiecewiseLinearPayoff& payoff, double s_max, std::size_t nodes) {
    if (nodes < 2) throw ParameterError("need at least 2 nodes to sample a payoff");
    const auto intervals = static_cast<double>(nodes - 1);
    Vector v(nodes);
    for (std::size_t i = 0; i < nodes; ++i) v[i] = payoff(static_cast<double>(i) * s_max / intervals);
    return v;
}

}  // namespace hjb
