#include "hjb/errors.hpp"
#include "hjb/timestepper.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace hjb;
using testing::max_abs_diff;

namespace {

const Grid kTable1(600.0, 1.0, 400, 400);

SolverSettings penalty_rho(double rho) {
    SolverSettings s;
    s.penalty.rho = rho;
    return s;
}

double surface_diff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, max_abs_diff(a[j], b[j]));
    return d;
}

}  // namespace

TEST_CASE("price: equal rates reduce to the linear solve") {
    const MarketParams flat{0.1, 0.1, 0.0, 0.4};
    const auto payoff = butterfly_payoff();
    const auto linear = price_linear({0.1, 0.0, ""}, 0.4, kTable1, payoff);
    const auto pen = price(flat, kTable1, payoff, SolverKind::penalty, penalty_rho(1e4));
    const auto pol = price(flat, kTable1, payoff, SolverKind::policy, {});
    CHECK(surface_diff(pen.surface, linear) <= 1e-10);
    CHECK(surface_diff(pol.surface, linear) <= 1e-10);
}

TEST_CASE("price: penalty and policy agree at the default market and grid") {
    const MarketParams mp;
    const auto payoff = butterfly_payoff();
    const auto pol = price(mp, kTable1, payoff, SolverKind::policy, {});
    const auto pen4 = price(mp, kTable1, payoff, SolverKind::penalty, penalty_rho(1e4));
    const auto pen6 = price(mp, kTable1, payoff, SolverKind::penalty, penalty_rho(1e6));
    CHECK(max_abs_diff(pen4.time_zero(), pol.time_zero()) <= 1e-3);
    CHECK(surface_diff(pen6.surface, pol.surface) <= 1e-5);

    // Boundary values stay at P(0) and P(s_max).
    for (const auto& v : pol.surface) {
        CHECK(v.front() == 0.0);
        CHECK(v.back() == 0.0);
    }
    CHECK(pol.step_iterations.size() == 399);
    CHECK(pol.step_wall_time.size() == 399);
    CHECK(pol.total_wall_time > 0.0);
}

TEST_CASE("price: zero payoff gives a zero surface") {
    const PiecewiseLinearPayoff zero({{0.0, 0.0}, {600.0, 0.0}});
    const Grid g(600.0, 1.0, 20, 50);
    for (const auto kind : {SolverKind::penalty, SolverKind::policy}) {
        const auto run = price(MarketParams{}, g, zero, kind, {});
        for (const auto& v : run.surface) CHECK(inf_norm(v) == 0.0);
        CHECK(stability_check(run, sample_payoff(zero, g)));
    }
}

TEST_CASE("price: rejects payoffs that do not vanish at the boundary") {
    const PiecewiseLinearPayoff call({{0.0, 0.0}, {100.0, 0.0}, {600.0, 500.0}});
    CHECK_THROWS_AS(price(MarketParams{}, Grid(600.0, 1.0, 5, 10), call, SolverKind::policy, {}),
                    ParameterError);
}

TEST_CASE("price: observer sees every solved level") {
    const Grid g(600.0, 1.0, 12, 40);
    std::vector<std::size_t> levels;
    price(MarketParams{}, g, butterfly_payoff(), SolverKind::penalty, {},
          [&](std::size_t j, const ControlProblem& p, const SolveReport& r) {
              levels.push_back(j);
              CHECK(p.num_controls() == 4);
              CHECK(r.converged());
          });
    REQUIRE(levels.size() == 11);
    CHECK(levels.front() == 10);
    CHECK(levels.back() == 0);
}

TEST_CASE("price: an iteration cap turns into SolverFailure") {
    SolverSettings s;
    s.penalty.max_iters = 1;
    CHECK_THROWS_AS(price(MarketParams{}, Grid(600.0, 1.0, 10, 60), butterfly_payoff(),
                          SolverKind::penalty, s),
                    SolverFailure);
}

TEST_CASE("stability_check") {
    const auto payoff = butterfly_payoff();
    auto run = price(MarketParams{}, kTable1, payoff, SolverKind::policy, {});
    const auto sampled = sample_payoff(payoff, kTable1);
    CHECK(stability_check(run, sampled));
    run.surface[100][50] = 25.001;
    CHECK_FALSE(stability_check(run, sampled));
}

TEST_CASE("step_problem shares boundary rows across controls") {
    const auto p = step_problem(MarketParams{}, Grid(600.0, 1.0, 10, 30));
    REQUIRE(p.num_controls() == 4);
    for (std::size_t s = 1; s < 4; ++s)
        CHECK(positive_row_sum_rows(p.matrix(s)) == positive_row_sum_rows(p.matrix(0)));
}

TEST_CASE("solver kind names") {
    CHECK(to_string(SolverKind::penalty) == "penalty");
    CHECK(parse_solver_kind("policy") == SolverKind::policy);
    CHECK_FALSE(parse_solver_kind("newton").has_value());
}
