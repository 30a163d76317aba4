// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hjb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace hjb;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const Grid kDefaultGrid(600.0, 1.0, 400, 400);

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double surface_diff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, max_abs_diff(a[j], b[j]));
    return d;
}

SolverSettings penalty_at(double rho) {
    SolverSettings s;
    s.penalty.rho = rho;
    return s;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

Outcome oracle_equivalence() {
    OracleSettings s;
    s.seed = 42;
    s.trials = 200;
    const auto summary = oracle_check(s);
    std::ostringstream d;
    d << summary.passed << "/200 passed, " << summary.rejected << " rejected, "
      << fmt("%.2f s", summary.seconds);
    for (const auto& f : summary.failures) d << "; trial " << f.trial << ": " << f.reason;
    return {summary.passed == 200 && summary.seconds < 30.0, d.str()};
}

Outcome penalty_error_order() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::ostringstream d;
    for (const GridSize g : {GridSize{400, 400}, GridSize{900, 30}, GridSize{30, 900}}) {
        RunConfig cfg;
        cfg.time_levels = g.time_levels;
        cfg.space_nodes = g.space_nodes;
        const auto sweep = penalty_sweep(cfg, default_sweep_rhos());
        const bool ok = sweep.slope && *sweep.slope >= -1.15 && *sweep.slope <= -0.85;
        pass = pass && ok;
        d << g.name() << " slope " << (sweep.slope ? fmt("%.4f", *sweep.slope) : "n/a") << "; ";
    }
    const double secs = seconds_since(t0);
    d << fmt("%.2f s", secs);
    return {pass && secs < 120.0, d.str()};
}

// Criteria 3 and 4 share the same runs.
struct IterationRuns {
    struct Run {
        std::string name;
        PricingRun run;
        bool monotone = true;
        double worst_decrease = 0.0;
    };
    std::vector<Run> runs;
};

IterationRuns iteration_runs() {
    IterationRuns out;
    const auto payoff = butterfly_payoff();
    const MarketParams mp;

    auto run_one = [&](const std::string& name, SolverKind kind, SolverSettings settings) {
        settings.penalty.record_iterates = true;
        settings.policy.record_iterates = true;
        IterationRuns::Run r;
        r.name = name;
        r.run = price(mp, kDefaultGrid, payoff, kind, settings,
                      [&r](std::size_t, const ControlProblem&, const SolveReport& rep) {
                          for (std::size_t n = 1; n + 1 < rep.iterates.size(); ++n) {
                              for (std::size_t i = 0; i < rep.iterates[n].size(); ++i) {
                                  const double drop = rep.iterates[n][i] - rep.iterates[n + 1][i];
                                  r.worst_decrease = std::max(r.worst_decrease, drop);
                                  if (drop > 1e-12) r.monotone = false;
                              }
                          }
                      });
        out.runs.push_back(std::move(r));
    };
    run_one("policy", SolverKind::policy, {});
    run_one("penalty rho=4e3", SolverKind::penalty, penalty_at(4e3));
    run_one("penalty rho=1e6", SolverKind::penalty, penalty_at(1e6));
    return out;
}

Outcome iteration_counts(const IterationRuns& data) {
    if (data.runs.size() != 3) return {false, "runs did not complete"};
    bool pass = true;
    std::ostringstream d;
    for (const auto& r : data.runs) {
        const auto& its = r.run.step_iterations;
        const double steps = static_cast<double>(its.size());
        const std::size_t cap = r.run.solver_kind == SolverKind::policy ? 2 : 4;
        const std::size_t modal = r.run.solver_kind == SolverKind::policy ? 1 : 3;
        const double floor = r.run.solver_kind == SolverKind::policy ? 80.0 : 60.0;
        const auto worst = *std::max_element(its.begin(), its.end());
        const double share = 100.0 * static_cast<double>(std::count(its.begin(), its.end(), modal)) / steps;
        const bool ok = worst <= cap && share >= floor && r.run.total_wall_time < 10.0;
        pass = pass && ok;
        d << r.name << ": max n " << worst << ", n=" << modal << " " << fmt("%.2f%%", share) << ", "
          << fmt("%.3f s", r.run.total_wall_time) << "; ";
    }
    return {pass, d.str()};
}

Outcome monotone_iterates(const IterationRuns& data) {
    if (data.runs.size() != 3) return {false, "runs did not complete"};
    bool pass = true;
    std::ostringstream d;
    for (const auto& r : data.runs) {
        pass = pass && r.monotone;
        d << r.name << ": largest decrease " << fmt("%.3g", r.worst_decrease) << "; ";
    }
    return {pass, d.str()};
}

Outcome starting_value_independence() {
    const auto payoff = butterfly_payoff();
    const MarketParams mp;
    const auto run = price(mp, kDefaultGrid, payoff, SolverKind::penalty, {});
    const ControlProblem base = step_problem(mp, kDefaultGrid);
    const Vector payoff_vec = sample_payoff(payoff, kDefaultGrid);

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> level(0, kDefaultGrid.time_levels() - 2);
    const PenaltyConfig cfg;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::size_t j = level(rng);
        const auto step = base.with_uniform_rhs(run.surface[j + 1]);
        const auto a = solve_penalised(step, cfg, Vector(step.size(), 0.0));
        const auto b = solve_penalised(step, cfg, payoff_vec);
        if (!a.converged() || !b.converged()) return {false, "solver hit its cap at level " + std::to_string(j)};
        worst = std::max(worst, max_abs_diff(a.x, b.x));
    }
    return {worst <= 1e-9, "20 steps, largest difference " + fmt("%.3g", worst)};
}

Outcome stability() {
    const auto payoff = butterfly_payoff();
    const MarketParams mp;
    bool pass = true;
    std::ostringstream d;
    for (const auto kind : {SolverKind::penalty, SolverKind::policy}) {
        const auto run = price(mp, kDefaultGrid, payoff, kind, {});
        double top = 0.0;
        for (const auto& v : run.surface) top = std::max(top, inf_norm(v));
        pass = pass && top <= 25.0 + 1e-6;
        d << to_string(kind) << " max |V| " << fmt("%.12g", top) << "; ";
    }
    return {pass, d.str()};
}

Outcome financial_monotonicity() {
    const auto payoff = butterfly_payoff();
    auto v0 = [&](MarketParams mp) {
        return price(mp, kDefaultGrid, payoff, SolverKind::policy, {}).surface.front();
    };
    // Smallest V_high - V_low over the nodes.
    auto margin = [](const Vector& high, const Vector& low) {
        double m = INFINITY;
        for (std::size_t i = 0; i < high.size(); ++i) m = std::min(m, high[i] - low[i]);
        return m;
    };
    const double borrow = margin(v0({0.15, 0.1, 0.0, 0.4}), v0({0.1, 0.1, 0.0, 0.4}));
    const double fee = margin(v0({0.15, 0.1, 0.08, 0.4}), v0({0.15, 0.1, 0.0, 0.4}));
    return {borrow >= -1e-8 && fee >= -1e-8,
            "min V(r_b=.15)-V(r_b=.10) " + fmt("%.3g", borrow) + "; min V(r_f=.08)-V(r_f=0) " +
                fmt("%.3g", fee)};
}

Outcome degenerate_equivalence() {
    const MarketParams flat{0.1, 0.1, 0.0, 0.4};
    const auto payoff = butterfly_payoff();
    const auto linear = price_linear({0.1, 0.0, ""}, flat.sigma, kDefaultGrid, payoff);
    const auto pen = price(flat, kDefaultGrid, payoff, SolverKind::penalty, penalty_at(1e4)).surface;
    const auto pol = price(flat, kDefaultGrid, payoff, SolverKind::policy, {}).surface;
    const double d1 = surface_diff(pen, linear);
    const double d2 = surface_diff(pol, linear);
    const double d3 = surface_diff(pen, pol);
    const double worst = std::max({d1, d2, d3});
    return {worst <= 1e-10, "largest pairwise difference " + fmt("%.3g", worst)};
}

Outcome performance() {
    const auto payoff = butterfly_payoff();
    const MarketParams mp;
    // Best of several repeats filters scheduler noise out of the comparison.
    constexpr int kRepeats = 7;
    auto best = [&](SolverKind kind, double rho) {
        double t = INFINITY;
        for (int k = 0; k < kRepeats; ++k)
            t = std::min(t, price(mp, kDefaultGrid, payoff, kind, penalty_at(rho)).total_wall_time);
        return t;
    };
    const double policy = best(SolverKind::policy, 1e4);
    const double pen_low = best(SolverKind::penalty, 4e3);
    const double pen_high = best(SolverKind::penalty, 1e6);
    const double slower = std::max(pen_low, pen_high);
    const double spread = std::abs(pen_low - pen_high) / std::min(pen_low, pen_high);
    const bool pass = policy < 10.0 && slower < 10.0 * policy && spread < 0.25;
    return {pass, "policy " + fmt("%.4f s", policy) + ", penalty rho=4e3 " + fmt("%.4f s", pen_low) +
                      ", rho=1e6 " + fmt("%.4f s", pen_high) + ", penalty/policy " +
                      fmt("%.2f", slower / policy) + ", rho spread " + fmt("%.1f%%", 100.0 * spread)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << title << ": "
                  << o.detail << std::endl;
    };

    report(1, "oracle equivalence", oracle_equivalence);
    report(2, "penalty error order", penalty_error_order);
    IterationRuns runs;
    try {
        runs = iteration_runs();
    } catch (const std::exception& e) {
        std::cout << "iteration runs failed: " << e.what() << std::endl;
    }
    report(3, "iteration counts", [&] { return iteration_counts(runs); });
    report(4, "monotone iterates", [&] { return monotone_iterates(runs); });
    report(5, "starting-value independence", starting_value_independence);
    report(6, "stability bound", stability);
    report(7, "financial monotonicity", financial_monotonicity);
    report(8, "degenerate equivalence", degenerate_equivalence);
    report(9, "performance sanity", performance);

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
