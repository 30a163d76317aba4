#include "hjb/experiments.hpp"

#include "hjb/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

namespace hjb {

namespace {

/// Runs body(0..count-1), `jobs` at a time. The first exception (by index)
/// is rethrown after every task has finished.
template <class Body>
void run_tasks(std::size_t count, int jobs, Body&& body) {
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        try {
            body(static_cast<std::size_t>(t));
        } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

std::string percent_text(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", p);
    return buf;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
        const auto at = text.find(sep);
        parts.push_back(trim(text.substr(0, at)));
        if (at == std::string_view::npos) break;
        text = text.substr(at + 1);
    }
    return parts;
}

PricingRun price_with(const RunConfig& cfg, const Grid& grid, const PiecewiseLinearPayoff& payoff,
                      SolverKind kind, std::optional<double> rho = std::nullopt) {
    SolverSettings settings = settings_for(cfg);
    if (rho) settings.penalty.rho = *rho;
    return price(cfg.market, grid, payoff, kind, settings);
}

}  // namespace

SolverSettings settings_for(const RunConfig& cfg) {
    SolverSettings s;
    s.penalty.rho = cfg.rho;
    s.penalty.tol = cfg.tol;
    s.penalty.reference_control = cfg.reference_control;
    s.penalty.max_iters = cfg.max_iters;
    s.policy.tol = cfg.tol;
    s.policy.max_iters = cfg.max_iters;
    return s;
}

std::string GridSize::name() const {
    return std::to_string(time_levels) + "x" + std::to_string(space_nodes);
}

std::vector<GridSize> parse_grid_list(std::string_view text) {
    std::vector<GridSize> grids;
    for (const auto part : split(text, ',')) {
        const auto x = part.find_first_of("xX");
        GridSize g;
        std::size_t used_m = 0;
        std::size_t used_n = 0;
        try {
            if (x == std::string_view::npos) throw std::invalid_argument("no separator");
            const std::string m(part.substr(0, x));
            const std::string n(part.substr(x + 1));
            g.time_levels = std::stoul(m, &used_m);
            g.space_nodes = std::stoul(n, &used_n);
            if (used_m != m.size() || used_n != n.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw ConfigError("bad grid '" + std::string(part) + "'; expected MxN, e.g. 400x400");
        }
        if (g.time_levels < 2 || g.space_nodes < 3)
            throw ConfigError("grid '" + std::string(part) + "' needs M >= 2 and N >= 3");
        grids.push_back(g);
    }
    return grids;
}

std::vector<double> parse_rho_list(std::string_view text) {
    std::vector<double> rhos;
    for (const auto part : split(text, ',')) {
        const std::string s(part);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError("bad rho '" + s + "'");
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("rho must be positive, got '" + s + "'");
        if (!rhos.empty() && !(v > rhos.back()))
            throw ConfigError("rho list must be strictly ascending");
        rhos.push_back(v);
    }
    return rhos;
}

std::vector<GridSize> default_stat_grids() { return {{400, 400}, {1000, 1000}, {900, 30}, {30, 900}}; }
std::vector<double> default_stat_rhos() { return {4e3, 1e6}; }
std::vector<double> default_sweep_rhos() { return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}; }

// --- price -----------------------------------------------------------------

PriceResult run_price(const RunConfig& cfg, int jobs) {
    cfg.validate();
    PriceResult result{cfg.grid(), {}};
    const auto payoff = cfg.payoff.build();

    std::vector<SolverKind> kinds;
    if (cfg.method != Method::policy) kinds.push_back(SolverKind::penalty);
    if (cfg.method != Method::penalty) kinds.push_back(SolverKind::policy);

    result.runs.resize(kinds.size());
    run_tasks(kinds.size(), jobs, [&](std::size_t t) {
        result.runs[t] = price_with(cfg, result.grid, payoff, kinds[t]);
    });
    return result;
}

std::vector<std::filesystem::path> write_price_outputs(const PriceResult& result,
                                                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;

    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        const auto path = dir / (r == 0 ? "solution.csv" : "solution_policy.csv");
        auto out = open_output(path);
        out << "S,V\n";
        const auto v0 = result.runs[r].time_zero();
        for (std::size_t i = 0; i < v0.size(); ++i)
            out << format_real(result.grid.spot(i)) << ',' << format_real(v0[i]) << '\n';
        close_output(out, path);
        written.push_back(path);
    }

    const auto path = dir / "stats.csv";
    auto out = open_output(path);
    out << "timestep,method,iterations,wall_time_seconds\n";
    const std::size_t steps = result.grid.time_levels() - 1;
    for (std::size_t j = 0; j < steps; ++j) {
        for (const auto& run : result.runs) {
            out << j << ',' << to_string(run.solver_kind) << ',' << run.step_iterations[j] << ','
                << format_real(run.step_wall_time[j]) << '\n';
        }
    }
    close_output(out, path);
    written.push_back(path);
    return written;
}

// --- penalty-sweep ---------------------------------------------------------

std::optional<double> loglog_slope(const std::vector<SweepPoint>& points) {
    if (points.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        if (!(p.error_inf > 0.0)) return std::nullopt;
        const double x = std::log(p.rho);
        const double y = std::log(p.error_inf);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

SweepResult penalty_sweep(const RunConfig& cfg, const std::vector<double>& rhos, int jobs) {
    if (rhos.empty()) throw ConfigError("rho list is empty");
    cfg.validate();
    const Grid grid = cfg.grid();
    const auto payoff = cfg.payoff.build();

    // Task 0 is the policy reference; task t > 0 is penalty at rhos[t - 1].
    std::vector<Vector> v0(rhos.size() + 1);
    run_tasks(rhos.size() + 1, jobs, [&](std::size_t t) {
        auto run = t == 0 ? price_with(cfg, grid, payoff, SolverKind::policy)
                                : price_with(cfg, grid, payoff, SolverKind::penalty, rhos[t - 1]);
        v0[t] = std::move(run.surface.front());
    });

    SweepResult result;
    for (std::size_t k = 0; k < rhos.size(); ++k) {
        double err = 0.0;
        for (std::size_t i = 0; i < v0[0].size(); ++i)
            err = std::max(err, std::abs(v0[k + 1][i] - v0[0][i]));
        result.points.push_back({rhos[k], err});
    }
    result.slope = loglog_slope(result.points);
    return result;
}

std::filesystem::path write_sweep_csv(const SweepResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = dir / "sweep.csv";
    auto out = open_output(path);
    out << "rho,error_inf\n";
    for (const auto& p : result.points) out << format_real(p.rho) << ',' << format_real(p.error_inf) << '\n';
    close_output(out, path);
    return path;
}

// --- iteration-stats -------------------------------------------------------

std::vector<IterationRow> histogram(const PricingRun& run, const GridSize& grid,
                                    std::optional<double> rho) {
    std::map<std::size_t, std::size_t> counts;
    for (const auto n : run.step_iterations) ++counts[n];
    const double steps = static_cast<double>(run.step_iterations.size());

    std::vector<IterationRow> rows;
    for (const auto& [n, count] : counts) {
        rows.push_back({grid.name(), std::string(to_string(run.solver_kind)), rho, n, count,
                        100.0 * static_cast<double>(count) / steps});
    }
    return rows;
}

std::vector<IterationRow> iteration_stats(const RunConfig& cfg, const std::vector<GridSize>& grids,
                                          const std::vector<double>& rhos, int jobs) {
    if (grids.empty()) throw ConfigError("grid list is empty");
    cfg.validate();
    const auto payoff = cfg.payoff.build();

    // Per grid: policy, then penalty at each rho.
    const std::size_t per_grid = 1 + rhos.size();
    std::vector<std::vector<IterationRow>> blocks(grids.size() * per_grid);
    run_tasks(blocks.size(), jobs, [&](std::size_t t) {
        const GridSize& g = grids[t / per_grid];
        const std::size_t k = t % per_grid;
        const Grid grid(cfg.s_max, cfg.horizon, g.time_levels, g.space_nodes);
        if (k == 0) {
            blocks[t] = histogram(price_with(cfg, grid, payoff, SolverKind::policy), g, std::nullopt);
        } else {
            const double rho = rhos[k - 1];
            blocks[t] = histogram(price_with(cfg, grid, payoff, SolverKind::penalty, rho), g, rho);
        }
    });

    std::vector<IterationRow> rows;
    for (auto& b : blocks) rows.insert(rows.end(), b.begin(), b.end());
    return rows;
}

std::filesystem::path write_iterations_csv(const std::vector<IterationRow>& rows,
                                           const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto path = dir / "iterations.csv";
    auto out = open_output(path);
    out << "grid,method,rho,n,percent\n";
    for (const auto& r : rows) {
        out << r.grid << ',' << r.method << ',' << (r.rho ? format_real(*r.rho) : std::string())
            << ',' << r.n << ',' << percent_text(r.percent) << '\n';
    }
    close_output(out, path);
    return path;
}

// --- oracle-check ----------------------------------------------------------

OracleSummary oracle_check(const OracleSettings& settings) {
    if (settings.trials == 0) throw ConfigError("trials must be at least 1");
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(settings.seed);
    const auto generate = settings.generator
                              ? settings.generator
                              : [](std::mt19937_64& g) { return oracle::random_instance(g); };

    PenaltyConfig pen;
    pen.rho = settings.rho;
    const PolicyConfig pol;

    OracleSummary summary;
    summary.trials = settings.trials;
    for (std::size_t trial = 0; trial < settings.trials; ++trial) {
        std::optional<ControlProblem> problem;
        try {
            problem.emplace(generate(rng));
        } catch (const MMatrixError&) {
            ++summary.rejected;
            continue;
        } catch (const DimensionError&) {
            ++summary.rejected;
            continue;
        }
        const ControlProblem& p = *problem;

        auto fail = [&](std::string reason) {
            summary.failures.push_back({trial, std::move(reason), oracle::describe(p)});
        };
        try {
            const Vector truth = oracle::brute_force_solve(p);
            const Vector zero(p.size(), 0.0);
            const auto check = [&](const char* name, const SolveReport& report) {
                if (!report.converged()) {
                    fail(std::string(name) + " hit its iteration cap");
                    return false;
                }
                double err = 0.0;
                for (std::size_t i = 0; i < truth.size(); ++i)
                    err = std::max(err, std::abs(report.x[i] - truth[i]));
                if (err > settings.match_tol) {
                    fail(std::string(name) + " differs from brute force by " + format_real(err));
                    return false;
                }
                return true;
            };
            if (check("penalty", solve_penalised(p, pen, zero)) &&
                check("policy", solve_policy(p, pol, zero)))
                ++summary.passed;
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    summary.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

}  // namespace hjb
