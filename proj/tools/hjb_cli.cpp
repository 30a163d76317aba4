#include "hjb/config.hpp"
#include "hjb/errors.hpp"
#include "hjb/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum Exit : int { ok = 0, usage = 1, solver = 2, mismatch = 3 };

// Flags shared by the pricing subcommands; anything set overrides the config file.
struct Overrides {
    std::string config;
    std::optional<double> rho;
    std::optional<double> tol;
    std::optional<std::string> method;
    std::optional<std::size_t> grid_m;
    std::optional<std::size_t> grid_n;
    std::optional<std::size_t> reference_control;
    std::optional<std::size_t> max_iters;
    std::optional<std::string> output_dir;
    int jobs = 1;

    void attach(CLI::App& app, bool with_method) {
        app.add_option("--config", config, "config file (key = value lines)");
        app.add_option("--rho", rho, "penalty parameter");
        app.add_option("--tol", tol, "relative termination tolerance");
        if (with_method)
            app.add_option("--method", method, "penalty, policy or both");
        app.add_option("--grid-m", grid_m, "time levels M");
        app.add_option("--grid-n", grid_n, "space nodes N");
        app.add_option("--reference-control", reference_control, "control kept exact by the penalty scheme");
        app.add_option("--max-iters", max_iters, "per-step iteration cap");
        app.add_option("--output-dir", output_dir, "directory for CSV output");
        app.add_option("--jobs", jobs, "independent runs to execute concurrently")
            ->check(CLI::PositiveNumber);
    }

    hjb::RunConfig resolve() const {
        hjb::RunConfig cfg = config.empty() ? hjb::RunConfig{} : hjb::load_config(config);
        if (rho) cfg.rho = *rho;
        if (tol) cfg.tol = *tol;
        if (grid_m) cfg.time_levels = *grid_m;
        if (grid_n) cfg.space_nodes = *grid_n;
        if (reference_control) cfg.reference_control = *reference_control;
        if (max_iters) cfg.max_iters = *max_iters;
        if (output_dir) cfg.output_dir = *output_dir;
        if (method) {
            const auto m = hjb::parse_method(*method);
            if (!m) throw hjb::ConfigError("--method: expected penalty, policy or both, got '" + *method + "'");
            cfg.method = *m;
        }
        cfg.validate();
        return cfg;
    }
};

int cmd_price(const Overrides& o) {
    const auto cfg = o.resolve();
    const auto result = hjb::run_price(cfg, o.jobs);
    for (const auto& path : hjb::write_price_outputs(result, cfg.output_dir))
        std::cout << "wrote " << path.string() << '\n';
    for (const auto& run : result.runs) {
        std::size_t total = 0;
        for (const auto n : run.step_iterations) total += n;
        std::cout << hjb::to_string(run.solver_kind) << ": " << run.step_iterations.size()
                  << " steps, " << total << " iterations, " << run.total_wall_time << " s\n";
    }
    return ok;
}

int cmd_sweep(const Overrides& o, const std::string& rho_list) {
    const auto cfg = o.resolve();
    const auto rhos = rho_list.empty() ? hjb::default_sweep_rhos() : hjb::parse_rho_list(rho_list);
    const auto result = hjb::penalty_sweep(cfg, rhos, o.jobs);
    const auto path = hjb::write_sweep_csv(result, cfg.output_dir);
    for (const auto& p : result.points)
        std::cout << "rho " << hjb::format_real(p.rho) << "  error_inf " << hjb::format_real(p.error_inf) << '\n';
    if (result.slope)
        std::cout << "slope: " << *result.slope << '\n';
    else
        std::cout << "slope: n/a\n";
    std::cout << "wrote " << path.string() << '\n';
    return ok;
}

int cmd_stats(const Overrides& o, const std::string& grid_list, const std::string& rho_list) {
    const auto cfg = o.resolve();
    const auto grids = grid_list.empty() ? hjb::default_stat_grids() : hjb::parse_grid_list(grid_list);
    const auto rhos = rho_list.empty() ? hjb::default_stat_rhos() : hjb::parse_rho_list(rho_list);
    const auto rows = hjb::iteration_stats(cfg, grids, rhos, o.jobs);
    const auto path = hjb::write_iterations_csv(rows, cfg.output_dir);
    for (const auto& r : rows) {
        std::cout << r.grid << ' ' << r.method;
        if (r.rho) std::cout << " rho=" << hjb::format_real(*r.rho);
        std::cout << "  n=" << r.n << "  " << r.count << " steps (" << r.percent << "%)\n";
    }
    std::cout << "wrote " << path.string() << '\n';
    return ok;
}

int cmd_oracle(std::uint64_t seed, std::size_t trials) {
    hjb::OracleSettings settings;
    settings.seed = seed;
    settings.trials = trials;
    const auto summary = hjb::oracle_check(settings);
    std::cout << "oracle-check seed " << seed << ": " << summary.passed << '/'
              << summary.trials - summary.rejected << " passed, " << summary.failures.size()
              << " failed, " << summary.rejected << " rejected (" << summary.seconds << " s)\n";
    for (const auto& f : summary.failures) {
        std::cerr << "trial " << f.trial << ": " << f.reason << '\n' << f.instance << '\n';
    }
    return summary.ok() ? ok : mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete HJB solvers and option-pricing experiments"};
    app.require_subcommand(1);

    Overrides price_opts;
    auto* price = app.add_subcommand("price", "price the configured contract; writes solution.csv and stats.csv");
    price_opts.attach(*price, true);

    Overrides sweep_opts;
    std::string sweep_rhos;
    auto* sweep = app.add_subcommand("penalty-sweep", "penalty error against policy iteration per rho; writes sweep.csv");
    sweep_opts.attach(*sweep, false);
    sweep->add_option("--rho-list", sweep_rhos, "ascending comma-separated rhos (default 1e1..1e6)");

    Overrides stats_opts;
    std::string stats_grids;
    std::string stats_rhos;
    auto* stats = app.add_subcommand("iteration-stats", "histogram of per-step iteration counts; writes iterations.csv");
    stats_opts.attach(*stats, false);
    stats->add_option("--grids", stats_grids, "comma-separated MxN grids (default 400x400,1000x1000,900x30,30x900)");
    stats->add_option("--rho-list", stats_rhos, "penalty parameters (default 4e3,1e6)");

    std::uint64_t seed = 42;
    std::size_t trials = 200;
    auto* oracle = app.add_subcommand("oracle-check", "compare both solvers with brute force on random small problems");
    oracle->add_option("--seed", seed, "random seed");
    oracle->add_option("--trials", trials, "number of random instances (at least 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*price) return cmd_price(price_opts);
        if (*sweep) return cmd_sweep(sweep_opts, sweep_rhos);
        if (*stats) return cmd_stats(stats_opts, stats_grids, stats_rhos);
        return cmd_oracle(seed, trials);
    } catch (const hjb::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const hjb::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const hjb::MMatrixError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return solver;
    }
}
