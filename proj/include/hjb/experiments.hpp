#pragma once

#include "hjb/config.hpp"
#include "hjb/oracle.hpp"
#include "hjb/timestepper.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

// Experiment drivers behind the CLI subcommands. Each driver computes its
// results first and only then writes files, so nothing is written when a
// run fails.

namespace hjb {

SolverSettings settings_for(const RunConfig& cfg);

/// Time levels x space nodes, written "MxN".
struct GridSize {
    std::size_t time_levels = 0;
    std::size_t space_nodes = 0;

    std::string name() const;
    friend bool operator==(const GridSize&, const GridSize&) = default;
};

/// Parses "400x400,1000x1000"; throws ConfigError.
std::vector<GridSize> parse_grid_list(std::string_view text);

/// Parses "10,100,1e3"; throws ConfigError unless nonempty, positive and ascending.
std::vector<double> parse_rho_list(std::string_view text);

std::vector<GridSize> default_stat_grids();
std::vector<double> default_stat_rhos();
std::vector<double> default_sweep_rhos();

// --- price -----------------------------------------------------------------

struct PriceResult {
    Grid grid;
    /// One run for penalty or policy, two (penalty first) for both.
    std::vector<PricingRun> runs;
};

PriceResult run_price(const RunConfig& cfg, int jobs = 1);

/// solution.csv (first run) and stats.csv; solution_policy.csv as well when
/// both methods ran. Returns the files written.
std::vector<std::filesystem::path> write_price_outputs(const PriceResult& result,
                                                       const std::filesystem::path& dir);

// --- penalty-sweep ---------------------------------------------------------

struct SweepPoint {
    double rho = 0.0;
    double error_inf = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    /// Least-squares slope of log(error) against log(rho); empty with fewer
    /// than two points or when an error is zero.
    std::optional<double> slope;
};

std::optional<double> loglog_slope(const std::vector<SweepPoint>& points);

SweepResult penalty_sweep(const RunConfig& cfg, const std::vector<double>& rhos, int jobs = 1);

std::filesystem::path write_sweep_csv(const SweepResult& result, const std::filesystem::path& dir);

// --- iteration-stats -------------------------------------------------------

struct IterationRow {
    std::string grid;
    std::string method;
    /// Empty for policy iteration.
    std::optional<double> rho;
    std::size_t n = 0;
    std::size_t count = 0;
    double percent = 0.0;
};

/// Histogram of per-step iteration counts over the M - 1 solved steps.
std::vector<IterationRow> histogram(const PricingRun& run, const GridSize& grid,
                                    std::optional<double> rho);

std::vector<IterationRow> iteration_stats(const RunConfig& cfg, const std::vector<GridSize>& grids,
                                          const std::vector<double>& rhos, int jobs = 1);

std::filesystem::path write_iterations_csv(const std::vector<IterationRow>& rows,
                                           const std::filesystem::path& dir);

// --- oracle-check ----------------------------------------------------------

struct OracleSettings {
    std::uint64_t seed = 42;
    std::size_t trials = 200;
    double rho = 1e8;
    double match_tol = 1e-5;
    /// Builds one instance. Construction errors (MMatrixError,
    /// DimensionError) reject the instance instead of failing the check.
    std::function<ControlProblem(std::mt19937_64&)> generator;
};

struct OracleFailure {
    std::size_t trial = 0;
    std::string reason;
    std::string instance;
};

struct OracleSummary {
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::size_t rejected = 0;
    std::vector<OracleFailure> failures;
    double seconds = 0.0;

    bool ok() const { return failures.empty(); }
};

OracleSummary oracle_check(const OracleSettings& settings);

}  // namespace hjb
