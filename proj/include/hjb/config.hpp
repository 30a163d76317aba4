#pragma once

#include "hjb/bs_model.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hjb {

/// Malformed configuration text; the message names the line and key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { penalty, policy, both };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Either the built-in butterfly or explicit (S, P) breakpoints.
struct PayoffSpec {
    bool butterfly = true;
    std::vector<std::pair<double, double>> points;

    PiecewiseLinearPayoff build() const;
    friend bool operator==(const PayoffSpec&, const PayoffSpec&) = default;
};

/// Experiment settings. Defaults are the butterfly pricing run on a 400x400 grid.
struct RunConfig {
    MarketParams market;
    double s_max = 600.0;
    double horizon = 1.0;
    std::size_t time_levels = 400;
    std::size_t space_nodes = 400;
    PayoffSpec payoff;
    double tol = 1e-8;
    double rho = 1e4;
    Method method = Method::penalty;
    std::size_t reference_control = 0;
    /// Per-step iteration cap for either solver.
    std::size_t max_iters = 100;
    std::string output_dir = ".";

    Grid grid() const { return Grid(s_max, horizon, time_levels, space_nodes); }

    /// Throws ConfigError on values the model would reject.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses `key = value` lines; `#` starts a comment. Keys:
///   r_b r_l r_f sigma T s_max M N tol rho method reference_control
///   max_iters output_dir payoff
/// payoff is `butterfly` or a list of points `(0,0) (100,0) ...`.
/// Keys not present keep their defaults.
RunConfig parse_config(std::string_view text, const RunConfig& base = {});

RunConfig load_config(const std::filesystem::path& path, const RunConfig& base = {});

/// Writes every key, reals with 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_real(double v);

}  // namespace hjb
