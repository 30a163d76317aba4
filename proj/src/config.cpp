#include "hjb/config.hpp"

#include "hjb/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace hjb {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::penalty: return "penalty";
        case Method::policy: return "policy";
        case Method::both: return "both";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "penalty") return Method::penalty;
    if (name == "policy") return Method::policy;
    if (name == "both") return Method::both;
    return std::nullopt;
}

PiecewiseLinearPayoff PayoffSpec::build() const {
    return butterfly ? butterfly_payoff() : PiecewiseLinearPayoff(points);
}

void RunConfig::validate() const {
    try {
        market.validate();
        (void)grid();
        (void)payoff.build();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    if (!(rho > 0.0)) throw ConfigError("rho must be positive");
    if (reference_control >= 4) throw ConfigError("reference_control must be in 0..3");
    if (max_iters == 0) throw ConfigError("max_iters must be at least 1");
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, std::string_view key, const std::string& what) {
    throw ConfigError("line " + std::to_string(line) + ", key '" + std::string(key) + "': " + what);
}

double to_real(std::size_t line, std::string_view key, std::string_view value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        fail(line, key, "expected a real number, got '" + std::string(value) + "'");
    return v;
}

std::size_t to_count(std::size_t line, std::string_view key, std::string_view value) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        fail(line, key, "expected a non-negative integer, got '" + std::string(value) + "'");
    return v;
}

PayoffSpec to_payoff(std::size_t line, std::string_view key, std::string_view value) {
    PayoffSpec spec;
    if (value == "butterfly") return spec;
    spec.butterfly = false;

    static const std::regex point(R"(\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\))");
    const std::string text(value);
    std::size_t consumed = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), point);
         it != std::sregex_iterator(); ++it) {
        const auto gap = trim(std::string_view(text).substr(consumed, it->position() - consumed));
        if (!gap.empty()) fail(line, key, "unexpected text '" + std::string(gap) + "'");
        spec.points.emplace_back(to_real(line, key, it->str(1)), to_real(line, key, it->str(2)));
        consumed = static_cast<std::size_t>(it->position() + it->length());
    }
    if (!trim(std::string_view(text).substr(consumed)).empty() || spec.points.empty())
        fail(line, key, "expected 'butterfly' or points like (0,0) (100,0)");
    try {
        (void)spec.build();
    } catch (const ParameterError& e) {
        fail(line, key, e.what());
    }
    return spec;
}

}  // namespace

RunConfig parse_config(std::string_view text, const RunConfig& base) {
    RunConfig cfg = base;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (value.empty()) fail(line_no, key, "missing value");

        if (key == "r_b") cfg.market.r_b = to_real(line_no, key, value);
        else if (key == "r_l") cfg.market.r_l = to_real(line_no, key, value);
        else if (key == "r_f") cfg.market.r_f = to_real(line_no, key, value);
        else if (key == "sigma") cfg.market.sigma = to_real(line_no, key, value);
        else if (key == "T") cfg.horizon = to_real(line_no, key, value);
        else if (key == "s_max") cfg.s_max = to_real(line_no, key, value);
        else if (key == "M") cfg.time_levels = to_count(line_no, key, value);
        else if (key == "N") cfg.space_nodes = to_count(line_no, key, value);
        else if (key == "tol") cfg.tol = to_real(line_no, key, value);
        else if (key == "rho") cfg.rho = to_real(line_no, key, value);
        else if (key == "reference_control") cfg.reference_control = to_count(line_no, key, value);
        else if (key == "max_iters") cfg.max_iters = to_count(line_no, key, value);
        else if (key == "output_dir") cfg.output_dir = std::string(value);
        else if (key == "payoff") cfg.payoff = to_payoff(line_no, key, value);
        else if (key == "method") {
            const auto m = parse_method(value);
            if (!m) fail(line_no, key, "expected penalty, policy or both");
            cfg.method = *m;
        } else {
            fail(line_no, key, "unknown key");
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str(), base);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "r_b = " << format_real(cfg.market.r_b) << '\n'
        << "r_l = " << format_real(cfg.market.r_l) << '\n'
        << "r_f = " << format_real(cfg.market.r_f) << '\n'
        << "sigma = " << format_real(cfg.market.sigma) << '\n'
        << "T = " << format_real(cfg.horizon) << '\n'
        << "s_max = " << format_real(cfg.s_max) << '\n'
        << "M = " << cfg.time_levels << '\n'
        << "N = " << cfg.space_nodes << '\n'
        << "tol = " << format_real(cfg.tol) << '\n'
        << "rho = " << format_real(cfg.rho) << '\n'
        << "method = " << to_string(cfg.method) << '\n'
        << "reference_control = " << cfg.reference_control << '\n'
        << "max_iters = " << cfg.max_iters << '\n'
        << "output_dir = " << cfg.output_dir << '\n'
        << "payoff =";
    if (cfg.payoff.butterfly) {
        out << " butterfly";
    } else {
        for (const auto& [s, p] : cfg.payoff.points)
            out << " (" << format_real(s) << ',' << format_real(p) << ')';
    }
    out << '\n';
    return out.str();
}

}  // namespace hjb
