#pragma once

#include "ultrapara/operator_spectrum.hpp"
#include "ultrapara/registry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ultrapara {

/// Invalid run configuration (CLI exit status 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output file or directory could not be written or read (CLI exit status 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Emit { Table, Grid, Slice };

enum class ModeChoice {
    Default, // all modes for linear problems, the excited mode for nonlinear ones
    All,
    Excited,
};

/**
 * Defaults match the reference tables: L = 20, j0 = 5, n_max = 8.
 * `example` is empty for a custom problem.
 */
struct RunConfig {
    std::optional<int> example = 1;
    std::optional<BasisKind> custom_basis;
    std::vector<double> custom_initial;
    std::vector<double> custom_source;

    int M = 50;
    int L = 20;
    int n_max = 8;
    std::optional<int> q;
    int j0 = 5;
    std::optional<double> T;
    Emit emit = Emit::Table;
    std::optional<SliceSpec> slice;
    std::string out;
    ModeChoice modes = ModeChoice::Default;
    std::optional<std::vector<int>> tables;
    bool compare_reference = false;
};

inline constexpr int default_picard_iterations = 5;

namespace detail {

inline std::string trim(std::string_view text)
{
    std::size_t first = 0;
    std::size_t last = text.size();
    while (first < last && std::isspace(static_cast<unsigned char>(text[first]))) {
        ++first;
    }
    while (last > first && std::isspace(static_cast<unsigned char>(text[last - 1]))) {
        --last;
    }
    return std::string(text.substr(first, last - first));
}

inline int parse_int(std::string_view key, const std::string& value)
{
    int out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + value + "'");
    }
    return out;
}

inline double parse_double(std::string_view key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(out)) {
            throw std::invalid_argument(value);
        }
        return out;
    } catch (const std::logic_error&) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + value + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

} // namespace detail

/// Accepts a decimal number or a multiple of pi: "0.5", "pi", "pi/4", "3pi/4", "3*pi/4".
inline double parse_coordinate(std::string_view key, const std::string& text)
{
    const std::string value = detail::trim(text);
    const auto pos = value.find("pi");
    if (pos == std::string::npos) {
        return detail::parse_double(key, value);
    }
    std::string head = detail::trim(value.substr(0, pos));
    std::string tail = detail::trim(value.substr(pos + 2));
    if (!head.empty() && head.back() == '*') {
        head = detail::trim(head.substr(0, head.size() - 1));
    }
    const double factor = head.empty() ? 1.0 : detail::parse_double(key, head);
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw ConfigError("'" + std::string(key) + "': cannot parse '" + value + "'");
        }
        divisor = detail::parse_double(key, detail::trim(tail.substr(1)));
        if (divisor == 0.0) {
            throw ConfigError("'" + std::string(key) + "': division by zero");
        }
    }
    return factor * std::numbers::pi / divisor;
}

inline SliceSpec parse_slice(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("slice expects <axis>=<value>, got '" + text + "'");
    }
    const std::string axis = detail::trim(text.substr(0, eq));
    if (axis != "x" && axis != "t" && axis != "s") {
        throw ConfigError("slice axis must be x, t or s, got '" + axis + "'");
    }
    return SliceSpec{axis.front(), parse_coordinate("slice", text.substr(eq + 1))};
}

/// Applies one `key = value` setting. Keys match the long CLI flags.
inline void apply_setting(RunConfig& config, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = detail::trim(raw_key);
    const std::string value = detail::trim(raw_value);
    if (key == "example") {
        if (value == "custom") {
            config.example.reset();
        } else {
            config.example = detail::parse_int(key, value);
        }
    } else if (key == "basis") {
        const auto kind = parse_basis_kind(value);
        if (!kind) {
            throw ConfigError("unknown basis '" + value + "' (DD, ND, DN_shift1, NN_shift2)");
        }
        config.custom_basis = kind;
    } else if (key == "initial" || key == "source") {
        std::vector<double> coeffs;
        for (const auto& item : detail::split_list(value)) {
            coeffs.push_back(detail::parse_double(key, item));
        }
        (key == "initial" ? config.custom_initial : config.custom_source) = std::move(coeffs);
    } else if (key == "M") {
        config.M = detail::parse_int(key, value);
    } else if (key == "L") {
        config.L = detail::parse_int(key, value);
    } else if (key == "nmax") {
        config.n_max = detail::parse_int(key, value);
    } else if (key == "q") {
        config.q = detail::parse_int(key, value);
    } else if (key == "j0") {
        config.j0 = detail::parse_int(key, value);
    } else if (key == "T") {
        config.T = detail::parse_double(key, value);
    } else if (key == "emit") {
        if (value == "table") {
            config.emit = Emit::Table;
        } else if (value == "grid") {
            config.emit = Emit::Grid;
        } else if (value == "slice") {
            config.emit = Emit::Slice;
        } else {
            throw ConfigError("emit must be table, grid or slice, got '" + value + "'");
        }
    } else if (key == "slice") {
        config.slice = parse_slice(value);
    } else if (key == "out") {
        config.out = value;
    } else if (key == "modes") {
        if (value == "all") {
            config.modes = ModeChoice::All;
        } else if (value == "excited") {
            config.modes = ModeChoice::Excited;
        } else {
            throw ConfigError("modes must be all or excited, got '" + value + "'");
        }
    } else if (key == "tables") {
        std::vector<int> which;
        for (const auto& item : detail::split_list(value)) {
            which.push_back(detail::parse_int(key, item));
        }
        config.tables = std::move(which);
    } else if (key == "compare-paper") {
        config.compare_reference = value.empty() || value == "true" || value == "1" || value == "yes";
    } else {
        throw ConfigError("unknown setting '" + key + "'");
    }
}

/// `key = value` lines, `#` starts a comment, blank lines ignored.
inline void apply_config_text(RunConfig& config, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

inline void apply_config_file(RunConfig& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open problem file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    apply_config_text(config, buffer.str());
}

/// Throws ConfigError on any inconsistent field.
inline void validate(const RunConfig& config)
{
    if (config.example && (*config.example < 1 || *config.example > registry_size)) {
        throw ConfigError("example must be 1..4 or custom");
    }
    if (!config.example) {
        if (!config.custom_basis) {
            throw ConfigError("custom problem needs 'basis'");
        }
        if (config.custom_initial.empty() && config.custom_source.empty()) {
            throw ConfigError("custom problem needs 'initial' and/or 'source' coefficients");
        }
        if (!config.T) {
            throw ConfigError("custom problem needs 'T'");
        }
        const auto needed = std::max(config.custom_initial.size(), config.custom_source.size());
        if (static_cast<std::size_t>(config.n_max) < needed) {
            throw ConfigError("nmax is smaller than the number of custom coefficients");
        }
    }
    if (config.M < 1) throw ConfigError("M must be >= 1");
    if (config.L < 1) throw ConfigError("L must be >= 1");
    if (config.n_max < 1) throw ConfigError("nmax must be >= 1");
    if (config.q && *config.q < 1) throw ConfigError("q must be >= 1");
    if (config.j0 < 0) throw ConfigError("j0 must be >= 0");
    if (config.T && !(*config.T > 0.0)) throw ConfigError("T must be positive");
    if (config.tables) {
        for (const int t : *config.tables) {
            if (t < 1 || t > registry_size) {
                throw ConfigError("tables must be drawn from 1,2,3,4");
            }
        }
    }
    if (config.emit != Emit::Table && config.out.empty() && !config.tables) {
        throw ConfigError("emit grid/slice needs --out");
    }
}

} // namespace ultrapara
