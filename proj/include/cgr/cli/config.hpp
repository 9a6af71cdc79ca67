#pragma once

// Run configuration. The file format is flat `key = value` text; `#` starts a
// comment and `point = q,p,nu` may repeat to build a grid.

#include "cgr/linalg.hpp"
#include "cgr/rmatrix.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cgr::cli {

/// Malformed command line or configuration (exit status 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Format { json, csv, text };

struct RunConfig {
    std::uint64_t seed = kDefaultSeed;
    std::map<std::string, double> tolerance_overrides; ///< check name -> tol; "*" applies to all
    std::size_t cap = kDefaultDimensionCap;
    std::vector<ModelParameters> points;
    int grid_size = 20;
    std::vector<int> lengths{2, 3};
    int fock_dim = 8;
    int coaction_dim = 6;
    Format format = Format::json;
    std::string out;
    std::string timestamp = "1970-01-01T00:00:00Z";
    unsigned jobs = 0; ///< 0: hardware concurrency
    std::string tamper;

    double tolerance(const std::string& check, double fallback) const
    {
        if (auto it = tolerance_overrides.find(check); it != tolerance_overrides.end())
            return it->second;
        if (auto it = tolerance_overrides.find("*"); it != tolerance_overrides.end())
            return it->second;
        return fallback;
    }
};

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& s, const std::string& what)
{
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid number for " + what + ": '" + s + "'");
    return v;
}

inline long long parse_integer(const std::string& s, const std::string& what)
{
    const std::string t = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid integer for " + what + ": '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        parts.push_back(trim(item));
    return parts;
}

/// "q,p,nu" with q, p > 0.
inline ModelParameters parse_point(const std::string& s)
{
    const auto parts = split(s, ',');
    if (parts.size() != 3)
        throw ConfigError("point must be 'q,p,nu': '" + s + "'");
    const double q = parse_double(parts[0], "q");
    const double p = parse_double(parts[1], "p");
    const double nu = parse_double(parts[2], "nu");
    if (!(q > 0.0) || !(p > 0.0))
        throw ConfigError("point '" + s + "': q and p must be positive");
    return {q, p, nu};
}

inline std::vector<int> parse_lengths(const std::string& s)
{
    std::vector<int> out;
    for (const auto& part : split(s, ',')) {
        const auto v = parse_integer(part, "lengths");
        if (v < 2 || v > 12)
            throw ConfigError("chain length must be in [2, 12]");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty())
        throw ConfigError("lengths must not be empty");
    return out;
}

inline Format parse_format(const std::string& s)
{
    if (s == "json")
        return Format::json;
    if (s == "csv")
        return Format::csv;
    if (s == "text")
        return Format::text;
    throw ConfigError("unknown format '" + s + "'");
}

/// Applies one `key = value` pair to the configuration.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "seed") {
        const auto v = parse_integer(value, key);
        if (v < 0)
            throw ConfigError("seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "tol") {
        cfg.tolerance_overrides["*"] = parse_double(value, key);
    } else if (key.rfind("tol.", 0) == 0) {
        cfg.tolerance_overrides[key.substr(4)] = parse_double(value, key);
    } else if (key == "cap") {
        const auto v = parse_integer(value, key);
        if (v < 9)
            throw ConfigError("cap must be at least 9");
        cfg.cap = static_cast<std::size_t>(v);
    } else if (key == "point") {
        cfg.points.push_back(parse_point(value));
    } else if (key == "grid_size") {
        const auto v = parse_integer(value, key);
        if (v < 1)
            throw ConfigError("grid_size must be positive");
        cfg.grid_size = static_cast<int>(v);
    } else if (key == "lengths") {
        cfg.lengths = parse_lengths(value);
    } else if (key == "D") {
        const auto v = parse_integer(value, key);
        if (v < 2)
            throw ConfigError("D must be at least 2");
        cfg.fock_dim = static_cast<int>(v);
    } else if (key == "coaction_D") {
        const auto v = parse_integer(value, key);
        if (v < 2)
            throw ConfigError("coaction_D must be at least 2");
        cfg.coaction_dim = static_cast<int>(v);
    } else if (key == "format") {
        cfg.format = parse_format(trim(value));
    } else if (key == "out") {
        cfg.out = trim(value);
    } else if (key == "timestamp") {
        cfg.timestamp = trim(value);
    } else if (key == "jobs") {
        const auto v = parse_integer(value, key);
        if (v < 0)
            throw ConfigError("jobs must be nonnegative");
        cfg.jobs = static_cast<unsigned>(v);
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

inline void load_config(std::istream& in, RunConfig& cfg)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

inline void load_config_file(const std::string& path, RunConfig& cfg)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    load_config(in, cfg);
}

} // namespace cgr::cli
