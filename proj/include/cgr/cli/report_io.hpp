#pragma once

// Report serialization. JSON output is byte-stable: field order is fixed and
// every double is printed with 17 significant digits.

#include "cgr/cli/config.hpp"
#include "cgr/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace cgr::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json complex_pair(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const ExtraValue& v)
{
    return std::visit(
        [](const auto& x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::vector<Complex>>) {
                Json arr = Json::array();
                for (const auto& z : x)
                    arr.push_back(complex_pair(z));
                return arr;
            } else {
                return Json(x);
            }
        },
        v);
}

inline Json to_json(const CheckReport& r)
{
    Json j;
    j["check_name"] = r.check_name;
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters)
        params[k] = v;
    j["parameters"] = std::move(params);
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["kind"] = r.kind == CheckReport::Kind::residual ? "residual" : "verdict";
    if (!r.extra.empty()) {
        Json extra = Json::object();
        for (const auto& [k, v] : r.extra)
            extra[k] = to_json(v);
        j["extra"] = std::move(extra);
    }
    return j;
}

inline Json report_document(const RunConfig& cfg, const std::vector<CheckReport>& reports)
{
    Json doc;
    doc["schema"] = kSchemaVersion;
    doc["run"] = Json{{"seed", cfg.seed}, {"timestamp", cfg.timestamp}};
    Json arr = Json::array();
    for (const auto& r : reports)
        arr.push_back(to_json(r));
    doc["reports"] = std::move(arr);
    return doc;
}

inline std::string format_double(double v)
{
    if (!std::isfinite(v))
        return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Serializes with two-space indentation and 17-digit floats.
inline void write_json(std::ostream& os, const Json& j, int indent = 0)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                os << ",\n";
            first = false;
            os << inner << Json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent + 2);
        }
        os << "\n" << pad << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // short numeric arrays (complex pairs) stay on one line
        const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    os << ", ";
                write_json(os, j[i], 0);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                os << ",\n";
            os << inner;
            write_json(os, j[i], indent + 2);
        }
        os << "\n" << pad << "]";
        return;
    }
    case Json::value_t::number_float:
        os << format_double(j.get<double>());
        return;
    default:
        os << j.dump();
        return;
    }
}

inline std::string parameter_string(const CheckReport& r)
{
    std::string s;
    for (const auto& [k, v] : r.parameters) {
        if (!s.empty())
            s += ';';
        s += k + '=' + format_double(v);
    }
    return s;
}

/// Header: check_name,parameters,residual,tolerance,pass
inline void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports)
{
    os << "check_name,parameters,residual,tolerance,pass\n";
    for (const auto& r : reports)
        os << r.check_name << ',' << parameter_string(r) << ',' << format_double(r.residual) << ','
           << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
}

inline void write_reports_text(std::ostream& os, const std::vector<CheckReport>& reports)
{
    std::size_t failed = 0;
    for (const auto& r : reports) {
        failed += r.pass ? 0 : 1;
        char line[160];
        std::snprintf(line, sizeof line, "%-4s %-36s residual=%-10.3e tol=%-9.2e ", r.pass ? "PASS" : "FAIL",
                      r.check_name.c_str(), r.residual, r.tolerance);
        os << line << parameter_string(r);
        if (const auto* label = r.find_extra("label"))
            if (const auto* s = std::get_if<std::string>(label))
                os << " label=" << *s;
        if (const auto* err = r.find_extra("error"))
            if (const auto* s = std::get_if<std::string>(err))
                os << " error=\"" << *s << '"';
        os << '\n';
    }
    os << reports.size() - failed << '/' << reports.size() << " checks passed\n";
}

/// CSV spectrum: header re,im, one eigenvalue per row, sorted by (re, im).
inline void write_spectrum_csv(std::ostream& os, const std::vector<Complex>& eigenvalues)
{
    os << "re,im\n";
    for (const auto& z : sorted(eigenvalues))
        os << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
}

} // namespace cgr::cli
