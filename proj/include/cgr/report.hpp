#pragma once

#include "cgr/linalg.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cgr {

/// Payload for the free-form `extra` section of a report.
using ExtraValue = std::variant<double, long long, bool, std::string, std::vector<double>, std::vector<Complex>>;

/// Outcome of one identity check at one parameter point.
///
/// Residual-style reports satisfy pass == (residual <= tolerance). Verdict
/// reports (ranks, labels, witnesses) set pass directly and keep
/// residual == 0 as a sentinel.
struct CheckReport {
    enum class Kind { residual, verdict };

    std::string check_name;
    std::vector<std::pair<std::string, double>> parameters;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    Kind kind = Kind::residual;
    std::vector<std::pair<std::string, ExtraValue>> extra;

    static CheckReport residual_check(std::string name, double residual, double tolerance)
    {
        CheckReport r;
        r.check_name = std::move(name);
        r.residual = residual;
        r.tolerance = tolerance;
        r.pass = residual <= tolerance; // NaN fails
        return r;
    }

    static CheckReport verdict(std::string name, bool pass, double tolerance = 0.0)
    {
        CheckReport r;
        r.check_name = std::move(name);
        r.kind = Kind::verdict;
        r.pass = pass;
        r.tolerance = tolerance;
        return r;
    }

    CheckReport& with_param(std::string key, double value)
    {
        parameters.emplace_back(std::move(key), value);
        return *this;
    }

    CheckReport& with_extra(std::string key, ExtraValue value)
    {
        extra.emplace_back(std::move(key), std::move(value));
        return *this;
    }

    const ExtraValue* find_extra(const std::string& key) const
    {
        for (const auto& [k, v] : extra)
            if (k == key)
                return &v;
        return nullptr;
    }

    double extra_number(const std::string& key) const
    {
        const auto* v = find_extra(key);
        if (v == nullptr)
            throw Error("report " + check_name + " has no extra field " + key);
        if (const auto* d = std::get_if<double>(v))
            return *d;
        if (const auto* i = std::get_if<long long>(v))
            return static_cast<double>(*i);
        throw Error("report " + check_name + ": extra field " + key + " is not numeric");
    }
};

} // namespace cgr
