#pragma once

// Command-line front end: `check`, `spectrum`, `compare` and `oscillator`.
// Exit status: 0 when every check passes, 1 when any fails, 2 on usage or
// configuration errors.

#include "cgr/cli/config.hpp"
#include "cgr/cli/report_io.hpp"
#include "cgr/cli/suites.hpp"
#include "cgr/sampling.hpp"
#include "cgr/spinchain.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace cgr::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

inline std::string utc_timestamp(std::time_t t)
{
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Raw option values before they are merged with a config file.
struct Options {
    std::string config;
    std::optional<long long> seed;
    std::optional<double> tol;
    std::optional<long long> cap;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<std::string> timestamp;
    std::optional<long long> jobs;

    std::string suite = "all";
    std::string grid;
    std::optional<long long> grid_size;
    std::optional<double> q;
    double p = 1.0;
    double nu = 0.0;
    std::optional<std::string> lengths;
    std::optional<long long> fock_dim;
    std::optional<long long> coaction_dim;
    int chain_length = 2;
    std::string boundary = "open";
    std::string tamper;
};

inline RunConfig resolve_config(const Options& o)
{
    RunConfig cfg;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
        cfg.timestamp = utc_timestamp(static_cast<std::time_t>(parse_integer(epoch, "SOURCE_DATE_EPOCH")));
    if (!o.config.empty())
        load_config_file(o.config, cfg);
    if (o.seed)
        apply_setting(cfg, "seed", std::to_string(*o.seed));
    if (o.tol)
        cfg.tolerance_overrides["*"] = *o.tol;
    if (o.cap)
        apply_setting(cfg, "cap", std::to_string(*o.cap));
    if (o.format)
        cfg.format = parse_format(*o.format);
    if (o.out)
        cfg.out = *o.out;
    if (o.timestamp)
        cfg.timestamp = *o.timestamp == "now" ? utc_timestamp(std::time(nullptr)) : *o.timestamp;
    if (o.jobs)
        apply_setting(cfg, "jobs", std::to_string(*o.jobs));
    if (o.grid_size)
        apply_setting(cfg, "grid_size", std::to_string(*o.grid_size));
    if (o.lengths)
        cfg.lengths = parse_lengths(*o.lengths);
    if (o.fock_dim)
        apply_setting(cfg, "D", std::to_string(*o.fock_dim));
    if (o.coaction_dim)
        apply_setting(cfg, "coaction_D", std::to_string(*o.coaction_dim));
    cfg.tamper = o.tamper;
    return cfg;
}

/// --q/--p/--nu, else config `point` lines, else the seeded default grid.
inline std::vector<ModelParameters> resolve_grid(const Options& o, const RunConfig& cfg)
{
    if (o.q) {
        if (!(*o.q > 0.0) || !(o.p > 0.0))
            throw ConfigError("q and p must be positive");
        return {ModelParameters(*o.q, o.p, o.nu)};
    }
    if (!o.grid.empty() && o.grid != "default")
        throw ConfigError("unknown grid '" + o.grid + "' (expected 'default')");
    if (o.grid.empty() && !cfg.points.empty())
        return cfg.points;
    return random_grid(cfg.seed, cfg.grid_size);
}

inline ModelParameters resolve_single_point(const Options& o, const RunConfig& cfg)
{
    if (o.q) {
        if (!(*o.q > 0.0) || !(o.p > 0.0))
            throw ConfigError("q and p must be positive");
        return {*o.q, o.p, o.nu};
    }
    if (!cfg.points.empty())
        return cfg.points.front();
    throw ConfigError("a parameter point is required (--q/--p/--nu or a config `point`)");
}

inline Boundary parse_boundary(const std::string& s)
{
    if (s == "open")
        return Boundary::open;
    if (s == "periodic")
        return Boundary::periodic;
    throw ConfigError("unknown boundary '" + s + "'");
}

inline int exit_status(const std::vector<CheckReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; }) ? kExitPass
                                                                                                     : kExitFail;
}

inline void emit_reports(std::ostream& os, const RunConfig& cfg, const std::vector<CheckReport>& reports)
{
    switch (cfg.format) {
    case Format::json:
        write_json(os, report_document(cfg, reports));
        os << '\n';
        break;
    case Format::csv: write_reports_csv(os, reports); break;
    case Format::text: write_reports_text(os, reports); break;
    }
}

inline CheckReport spectrum_report(const ChainSpec& spec)
{
    const Spectrum s = chain_spectrum(spec);
    auto r = CheckReport::verdict(std::string("spectrum.") + to_string(spec.boundary), true);
    tag(r, spec);
    return r.with_extra("dimension", static_cast<long long>(s.size()))
        .with_extra("scale", s.scale)
        .with_extra("eigenvalues", s.eigenvalues);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cremmer-Gervais R-matrix toolkit: identity checks, oscillator realizations and spin-chain spectra",
                 "cgr"};
    app.require_subcommand(1);
    Options o;

    app.add_option("--config", o.config, "flat key = value configuration file");
    app.add_option("--seed", o.seed, "seed for sampled grids and spectral parameters");
    app.add_option("--tol", o.tol, "override every check tolerance");
    app.add_option("--cap", o.cap, "largest dense dimension (default 6561)");
    app.add_option("--format", o.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", o.out, "write the report to a file instead of stdout");
    app.add_option("--timestamp", o.timestamp, "run timestamp recorded in JSON ('now' for wall clock)");
    app.add_option("--jobs", o.jobs, "grid points evaluated concurrently (0 = all cores)");

    auto add_point = [&](CLI::App* sub) {
        sub->add_option("--q", o.q, "deformation parameter q > 0");
        sub->add_option("--p", o.p, "twist parameter p > 0 (default 1)");
        sub->add_option("--nu", o.nu, "twist parameter nu (default 0)");
    };

    auto* check = app.add_subcommand("check", "run identity check suites over a parameter grid");
    check->add_option("--suite", o.suite, "rmatrix | oscillator | spinchain | all")
        ->check(CLI::IsMember({"rmatrix", "oscillator", "spinchain", "all"}));
    check->add_option("--grid", o.grid, "'default': seeded grid q,p in [0.5,2], nu in [-1,1]");
    check->add_option("--grid-size", o.grid_size, "points in the default grid (default 20)");
    check->add_option("--lengths", o.lengths, "comma-separated chain lengths (default 2,3)");
    check->add_option("--D", o.fock_dim, "Fock ladder dimension (default 8)");
    check->add_option("--coaction-D", o.coaction_dim, "Fock dimension for the coaction check (default 6)");
    add_point(check);
#ifdef CGR_ENABLE_TAMPER
    check->add_option("--tamper", o.tamper, "test hook: ybe | oscillator perturbs one entry by 1e-3");
#endif

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the twisted chain Hamiltonian");
    spectrum->add_option("--L", o.chain_length, "chain length")->required();
    spectrum->add_option("--boundary", o.boundary, "open | periodic");
    add_point(spectrum);

    auto* compare = app.add_subcommand("compare", "twisted vs untwisted chain spectra");
    compare->add_option("--L", o.chain_length, "chain length")->required();
    compare->add_option("--boundary", o.boundary, "open | periodic");
    add_point(compare);

    auto* oscillator = app.add_subcommand("oscillator", "oscillator relation, R-relation and coaction residuals");
    oscillator->add_option("--D", o.fock_dim, "Fock ladder dimension (default 8)");
    oscillator->add_option("--grid", o.grid, "'default' for the seeded grid");
    add_point(oscillator);

    for (auto* sub : {check, spectrum, compare, oscillator})
        sub->fallthrough();

    app.footer("CSV columns: check reports use check_name,parameters,residual,tolerance,pass;\n"
               "spectra use re,im sorted by (re, im); compare uses model,re,im.\n"
               "Exit status: 0 all pass, 1 a check failed, 2 usage or configuration error.");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const RunConfig cfg = resolve_config(o);
        std::ofstream file;
        if (!cfg.out.empty()) {
            file.open(cfg.out);
            if (!file)
                throw ConfigError("cannot open output file '" + cfg.out + "'");
        }
        std::ostream& os = cfg.out.empty() ? out : file;

        if (check->parsed()) {
            const auto grid = resolve_grid(o, cfg);
            const auto reports = run_suite(cfg, parse_suite(o.suite), grid);
            emit_reports(os, cfg, reports);
            return exit_status(reports);
        }

        if (oscillator->parsed()) {
            const int D = o.fock_dim ? static_cast<int>(*o.fock_dim) : cfg.fock_dim;
            if (D < 2)
                throw ConfigError("D must be at least 2");
            const auto grid = resolve_grid(o, cfg);
            const auto per_point = parallel_map<std::vector<CheckReport>>(grid.size(), cfg.jobs, [&](std::size_t i) {
                std::vector<CheckReport> reports;
                run_oscillator_suite(cfg, grid[i], reports, D, D, /*lambda_family=*/false);
                return reports;
            });
            std::vector<CheckReport> reports;
            for (const auto& b : per_point)
                reports.insert(reports.end(), b.begin(), b.end());
            emit_reports(os, cfg, reports);
            return exit_status(reports);
        }

        const ModelParameters m = resolve_single_point(o, cfg);
        const ChainSpec spec{o.chain_length, parse_boundary(o.boundary), m, cfg.cap};
        if (o.chain_length < 2)
            throw ConfigError("chain length must be at least 2");
        try {
            spec.dimension();
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }

        if (spectrum->parsed()) {
            const auto report = spectrum_report(spec);
            if (cfg.format == Format::csv)
                write_spectrum_csv(os, std::get<std::vector<Complex>>(*report.find_extra("eigenvalues")));
            else
                emit_reports(os, cfg, {report});
            return kExitPass;
        }

        // compare
        const auto report = compare_spectra_twisted_vs_standard(spec.length, m, spec.boundary, cfg.cap,
                                                                cfg.tolerance("spinchain.open_spectra",
                                                                              tolerance::chain_spectra));
        if (cfg.format == Format::csv) {
            os << "model,re,im\n";
            for (const char* model : {"twisted", "standard"})
                for (const auto& z : std::get<std::vector<Complex>>(*report.find_extra(model)))
                    os << model << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        } else {
            emit_reports(os, cfg, {report});
        }
        return report.pass ? kExitPass : kExitFail;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
}

} // namespace cgr::cli
