#pragma once

// Check suites run by the `check` subcommand, one batch of reports per grid point.

#include "cgr/cli/config.hpp"
#include "cgr/qoscillator.hpp"
#include "cgr/report.hpp"
#include "cgr/rmatrix.hpp"
#include "cgr/sampling.hpp"
#include "cgr/spinchain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <vector>

namespace cgr::cli {

enum class Suite { rmatrix, oscillator, spinchain, all };

inline Suite parse_suite(const std::string& s)
{
    if (s == "rmatrix")
        return Suite::rmatrix;
    if (s == "oscillator")
        return Suite::oscillator;
    if (s == "spinchain")
        return Suite::spinchain;
    if (s == "all")
        return Suite::all;
    throw ConfigError("unknown suite '" + s + "'");
}

/// Every check name a suite can emit.
inline std::vector<std::string> check_names(Suite suite)
{
    std::vector<std::string> names;
    if (suite == Suite::rmatrix || suite == Suite::all)
        names.insert(names.end(), {"rmatrix.twist_identity", "rmatrix.ybe", "rmatrix.hecke", "rmatrix.projector_ranks",
                                   "rmatrix.rcheck_spectrum", "rmatrix.braid_similarity",
                                   "rmatrix.braid_spectrum_equivalence", "rmatrix.non_hermiticity",
                                   "rmatrix.q_antisymmetrizer", "rmatrix.qdet_closed_form", "rmatrix.qdet_ratios",
                                   "rmatrix.qdet_exchange", "rmatrix.star_structure", "rmatrix.star_scalar",
                                   "rmatrix.baxter_forms", "rmatrix.baxter_ybe"});
    if (suite == Suite::oscillator || suite == Suite::all)
        names.insert(names.end(), {"oscillator.case", "oscillator.relations", "oscillator.rxx", "oscillator.coaction",
                                   "oscillator.star_consistency", "oscillator.star_obstruction",
                                   "oscillator.k_centrality", "oscillator.lambda_transform",
                                   "oscillator.lambda_consistency"});
    if (suite == Suite::spinchain || suite == Suite::all)
        names.insert(names.end(), {"spinchain.density_table", "spinchain.regularity", "spinchain.commuting_transfer",
                                   "spinchain.translation_covariance", "spinchain.reference_state",
                                   "spinchain.hamiltonian_from_transfer", "spinchain.open_spectra",
                                   "spinchain.periodic_spectra", "spinchain.spectrum_reality"});
    return names;
}

/// Runs one check; an exception becomes a failed report carrying the message.
inline CheckReport guarded(const std::string& name, const ModelParameters& m, const std::function<CheckReport()>& fn)
{
    try {
        return fn();
    } catch (const std::exception& e) {
        auto r = CheckReport::verdict(name, false);
        tag(r, m);
        return r.with_extra("error", std::string(e.what()));
    }
}

/// Per-point RNG stream, independent of execution order.
inline Rng point_rng(const RunConfig& cfg, std::size_t index)
{
    return Rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1)));
}

inline void run_rmatrix_suite(const RunConfig& cfg, const ModelParameters& m, Rng& rng, std::vector<CheckReport>& out)
{
    auto tol = [&](const char* name, double fallback) { return cfg.tolerance(name, fallback); };
    auto add = [&](const char* name, const std::function<CheckReport()>& fn) { out.push_back(guarded(name, m, fn)); };

    add("rmatrix.twist_identity", [&] { return check_twist_identity(m, tol("rmatrix.twist_identity", tolerance::twist_identity)); });
    add("rmatrix.ybe", [&] {
        ComplexMatrix r = cg_r_explicit(m);
        if (cfg.tamper == "ybe")
            r(0, 0) += 1e-3;
        auto rep = check_ybe(r, 3, tol("rmatrix.ybe", tolerance::ybe));
        return tag(rep, m);
    });
    add("rmatrix.hecke", [&] { return check_hecke(m, tol("rmatrix.hecke", tolerance::hecke)); });
    add("rmatrix.projector_ranks", [&] { return check_projector_ranks(m); });
    add("rmatrix.rcheck_spectrum", [&] { return check_rcheck_spectrum(m, tol("rmatrix.rcheck_spectrum", tolerance::rcheck_spectrum)); });
    add("rmatrix.braid_similarity", [&] { return check_braid_similarity(m, tol("rmatrix.braid_similarity", tolerance::braid_similarity)); });
    add("rmatrix.braid_spectrum_equivalence", [&] {
        return check_braid_spectrum_equivalence(m, tol("rmatrix.braid_spectrum_equivalence", tolerance::rcheck_spectrum));
    });
    if (m.nu != 0.0)
        add("rmatrix.non_hermiticity", [&] { return check_non_hermiticity(m); });
    add("rmatrix.q_antisymmetrizer", [&] { return check_q_antisymmetrizer(m, tol("rmatrix.q_antisymmetrizer", tolerance::antisymmetrizer)); });
    add("rmatrix.qdet_closed_form", [&] { return check_qdet_closed_form(m, tol("rmatrix.qdet_closed_form", tolerance::qdet)); });
    add("rmatrix.qdet_ratios", [&] { return check_qdet_ratios(m, tol("rmatrix.qdet_ratios", tolerance::qdet)); });
    add("rmatrix.qdet_exchange", [&] { return check_qdet_exchange(m, tol("rmatrix.qdet_exchange", tolerance::qdet)); });
    add("rmatrix.star_structure", [&] { return check_star_structure(m, tol("rmatrix.star_structure", tolerance::star)); });
    add("rmatrix.star_scalar", [&] { return check_star_scalar(m, tol("rmatrix.star_scalar", tolerance::star_scalar)); });
    const Complex u = rng.spectral_parameter();
    const Complex v = rng.spectral_parameter();
    add("rmatrix.baxter_forms", [&] { return check_baxter_forms(m, u, tol("rmatrix.baxter_forms", tolerance::baxter_forms)); });
    add("rmatrix.baxter_ybe", [&] { return check_baxter_ybe(m, u, v, tol("rmatrix.baxter_ybe", tolerance::baxter_ybe)); });
}

/// Realization used for a grid point: *-realization when nu >= 0.
inline FockRealization suite_fock(int D, const ModelParameters& m, const RunConfig& cfg)
{
    auto f = build_fock(D, m.q, m.p, m.nu, 1.0, m.nu >= 0.0 ? Realization::star : Realization::non_star);
    if (cfg.tamper == "oscillator")
        f.A(0, 1) += 1e-3;
    return f;
}

inline CheckReport case_report(const ModelParameters& m)
{
    const auto c = classify_case(m.q, m.p);
    auto r = CheckReport::verdict("oscillator.case", true);
    tag(r, m).with_extra("label", std::string(to_string(c.label)));
    std::string all;
    for (auto label : c.matches)
        all += (all.empty() ? "" : ",") + std::string(to_string(label));
    return r.with_extra("matches", all);
}

inline void run_oscillator_suite(const RunConfig& cfg, const ModelParameters& m, std::vector<CheckReport>& out,
                                 int fock_dim, int coaction_dim, bool lambda_family = true)
{
    auto tol = [&](const char* name, double fallback) { return cfg.tolerance(name, fallback); };
    auto add = [&](const char* name, const std::function<CheckReport()>& fn) { out.push_back(guarded(name, m, fn)); };

    add("oscillator.case", [&] { return case_report(m); });
    add("oscillator.relations", [&] {
        return check_oscillator_relations(suite_fock(fock_dim, m, cfg), tol("oscillator.relations", tolerance::oscillator_relations));
    });
    add("oscillator.rxx", [&] {
        return check_rxx_relation(suite_fock(fock_dim, m, cfg), cg_r_explicit(m), tol("oscillator.rxx", tolerance::rxx));
    });
    add("oscillator.coaction", [&] {
        return check_coaction_covariance(suite_fock(coaction_dim, m, cfg), cg_r_explicit(m),
                                         tol("oscillator.coaction", tolerance::coaction));
    });
    if (m.nu >= 0.0) {
        add("oscillator.star_consistency", [&] {
            return check_star_consistency(suite_fock(fock_dim, m, cfg),
                                          tol("oscillator.star_consistency", tolerance::star_consistency));
        });
    } else {
        // no *-realization exists; the check passes when the star test rejects it
        add("oscillator.star_obstruction", [&] {
            const auto star = check_star_consistency(suite_fock(fock_dim, m, cfg));
            auto r = CheckReport::verdict("oscillator.star_obstruction", !star.pass);
            return tag(r, m).with_extra("star_residual", star.residual);
        });
    }
    const auto matches = classify_case(m.q, m.p).matches;
    if (std::find(matches.begin(), matches.end(), CaseLabel::ArikCoon) != matches.end()) {
        add("oscillator.k_centrality", [&] {
            return check_k_centrality(suite_fock(fock_dim, m, cfg), tol("oscillator.k_centrality", tolerance::k_centrality));
        });
    }
    if (!lambda_family)
        return;
    const double nu = m.nu > 0.0 ? m.nu : 1.0;
    for (double lambda : {0.0, 0.5, 4.0 / 3.0}) {
        add("oscillator.lambda_transform", [&] {
            return check_lambda_transform(fock_dim, m.q, lambda, tol("oscillator.lambda_transform", tolerance::lambda_relation));
        });
        add("oscillator.lambda_consistency", [&] {
            return check_lambda_consistency(fock_dim, m.q, lambda, nu,
                                            tol("oscillator.lambda_consistency", tolerance::lambda_consistency));
        });
    }
}

inline void run_spinchain_suite(const RunConfig& cfg, const ModelParameters& m, Rng& rng, std::vector<CheckReport>& out)
{
    auto tol = [&](const char* name, double fallback) { return cfg.tolerance(name, fallback); };
    auto add = [&](const char* name, const std::function<CheckReport()>& fn) { out.push_back(guarded(name, m, fn)); };

    add("spinchain.density_table", [&] { return check_density_table(m, tol("spinchain.density_table", tolerance::density_table)); });
    add("spinchain.regularity", [&] { return check_regularity(m, tol("spinchain.regularity", tolerance::regularity)); });
    for (int L : cfg.lengths) {
        const ChainSpec periodic{L, Boundary::periodic, m, cfg.cap};
        const Complex u = rng.spectral_parameter();
        const Complex v = rng.spectral_parameter();
        add("spinchain.commuting_transfer", [&] {
            return check_commuting_transfer(periodic, u, v, tol("spinchain.commuting_transfer", tolerance::commuting_transfer));
        });
        add("spinchain.translation_covariance", [&] {
            return check_translation_covariance(periodic, u, tol("spinchain.translation_covariance", tolerance::translation));
        });
        add("spinchain.reference_state", [&] {
            return check_reference_state(periodic, u, tol("spinchain.reference_state", tolerance::reference_state));
        });
        // t(1) vanishes at q = 1, where there is no regular point to expand around
        if (std::abs(m.omega()) > 1e-3)
            add("spinchain.hamiltonian_from_transfer", [&] {
                return check_hamiltonian_from_transfer(periodic, tol("spinchain.hamiltonian_from_transfer", tolerance::log_derivative));
            });
        add("spinchain.open_spectra", [&] {
            return compare_spectra_twisted_vs_standard(L, m, Boundary::open, cfg.cap,
                                                       tol("spinchain.open_spectra", tolerance::chain_spectra));
        });
        add("spinchain.periodic_spectra", [&] {
            return compare_spectra_twisted_vs_standard(L, m, Boundary::periodic, cfg.cap);
        });
        add("spinchain.spectrum_reality", [&] {
            return check_spectrum_reality(L, m, cfg.cap, tol("spinchain.spectrum_reality", tolerance::spectrum_reality));
        });
    }
}

/// All reports for one grid point, in a fixed order.
inline std::vector<CheckReport> run_point(const RunConfig& cfg, Suite suite, const ModelParameters& m, std::size_t index)
{
    std::vector<CheckReport> out;
    Rng rng = point_rng(cfg, index);
    if (suite == Suite::rmatrix || suite == Suite::all)
        run_rmatrix_suite(cfg, m, rng, out);
    if (suite == Suite::oscillator || suite == Suite::all)
        run_oscillator_suite(cfg, m, out, cfg.fock_dim, cfg.coaction_dim);
    if (suite == Suite::spinchain || suite == Suite::all)
        run_spinchain_suite(cfg, m, rng, out);
    return out;
}

/// Evaluates `job` for every index, concurrently, and returns results in index order.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, unsigned jobs, const std::function<Result(std::size_t)>& job)
{
    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<Result> results(count);
    for (std::size_t start = 0; start < count; start += jobs) {
        const std::size_t stop = std::min(count, start + jobs);
        std::vector<std::future<Result>> batch;
        for (std::size_t i = start; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, job, i));
        for (std::size_t i = start; i < stop; ++i)
            results[i] = batch[i - start].get();
    }
    return results;
}

inline std::vector<CheckReport> run_suite(const RunConfig& cfg, Suite suite, const std::vector<ModelParameters>& grid)
{
    const auto per_point = parallel_map<std::vector<CheckReport>>(
        grid.size(), cfg.jobs, [&](std::size_t i) { return run_point(cfg, suite, grid[i], i); });
    std::vector<CheckReport> all;
    for (const auto& batch : per_point)
        all.insert(all.end(), batch.begin(), batch.end());
    return all;
}

} // namespace cgr::cli
