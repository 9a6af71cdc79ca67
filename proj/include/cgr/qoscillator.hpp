#pragma once

// Covariant deformed oscillator on a truncated Fock ladder.
//
// Generators (x1, x2, x3) = (A, K, A^dagger) obey
//   K A = pq A K,   K A^dagger = (pq)^{-1} A^dagger K,   A A^dagger - p^{-2} A^dagger A = nu K^2.
// On a ladder of D states these hold exactly except on the top rung, so every
// check below restricts to the low states only.

#include "cgr/linalg.hpp"
#include "cgr/report.hpp"
#include "cgr/rmatrix.hpp"

#include <cmath>
#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cgr {

enum class Realization {
    star,    ///< A^dagger is the conjugate transpose of A; needs nu >= 0
    non_star ///< A^dagger only satisfies the relations; admits nu < 0
};

struct FockRealization {
    int dimension = 0;
    double q = 1.0;
    double p = 1.0;
    double nu = 0.0;
    double kappa0 = 1.0;
    Realization kind = Realization::star;
    ComplexMatrix A;
    ComplexMatrix K;
    ComplexMatrix Adag;

    ModelParameters parameters() const { return {q, p, nu}; }

    /// 1 + ln p / ln q, undefined at q == 1.
    std::optional<double> lambda() const
    {
        if (q == 1.0)
            return std::nullopt;
        return 1.0 + std::log(p) / std::log(q);
    }
};

namespace tolerance {
inline constexpr double oscillator_relations = 1e-12;
inline constexpr double rxx = 1e-11;
inline constexpr double coaction = 1e-10;
inline constexpr double lambda_consistency = 1e-12;
inline constexpr double lambda_relation = 1e-12;
inline constexpr double star_consistency = 0.0;
inline constexpr double k_centrality = 0.0;
} // namespace tolerance

/// alpha_n^2 for n = 0..D-1 from alpha_{n+1}^2 = p^{-2} alpha_n^2 + nu kappa0^2 (pq)^{-2n}, alpha_0 = 0.
inline std::vector<double> alpha_squared(int D, double q, double p, double nu, double kappa0)
{
    std::vector<double> a2(static_cast<std::size_t>(D), 0.0);
    for (int n = 0; n + 1 < D; ++n)
        a2[n + 1] = a2[n] / (p * p) + nu * kappa0 * kappa0 * std::pow(p * q, -2.0 * n);
    return a2;
}

/// Weighted-shift realization: K e_n = kappa0 (pq)^{-n} e_n, A e_n = alpha_n e_{n-1}.
inline FockRealization build_fock(int D, double q, double p, double nu, double kappa0 = 1.0,
                                  Realization kind = Realization::star)
{
    if (D < 2)
        throw Error("build_fock: D must be at least 2");
    if (!(q > 0.0) || !(p > 0.0) || !(kappa0 > 0.0))
        throw Error("build_fock: q, p and kappa0 must be positive");
    if (!std::isfinite(q) || !std::isfinite(p) || !std::isfinite(nu) || !std::isfinite(kappa0))
        throw Error("build_fock: non-finite parameter");
    if (kind == Realization::star && nu < 0.0)
        throw Error("build_fock: nu < 0 admits no *-realization; request Realization::non_star");

    FockRealization f;
    f.dimension = D;
    f.q = q;
    f.p = p;
    f.nu = nu;
    f.kappa0 = kappa0;
    f.kind = kind;
    f.A = ComplexMatrix::Zero(D, D);
    f.K = ComplexMatrix::Zero(D, D);
    f.Adag = ComplexMatrix::Zero(D, D);

    // p = 1/q rarely gives p*q == 1 exactly; snap so that K stays central there
    const double pq = std::abs(p * q - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? 1.0 : p * q;
    const auto a2 = alpha_squared(D, q, p, nu, kappa0);
    for (int n = 0; n < D; ++n) {
        f.K(n, n) = kappa0 * std::pow(pq, -static_cast<double>(n));
        if (n == 0)
            continue;
        if (kind == Realization::star) {
            if (a2[n] < 0.0)
                throw Error("build_fock: negative alpha^2 at level " + std::to_string(n));
            f.A(n - 1, n) = std::sqrt(a2[n]);
            f.Adag(n, n - 1) = std::sqrt(a2[n]);
        } else {
            // split alpha^2 = |alpha^2|^{1/2} * sign |alpha^2|^{1/2} between A and A^dagger
            const double mag = std::sqrt(std::abs(a2[n]));
            f.A(n - 1, n) = mag;
            f.Adag(n, n - 1) = a2[n] < 0.0 ? -mag : mag;
        }
    }
    return f;
}

inline CheckReport& tag(CheckReport& r, const FockRealization& f)
{
    return r.with_param("q", f.q).with_param("p", f.p).with_param("nu", f.nu).with_param("D", f.dimension);
}

inline CheckReport check_oscillator_relations(const FockRealization& f, double tol = tolerance::oscillator_relations)
{
    const Eigen::Index safe = f.dimension - 1;
    const double pq = f.p * f.q;
    const double r1 = restricted_residual(f.K * f.A, pq * f.A * f.K, safe);
    const double r2 = restricted_residual(f.K * f.Adag, f.Adag * f.K / pq, safe);
    const double r3 =
        restricted_residual(f.A * f.Adag - f.Adag * f.A / (f.p * f.p), f.nu * f.K * f.K, safe);
    auto r = CheckReport::residual_check("oscillator.relations", std::max({r1, r2, r3}), tol);
    return tag(r, f).with_extra("ka_residual", r1).with_extra("kadag_residual", r2).with_extra("aadag_residual", r3);
}

namespace detail {

inline void require_matching_r(const FockRealization& f, const ComplexMatrix& r, const char* what)
{
    if (r.rows() != 9 || r.cols() != 9)
        throw Error(std::string(what) + ": R must be 9x9");
    if (residual_norm(r, cg_r_explicit(f.parameters())) > 1e-9)
        throw Error(std::string(what) + ": R does not match the realization's (q, p, nu)");
}

} // namespace detail

/// R X1 X2 = q X2 X1 component by component, on span{e_0..e_{D-3}}.
inline CheckReport check_rxx_relation(const FockRealization& f, const ComplexMatrix& r, double tol = tolerance::rxx)
{
    detail::require_matching_r(f, r, "check_rxx_relation");
    const ComplexMatrix* x[3] = {&f.A, &f.K, &f.Adag};
    ComplexMatrix prod[3][3];
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
            prod[j][l] = (*x[j]) * (*x[l]);

    const Eigen::Index safe = f.dimension - 2;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            ComplexMatrix lhs = ComplexMatrix::Zero(f.dimension, f.dimension);
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) {
                    const Complex c = r(3 * i + k, 3 * j + l);
                    if (c != Complex(0.0))
                        lhs += c * prod[j][l];
                }
            worst = std::max(worst, restricted_residual(lhs, f.q * prod[k][i], safe));
        }
    auto rep = CheckReport::residual_check("oscillator.rxx", worst, tol);
    return tag(rep, f);
}

// ---------------------------------------------------------------------------
// Arik-Coon generators and the lambda family

struct ArikCoonRealization {
    double lambda = 0.0;
    ComplexMatrix a;      ///< a a^dagger - q^2 a^dagger a = 1
    ComplexMatrix adag;
    ComplexMatrix number; ///< N = diag(0..D-1)
    FockRealization fock; ///< (a(lambda), K, a^dagger(lambda)) with p = q^{lambda-1}
    double base_residual = 0.0;        ///< Arik-Coon relation and [N, a] = -a
    double transformed_residual = 0.0; ///< a(l) a^dag(l) - q^{2(1-l)} a^dag(l) a(l) = q^{-2 l N}
};

/// a(lambda) = q^{-lambda N} a, a^dagger(lambda) = a^dagger q^{-lambda N}, and
/// K = nu^{-1/2} q^{-lambda N} so that K^2 = nu^{-1} q^{-2 lambda N}.
inline ArikCoonRealization arik_coon_transform(int D, double q, double lambda, double nu = 1.0)
{
    if (D < 2)
        throw Error("arik_coon_transform: D must be at least 2");
    if (!(q > 0.0) || !std::isfinite(q) || !std::isfinite(lambda))
        throw Error("arik_coon_transform: q must be positive and finite");
    if (!(nu > 0.0))
        throw Error("arik_coon_transform: nu must be positive");

    ArikCoonRealization out;
    out.lambda = lambda;
    out.a = ComplexMatrix::Zero(D, D);
    out.number = ComplexMatrix::Zero(D, D);
    double bracket = 0.0; // [n]_{q^2}
    for (int n = 0; n < D; ++n) {
        out.number(n, n) = static_cast<double>(n);
        if (n > 0) {
            bracket = 1.0 + q * q * bracket;
            out.a(n - 1, n) = std::sqrt(bracket);
        }
    }
    out.adag = out.a.adjoint();

    auto q_power_n = [&](double s) {
        ComplexMatrix m = ComplexMatrix::Zero(D, D);
        for (int n = 0; n < D; ++n)
            m(n, n) = std::pow(q, s * n);
        return m;
    };
    const ComplexMatrix al = q_power_n(-lambda) * out.a;
    const ComplexMatrix adl = out.adag * q_power_n(-lambda);

    const Eigen::Index safe = D - 1;
    out.base_residual = std::max(restricted_residual(out.a * out.adag - q * q * out.adag * out.a, identity(D), safe),
                                 residual_norm(commutator(out.number, out.a), -out.a));
    out.transformed_residual =
        restricted_residual(al * adl - std::pow(q, 2.0 * (1.0 - lambda)) * adl * al, q_power_n(-2.0 * lambda), safe);

    FockRealization& f = out.fock;
    f.dimension = D;
    f.q = q;
    f.p = std::pow(q, lambda - 1.0);
    f.nu = nu;
    f.kappa0 = 1.0 / std::sqrt(nu);
    f.kind = Realization::star;
    f.A = al;
    f.Adag = adl;
    f.K = f.kappa0 * q_power_n(-lambda);
    return out;
}

inline CheckReport check_lambda_transform(int D, double q, double lambda, double tol = tolerance::lambda_relation)
{
    const auto ac = arik_coon_transform(D, q, lambda);
    auto r = CheckReport::residual_check("oscillator.lambda_transform",
                                         std::max(ac.base_residual, ac.transformed_residual), tol);
    return r.with_param("q", q).with_param("lambda", lambda).with_param("D", D);
}

/// Generator triples of the lambda family against the direct weighted-shift
/// construction with p = q^{lambda-1}, kappa0 = nu^{-1/2}.
inline CheckReport check_lambda_consistency(int D, double q, double lambda, double nu,
                                            double tol = tolerance::lambda_consistency)
{
    const auto ac = arik_coon_transform(D, q, lambda, nu);
    const auto direct = build_fock(D, q, ac.fock.p, nu, ac.fock.kappa0);
    const double res = std::max({max_entry_deviation(ac.fock.A, direct.A), max_entry_deviation(ac.fock.K, direct.K),
                                 max_entry_deviation(ac.fock.Adag, direct.Adag)});
    auto r = CheckReport::residual_check("oscillator.lambda_consistency", res, tol);
    return r.with_param("q", q).with_param("lambda", lambda).with_param("nu", nu).with_param("D", D);
}

// ---------------------------------------------------------------------------
// Special parameter values

enum class CaseLabel { ArikCoon, MacfarlaneBiedenharn, CremmerGervais, ClassicalNonstandard, Generic };

inline const char* to_string(CaseLabel c)
{
    switch (c) {
    case CaseLabel::ArikCoon: return "ArikCoon";
    case CaseLabel::MacfarlaneBiedenharn: return "MacfarlaneBiedenharn";
    case CaseLabel::CremmerGervais: return "CremmerGervais";
    case CaseLabel::ClassicalNonstandard: return "ClassicalNonstandard";
    case CaseLabel::Generic: return "Generic";
    }
    return "?";
}

struct OscillatorCase {
    CaseLabel label = CaseLabel::Generic;
    std::vector<CaseLabel> matches; ///< every matching non-generic label, in priority order
};

/// Priority: ClassicalNonstandard > ArikCoon > MacfarlaneBiedenharn > CremmerGervais.
inline OscillatorCase classify_case(double q, double p)
{
    if (!(q > 0.0) || !(p > 0.0))
        throw Error("classify_case: q and p must be positive");
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };
    OscillatorCase out;
    if (close(q, 1.0))
        out.matches.push_back(CaseLabel::ClassicalNonstandard);
    if (close(p * q, 1.0))
        out.matches.push_back(CaseLabel::ArikCoon);
    if (close(p, 1.0 / std::sqrt(q)))
        out.matches.push_back(CaseLabel::MacfarlaneBiedenharn);
    if (close(p * p * p, q))
        out.matches.push_back(CaseLabel::CremmerGervais);
    if (!out.matches.empty())
        out.label = out.matches.front();
    return out;
}

// ---------------------------------------------------------------------------
// Coaction and *-structure

/// X'_i = sum_j T_ij (x) x_j with T_ij the 3x3 blocks of R, acting on aux (x) Fock.
inline std::array<ComplexMatrix, 3> coaction(const FockRealization& f, const ComplexMatrix& r)
{
    const ComplexMatrix* x[3] = {&f.A, &f.K, &f.Adag};
    std::array<ComplexMatrix, 3> out;
    for (int i = 0; i < 3; ++i) {
        out[i] = ComplexMatrix::Zero(3 * f.dimension, 3 * f.dimension);
        for (int j = 0; j < 3; ++j)
            out[i] += kron(r_block(r, i + 1, j + 1), *x[j]);
    }
    return out;
}

/// The coaction images satisfy the oscillator relations on aux (x) span{e_0..e_{D-2}}.
inline CheckReport check_coaction_covariance(const FockRealization& f, const ComplexMatrix& r,
                                             double tol = tolerance::coaction)
{
    detail::require_matching_r(f, r, "check_coaction_covariance");
    const auto [A, K, Adag] = coaction(f, r);
    const Eigen::Index D = f.dimension;

    ComplexMatrix select = ComplexMatrix::Zero(3 * D, 3 * (D - 1));
    for (Eigen::Index a = 0; a < 3; ++a)
        for (Eigen::Index n = 0; n + 1 < D; ++n)
            select(a * D + n, a * (D - 1) + n) = 1.0;
    auto restricted = [&](const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
        return residual_norm(lhs * select, rhs * select);
    };

    const double pq = f.p * f.q;
    const double r1 = restricted(K * A, pq * A * K);
    const double r2 = restricted(K * Adag, Adag * K / pq);
    const double r3 = restricted(A * Adag - Adag * A / (f.p * f.p), f.nu * K * K);
    auto rep = CheckReport::residual_check("oscillator.coaction", std::max({r1, r2, r3}), tol);
    return tag(rep, f).with_extra("ka_residual", r1).with_extra("kadag_residual", r2).with_extra("aadag_residual", r3);
}

/// K^dagger = K, (A^dagger)^dagger = A, and the reversal X* = C X on the triple.
inline CheckReport check_star_consistency(const FockRealization& f, double tol = tolerance::star_consistency)
{
    const ComplexMatrix* x[3] = {&f.A, &f.K, &f.Adag};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        worst = std::max(worst, residual_norm(x[i]->adjoint(), *x[2 - i]));
    auto r = CheckReport::residual_check("oscillator.star_consistency", worst, tol);
    return tag(r, f);
}

/// ||[K, A]|| and ||[K, A^dagger]||; vanishes identically when pq = 1.
inline CheckReport check_k_centrality(const FockRealization& f, double tol = tolerance::k_centrality)
{
    const double res = std::max(commutator(f.K, f.A).norm(), commutator(f.K, f.Adag).norm());
    auto r = CheckReport::residual_check("oscillator.k_centrality", res, tol);
    return tag(r, f);
}

} // namespace cgr
