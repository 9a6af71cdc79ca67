#pragma once

// Integrable sl(3) chain built from the twisted R-matrix: Hamiltonians,
// monodromy and transfer matrices, and their spectral checks.

#include "cgr/linalg.hpp"
#include "cgr/report.hpp"
#include "cgr/rmatrix.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cgr {

inline constexpr int kLocalDim = 3;

struct ChainSpec {
    int length = 2;
    Boundary boundary = Boundary::open;
    ModelParameters params;
    std::size_t cap = kDefaultDimensionCap;

    /// 3^length; throws past the cap.
    std::size_t dimension() const
    {
        if (length < 1)
            throw Error("ChainSpec: length must be positive");
        return checked_power(kLocalDim, length, cap);
    }
};

namespace tolerance {
inline constexpr double density_table = 1e-12;
inline constexpr double regularity = 0.0;
inline constexpr double commuting_transfer = 1e-10;
inline constexpr double translation = 1e-10;
inline constexpr double reference_state = 1e-10;
inline constexpr double log_derivative = 1e-5;
inline constexpr double chain_spectra = 1e-8;
inline constexpr double spectrum_reality = 1e-8;
} // namespace tolerance

inline CheckReport& tag(CheckReport& r, const ChainSpec& s)
{
    tag(r, s.params);
    return r.with_param("L", s.length).with_param("periodic", s.boundary == Boundary::periodic ? 1.0 : 0.0);
}

// ---------------------------------------------------------------------------
// Hamiltonians

/// Two-site Hamiltonian density, transcribed as a table. Equals P R(q, p, nu).
inline ComplexMatrix hamiltonian_density(const ModelParameters& m)
{
    const double q = m.q, p = m.p, nu = m.nu, w = m.omega();
    ComplexMatrix h = ComplexMatrix::Zero(9, 9);
    entry(h, 1, 1) = q;
    entry(h, 2, 4) = 1.0 / p;
    entry(h, 3, 5) = q * nu;
    entry(h, 3, 7) = q / (p * p);
    entry(h, 4, 2) = p;
    entry(h, 4, 4) = w;
    entry(h, 5, 5) = q;
    entry(h, 6, 8) = 1.0 / p;
    entry(h, 7, 3) = p * p / q;
    entry(h, 7, 5) = -p * p * nu / q;
    entry(h, 7, 7) = w;
    entry(h, 8, 6) = p;
    entry(h, 8, 8) = w;
    entry(h, 9, 9) = q;
    return h;
}

/// Two-site density of the untwisted sl_q(3) chain.
inline ComplexMatrix standard_density(double q) { return braid(standard_r(q, 3)); }

/// sum_n h_{n,n+1}, plus the wrap term h_{L,1} on a periodic chain.
inline ComplexMatrix chain_hamiltonian(const ComplexMatrix& h, int length, Boundary boundary,
                                       std::size_t cap = kDefaultDimensionCap)
{
    if (length < 2)
        throw Error("chain_hamiltonian: length must be at least 2");
    const auto dim = static_cast<Eigen::Index>(checked_power(kLocalDim, length, cap));
    ComplexMatrix H = ComplexMatrix::Zero(dim, dim);
    const int last = boundary == Boundary::periodic ? length : length - 1;
    for (int site = 1; site <= last; ++site)
        H += embed_two_site(h, site, length, kLocalDim, boundary, cap);
    return H;
}

inline ComplexMatrix chain_hamiltonian(const ChainSpec& s)
{
    return chain_hamiltonian(hamiltonian_density(s.params), s.length, s.boundary, s.cap);
}

// ---------------------------------------------------------------------------
// Monodromy and transfer matrices
//
// The auxiliary space is the most significant tensor slot; chain site j is
// slot j + 1. Ordering convention: T(u) = R_{0L}(u) ... R_{01}(u).

inline ComplexMatrix monodromy_from(const ComplexMatrix& ru, int length, std::size_t cap = kDefaultDimensionCap)
{
    if (length < 1)
        throw Error("monodromy: length must be positive");
    const auto dim = static_cast<Eigen::Index>(checked_power(kLocalDim, length + 1, cap));
    ComplexMatrix t = identity(dim);
    for (int site = length; site >= 1; --site)
        t = t * embed_pair(ru, 1, site + 1, length + 1, kLocalDim, cap);
    return t;
}

inline ComplexMatrix partial_trace_aux(const ComplexMatrix& t)
{
    const Eigen::Index n = t.rows() / kLocalDim;
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < kLocalDim; ++a)
        out += t.block(a * n, a * n, n, n);
    return out;
}

inline ComplexMatrix monodromy(const ChainSpec& s, Complex u)
{
    return monodromy_from(spectral_r(s.params, u), s.length, s.cap);
}

inline ComplexMatrix transfer_matrix(const ChainSpec& s, Complex u) { return partial_trace_aux(monodromy(s, u)); }

/// Transfer matrix of the untwisted sl_q(3) chain with the same q.
inline ComplexMatrix standard_transfer_matrix(const ChainSpec& s, Complex u)
{
    const ComplexMatrix ru = permutation_operator(3) * baxterize_braid(standard_density(s.params.q), s.params.q, u);
    return partial_trace_aux(monodromy_from(ru, s.length, s.cap));
}

// ---------------------------------------------------------------------------
// Checks

inline CheckReport check_density_table(const ModelParameters& m, double tol = tolerance::density_table)
{
    auto r = CheckReport::residual_check("spinchain.density_table",
                                         residual_norm(hamiltonian_density(m), braid(cg_r_explicit(m))), tol);
    return tag(r, m);
}

/// Rc(1) = omega I and R(1) = omega P, exactly.
inline CheckReport check_regularity(const ModelParameters& m, double tol = tolerance::regularity)
{
    const double w = m.omega();
    const double res = std::max(residual_norm(baxterize(m, 1.0), w * identity(9)),
                                residual_norm(spectral_r(m, 1.0), w * permutation_operator(3)));
    auto r = CheckReport::residual_check("spinchain.regularity", res, tol);
    return tag(r, m);
}

inline CheckReport check_commuting_transfer(const ChainSpec& s, Complex u, Complex v,
                                            double tol = tolerance::commuting_transfer)
{
    const ComplexMatrix tu = transfer_matrix(s, u);
    const ComplexMatrix tv = transfer_matrix(s, v);
    const double scale = std::max(1e-300, tu.norm() * tv.norm());
    auto r = CheckReport::residual_check("spinchain.commuting_transfer", commutator(tu, tv).norm() / scale, tol);
    return tag(r, s).with_param("u_re", u.real()).with_param("u_im", u.imag()).with_param("v_re", v.real()).with_param(
        "v_im", v.imag());
}

/// The cyclic shift commutes with t(u) and with the periodic Hamiltonian.
inline CheckReport check_translation_covariance(const ChainSpec& s, Complex u, double tol = tolerance::translation)
{
    const ComplexMatrix shift = cyclic_shift(s.length, kLocalDim, s.cap);
    const ComplexMatrix t = transfer_matrix(s, u);
    const ComplexMatrix H = chain_hamiltonian(hamiltonian_density(s.params), s.length, Boundary::periodic, s.cap);
    const double res = std::max(residual_norm(shift * t, t * shift), residual_norm(shift * H, H * shift));
    auto r = CheckReport::residual_check("spinchain.translation_covariance", res, tol);
    return tag(r, s).with_param("u_re", u.real()).with_param("u_im", u.imag());
}

namespace detail {

struct ReferenceAction {
    Complex eigenvalue;
    double residual;
};

inline ReferenceAction reference_action(const ComplexMatrix& t)
{
    ComplexVector omega = ComplexVector::Zero(t.rows());
    omega(t.rows() - 1) = 1.0; // e_3 on every site
    const ComplexVector w = t * omega;
    const double norm = w.norm();
    if (norm == 0.0)
        throw Error("check_reference_state: t(u) annihilates the reference state");
    const Complex lambda = omega.dot(w) / omega.squaredNorm();
    return {lambda, (w - lambda * omega).norm() / norm};
}

} // namespace detail

/// Omega = e_3^{(x)L} is an eigenvector of t(u). The eigenvalue of the
/// untwisted chain is recorded alongside for comparison.
inline CheckReport check_reference_state(const ChainSpec& s, Complex u, double tol = tolerance::reference_state)
{
    const auto twisted = detail::reference_action(transfer_matrix(s, u));
    auto r = CheckReport::residual_check("spinchain.reference_state", twisted.residual, tol);
    tag(r, s).with_param("u_re", u.real()).with_param("u_im", u.imag());
    r.with_extra("eigenvalue", std::vector<Complex>{twisted.eigenvalue});
    const ComplexMatrix ts = standard_transfer_matrix(s, u);
    const ComplexVector w = ts.col(ts.cols() - 1);
    const Complex standard = w(w.size() - 1);
    r.with_extra("standard_eigenvalue", std::vector<Complex>{standard});
    if (standard != Complex(0.0))
        r.with_extra("eigenvalue_ratio", std::vector<Complex>{twisted.eigenvalue / standard});
    return r;
}

struct LogDerivativeFit {
    ComplexMatrix derivative; ///< t(1)^{-1} t'(1)
    Complex slope;            ///< a in D = a H + b I
    Complex offset;           ///< b
    double residual = 0.0;    ///< ||D - a H - b I|| / ||D||
};

/// Central difference with steps 1e-6 and 5e-7, one Richardson level, then a
/// least-squares fit against the periodic Hamiltonian and the identity.
inline LogDerivativeFit log_derivative_fit(const ChainSpec& s)
{
    if (s.boundary != Boundary::periodic)
        throw Error("log_derivative_fit: requires a periodic chain");
    if (s.length < 2)
        throw Error("log_derivative_fit: length must be at least 2");
    const ComplexMatrix t1 = transfer_matrix(s, 1.0);
    Eigen::FullPivLU<ComplexMatrix> lu(t1);
    if (s.params.omega() == 0.0 || !lu.isInvertible())
        throw Error("log_derivative_fit: t(1) is singular");

    auto central = [&](double h) {
        return ComplexMatrix((transfer_matrix(s, 1.0 + h) - transfer_matrix(s, 1.0 - h)) / (2.0 * h));
    };
    const ComplexMatrix dt = (4.0 * central(5e-7) - central(1e-6)) / 3.0;

    LogDerivativeFit fit;
    fit.derivative = lu.solve(dt);
    const ComplexMatrix H = chain_hamiltonian(s);
    const ComplexMatrix id = identity(H.rows());
    auto inner = [](const ComplexMatrix& x, const ComplexMatrix& y) { return (x.adjoint() * y).trace(); };
    Eigen::Matrix2cd gram;
    gram << inner(H, H), inner(H, id), inner(id, H), inner(id, id);
    Eigen::Vector2cd rhs(inner(H, fit.derivative), inner(id, fit.derivative));
    const Eigen::Vector2cd coef = gram.fullPivLu().solve(rhs);
    fit.slope = coef(0);
    fit.offset = coef(1);
    const double dnorm = std::max(1e-300, fit.derivative.norm());
    fit.residual = (fit.derivative - fit.slope * H - fit.offset * id).norm() / dnorm;
    return fit;
}

inline CheckReport check_hamiltonian_from_transfer(const ChainSpec& s, double tol = tolerance::log_derivative)
{
    const auto fit = log_derivative_fit(s);
    auto r = CheckReport::residual_check("spinchain.hamiltonian_from_transfer", fit.residual, tol);
    return tag(r, s).with_extra("slope", std::vector<Complex>{fit.slope}).with_extra("offset",
                                                                                       std::vector<Complex>{fit.offset});
}

/// Sorted eigenvalues of H_CG on the chain.
inline Spectrum chain_spectrum(const ChainSpec& s)
{
    Spectrum sp = eigenvalues(chain_hamiltonian(s));
    sp.eigenvalues = sorted(std::move(sp.eigenvalues));
    return sp;
}

/// H_CG against the untwisted sl_q(3) chain. Open chains are asserted; the
/// periodic comparison is reported with asserted = false and always passes.
inline CheckReport compare_spectra_twisted_vs_standard(int length, const ModelParameters& m, Boundary boundary,
                                                       std::size_t cap = kDefaultDimensionCap,
                                                       double tol = tolerance::chain_spectra)
{
    const Spectrum twisted = eigenvalues(chain_hamiltonian(hamiltonian_density(m), length, boundary, cap));
    const Spectrum standard = eigenvalues(chain_hamiltonian(standard_density(m.q), length, boundary, cap));
    const auto match = spectra_match(twisted, standard, tol);
    const double normalized = match.max_deviation / std::max(1.0, twisted.scale);

    CheckReport r;
    if (boundary == Boundary::open) {
        r = CheckReport::residual_check("spinchain.open_spectra", normalized, tol);
    } else {
        r = CheckReport::verdict("spinchain.periodic_spectra", true, tol);
    }
    tag(r, m).with_param("L", length).with_param("periodic", boundary == Boundary::periodic ? 1.0 : 0.0);
    return r.with_extra("asserted", boundary == Boundary::open)
        .with_extra("max_deviation", match.max_deviation)
        .with_extra("twisted", sorted(twisted.eigenvalues))
        .with_extra("standard", sorted(standard.eigenvalues));
}

/// Open-chain H_CG is non-Hermitian for nu != 0 yet has a real spectrum.
inline CheckReport check_spectrum_reality(int length, const ModelParameters& m, std::size_t cap = kDefaultDimensionCap,
                                          double tol = tolerance::spectrum_reality)
{
    const ComplexMatrix H = chain_hamiltonian(hamiltonian_density(m), length, Boundary::open, cap);
    const Spectrum s = eigenvalues(H);
    double max_imag = 0.0;
    for (const auto& z : s.eigenvalues)
        max_imag = std::max(max_imag, std::abs(z.imag()));
    const double defect = (H - H.adjoint()).norm();
    const bool real = max_imag <= tol * s.scale;
    const bool non_hermitian = m.nu == 0.0 || defect > tolerance::non_hermiticity;
    auto r = CheckReport::verdict("spinchain.spectrum_reality", real && non_hermitian, tol);
    tag(r, m).with_param("L", length);
    return r.with_extra("max_imag", max_imag)
        .with_extra("scale", s.scale)
        .with_extra("hermiticity_defect", defect)
        .with_extra("hermitian", defect == 0.0);
}

} // namespace cgr
