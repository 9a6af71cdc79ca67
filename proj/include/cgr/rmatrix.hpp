#pragma once

// The standard sl_q(n) R-matrix, the Cremmer-Gervais twist and the two-parameter
// twisted R(q, p, nu) for sl(3), together with matrix-level checks of the
// identities they satisfy.

#include "cgr/linalg.hpp"
#include "cgr/report.hpp"

#include <cmath>
#include <string>

namespace cgr {

struct ModelParameters {
    double q = 1.0;
    double p = 1.0;
    double nu = 0.0;

    ModelParameters() = default;

    ModelParameters(double q_, double p_, double nu_) : q(q_), p(p_), nu(nu_)
    {
        if (!std::isfinite(q) || !std::isfinite(p) || !std::isfinite(nu))
            throw Error("ModelParameters: non-finite value");
        if (q == 0.0 || p == 0.0)
            throw Error("ModelParameters: q and p must be nonzero");
    }

    double omega() const { return q - 1.0 / q; }

    friend bool operator==(const ModelParameters&, const ModelParameters&) = default;
};

/// Attaches (q, p, nu) to a report.
inline CheckReport& tag(CheckReport& r, const ModelParameters& m)
{
    return r.with_param("q", m.q).with_param("p", m.p).with_param("nu", m.nu);
}

namespace tolerance {
inline constexpr double twist_identity = 1e-12;
inline constexpr double ybe = 1e-11;
inline constexpr double hecke = 1e-12;
inline constexpr double rcheck_spectrum = 1e-9;
inline constexpr double braid_similarity = 1e-12;
inline constexpr double antisymmetrizer = 1e-10;
inline constexpr double qdet = 1e-10;
inline constexpr double star = 1e-12;
inline constexpr double star_scalar = 1e-10;
inline constexpr double baxter_forms = 1e-12;
inline constexpr double baxter_ybe = 1e-11;
inline constexpr double non_hermiticity = 1e-6; // lower bound, not a residual
} // namespace tolerance

// ---------------------------------------------------------------------------
// Constructions

/// sum_i q e_ii(x)e_ii + sum_{i!=j} e_ii(x)e_jj + sum_{i<j} omega e_ij(x)e_ji
inline ComplexMatrix standard_r(double q, int n)
{
    if (q == 0.0 || !std::isfinite(q))
        throw Error("standard_r: q must be finite and nonzero");
    if (n < 2)
        throw Error("standard_r: n must be at least 2");
    const double omega = q - 1.0 / q;
    ComplexMatrix r = ComplexMatrix::Zero(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const int diag = flatten(n, i, j);
            entry(r, diag, diag) = (i == j) ? q : 1.0;
            // e_ij (x) e_ji maps e_j (x) e_i to e_i (x) e_j
            if (i < j)
                entry(r, flatten(n, i, j), flatten(n, j, i)) = omega;
        }
    return r;
}

struct TwistPair {
    ComplexMatrix f;
    ComplexMatrix f21;
};

/// The 9x9 twist F and F21 = P F P.
inline TwistPair twist_f(const ModelParameters& m)
{
    const double q = m.q, p = m.p;
    ComplexMatrix f = diagonal({1.0, 1.0, q / p, p, p, 1.0, p, p, 1.0});
    entry(f, 3, 5) = p * m.nu;
    const ComplexMatrix perm = permutation_operator(3);
    return {f, perm * f * perm};
}

/// R(q, p, nu) written out entry by entry from its closed form.
inline ComplexMatrix cg_r_explicit(const ModelParameters& m)
{
    const double q = m.q, p = m.p, nu = m.nu;
    auto e = [](int i, int j) { return unit(3, i, j); };
    ComplexMatrix r = standard_r(q, 3);
    r += (p - 1.0) * (kron(e(1, 1), e(2, 2)) + kron(e(2, 2), e(3, 3)));
    r += (1.0 / p - 1.0) * (kron(e(2, 2), e(1, 1)) + kron(e(3, 3), e(2, 2)));
    r += (p * p / q - 1.0) * kron(e(1, 1), e(3, 3));
    r += (q / (p * p) - 1.0) * kron(e(3, 3), e(1, 1));
    r += q * nu * (kron(e(3, 2), e(1, 2)) - (p * p / (q * q)) * kron(e(1, 2), e(3, 2)));
    return r;
}

/// R(q, p, nu) = F21 R(q) F^{-1}.
inline ComplexMatrix cg_r_twisted(const ModelParameters& m)
{
    const auto [f, f21] = twist_f(m);
    Eigen::FullPivLU<ComplexMatrix> lu(f);
    if (!lu.isInvertible())
        throw Error("cg_r_twisted: twist matrix is singular");
    return f21 * standard_r(m.q, 3) * lu.inverse();
}

inline int local_dimension(const ComplexMatrix& r)
{
    const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(r.rows()))));
    if (n * n != r.rows() || r.rows() != r.cols())
        throw Error("R-matrix dimension is not a perfect square");
    return n;
}

/// Braid form P r.
inline ComplexMatrix braid(const ComplexMatrix& r) { return permutation_operator(local_dimension(r)) * r; }

/// The 3x3 block R_{ik,jl} (fixed i, j) acting on the second factor. These
/// blocks represent the quantum-group generators T_ij.
inline ComplexMatrix r_block(const ComplexMatrix& r, int i, int j)
{
    const int n = local_dimension(r);
    return r.block((i - 1) * n, (j - 1) * n, n, n);
}

// ---------------------------------------------------------------------------
// Yang-Baxter equation

inline CheckReport check_ybe(const ComplexMatrix& r, int n, double tol = tolerance::ybe)
{
    if (r.rows() != n * n || r.cols() != n * n)
        throw Error("check_ybe: R dimension does not match n^2");
    const ComplexMatrix id = identity(n);
    const ComplexMatrix r12 = kron(r, id);
    const ComplexMatrix r23 = kron(id, r);
    const ComplexMatrix p23 = kron(id, permutation_operator(n));
    const ComplexMatrix r13 = p23 * r12 * p23;
    const double res = residual_norm(r12 * r13 * r23, r23 * r13 * r12);
    return CheckReport::residual_check("rmatrix.ybe", res, tol);
}

inline CheckReport check_twist_identity(const ModelParameters& m, double tol = tolerance::twist_identity)
{
    auto r = CheckReport::residual_check("rmatrix.twist_identity",
                                         residual_norm(cg_r_twisted(m), cg_r_explicit(m)), tol);
    return tag(r, m);
}

/// P R_CG = F (P R(q)) F^{-1}: the twist acts on the braid form by similarity.
inline CheckReport check_braid_similarity(const ModelParameters& m, double tol = tolerance::braid_similarity)
{
    const auto [f, f21] = twist_f(m);
    const ComplexMatrix rhs = f * braid(standard_r(m.q, 3)) * f.inverse();
    auto r = CheckReport::residual_check("rmatrix.braid_similarity", residual_norm(braid(cg_r_twisted(m)), rhs), tol);
    return tag(r, m);
}

// ---------------------------------------------------------------------------
// Hecke structure

struct HeckeDecomposition {
    ComplexMatrix rCheck;
    ComplexMatrix pPlus;
    ComplexMatrix pMinus;
    int rankPlus = 0;
    int rankMinus = 0;
    double heckeResidual = 0.0;
};

/// Splits P r into q P+ - q^{-1} P-. Throws if P r is not Hecke within `tol`.
inline HeckeDecomposition hecke_decomposition(const ComplexMatrix& r, double q, double tol = kDefaultTolerance)
{
    if (q == 0.0)
        throw Error("hecke_decomposition: q must be nonzero");
    const double qsum = q + 1.0 / q;
    if (qsum == 0.0)
        throw Error("hecke_decomposition: q + 1/q vanishes");
    const double omega = q - 1.0 / q;
    HeckeDecomposition h;
    h.rCheck = braid(r);
    const ComplexMatrix id = identity(h.rCheck.rows());
    h.heckeResidual = residual_norm(h.rCheck * h.rCheck, id + omega * h.rCheck);
    if (!(h.heckeResidual <= tol))
        throw Error("hecke_decomposition: input is not Hecke (residual " + std::to_string(h.heckeResidual) + ")");
    h.pPlus = (h.rCheck + id / q) / qsum;
    h.pMinus = (q * id - h.rCheck) / qsum;
    h.rankPlus = numerical_rank(h.pPlus);
    h.rankMinus = numerical_rank(h.pMinus);
    return h;
}

inline CheckReport check_hecke(const ModelParameters& m, double tol = tolerance::hecke)
{
    const auto h = hecke_decomposition(cg_r_explicit(m), m.q, 1.0);
    const ComplexMatrix id = identity(9);
    const double res = std::max({h.heckeResidual, residual_norm(h.pPlus + h.pMinus, id),
                                 residual_norm(h.pPlus * h.pMinus, ComplexMatrix::Zero(9, 9)),
                                 residual_norm(h.pPlus * h.pPlus, h.pPlus), residual_norm(h.pMinus * h.pMinus, h.pMinus),
                                 residual_norm(h.rCheck, m.q * h.pPlus - h.pMinus / m.q)});
    auto r = CheckReport::residual_check("rmatrix.hecke", res, tol);
    return tag(r, m).with_extra("hecke_residual", h.heckeResidual);
}

inline CheckReport check_projector_ranks(const ModelParameters& m)
{
    const auto h = hecke_decomposition(cg_r_explicit(m), m.q, 1.0);
    auto r = CheckReport::verdict("rmatrix.projector_ranks", h.rankPlus == 6 && h.rankMinus == 3);
    return tag(r, m)
        .with_extra("rank_plus", static_cast<long long>(h.rankPlus))
        .with_extra("rank_minus", static_cast<long long>(h.rankMinus));
}

/// Spectrum of the braid form against {q x6, -1/q x3}.
inline CheckReport check_rcheck_spectrum(const ModelParameters& m, double tol = tolerance::rcheck_spectrum)
{
    const Spectrum s = eigenvalues(braid(cg_r_explicit(m)));
    Spectrum expected;
    expected.scale = s.scale;
    expected.eigenvalues.assign(6, Complex(m.q));
    expected.eigenvalues.insert(expected.eigenvalues.end(), 3, Complex(-1.0 / m.q));
    const auto match = spectra_match(s, expected, tol);
    auto r = CheckReport::residual_check("rmatrix.rcheck_spectrum", match.max_deviation / std::max(1.0, s.scale), tol);
    return tag(r, m).with_extra("max_deviation", match.max_deviation);
}

/// Spectra of P R_CG and P R(q) agree (similar matrices).
inline CheckReport check_braid_spectrum_equivalence(const ModelParameters& m, double tol = tolerance::rcheck_spectrum)
{
    const Spectrum a = eigenvalues(braid(cg_r_explicit(m)));
    const Spectrum b = eigenvalues(braid(standard_r(m.q, 3)));
    const auto match = spectra_match(a, b, tol);
    auto r = CheckReport::residual_check("rmatrix.braid_spectrum_equivalence",
                                         match.max_deviation / std::max(1.0, a.scale), tol);
    return tag(r, m);
}

/// (P R_CG)^dagger != P R_CG; the Frobenius defect must exceed the bound.
inline CheckReport check_non_hermiticity(const ModelParameters& m, double bound = tolerance::non_hermiticity)
{
    const ComplexMatrix rc = braid(cg_r_explicit(m));
    const double defect = (rc.adjoint() - rc).norm();
    auto r = CheckReport::verdict("rmatrix.non_hermiticity", defect > bound, bound);
    return tag(r, m).with_extra("hermiticity_defect", defect);
}

// ---------------------------------------------------------------------------
// q-antisymmetrizer and quantum determinant

/// Rank-1 idempotent on (C^3)^{(x)3} fused from the two-site antisymmetrizers.
///
/// With normalized projectors P- = (q - P R)/(q + 1/q) the fusion reads
/// P-_12 ((q + 1/q)^2 P-_23 - 1) P-_12; the result is rescaled to unit trace,
/// which makes a rank-1 matrix idempotent.
inline ComplexMatrix q_antisymmetrizer(const ModelParameters& m)
{
    const auto h = hecke_decomposition(cg_r_explicit(m), m.q);
    const double qsum = m.q + 1.0 / m.q;
    const ComplexMatrix id3 = identity(3);
    const ComplexMatrix p12 = kron(h.pMinus, id3);
    const ComplexMatrix p23 = kron(id3, h.pMinus);
    ComplexMatrix a = p12 * (qsum * qsum * p23 - identity(27)) * p12;
    const int rank = numerical_rank(a);
    if (rank != 1)
        throw Error("q_antisymmetrizer: image has rank " + std::to_string(rank) + ", expected 1");
    const Complex tr = a.trace();
    if (std::abs(tr) <= kDefaultTolerance * a.norm())
        throw Error("q_antisymmetrizer: vanishing trace, cannot normalize");
    return a / tr;
}

inline CheckReport check_q_antisymmetrizer(const ModelParameters& m, double tol = tolerance::antisymmetrizer)
{
    const ComplexMatrix a = q_antisymmetrizer(m);
    auto r = CheckReport::residual_check("rmatrix.q_antisymmetrizer", residual_norm(a * a, a), tol);
    return tag(r, m)
        .with_extra("rank", static_cast<long long>(numerical_rank(a)))
        .with_extra("trace", a.trace().real());
}

/// Quantum determinant of R(q, p, nu) in the R-block representation:
/// T_1 T_2 T_3 = R_14 R_24 R_34 compressed by the q-antisymmetrizer on slots
/// 1..3; the 3x3 factor left on the auxiliary slot 4 is returned.
inline ComplexMatrix qdet_of_r(const ModelParameters& m)
{
    const ComplexMatrix r = cg_r_explicit(m);
    const ComplexMatrix anti = q_antisymmetrizer(m);
    const ComplexMatrix t = embed_pair(r, 1, 4, 4, 3) * embed_pair(r, 2, 4, 4, 3) * embed_pair(r, 3, 4, 4, 3);
    const ComplexMatrix proj = kron(anti, identity(3));
    const ComplexMatrix compressed = proj * t * proj;

    // tr(anti) == 1, so a partial trace over slots 1..3 recovers the factor
    ComplexMatrix det = ComplexMatrix::Zero(3, 3);
    for (Eigen::Index a = 0; a < 27; ++a)
        det += compressed.block(a * 3, a * 3, 3, 3);

    if (residual_norm(compressed, kron(anti, det)) > kDefaultTolerance)
        throw Error("qdet_of_r: compression does not factor through the rank-1 antisymmetrizer");
    const ComplexMatrix off = det - ComplexMatrix(det.diagonal().asDiagonal());
    if (off.norm() > kDefaultTolerance * std::max(1.0, det.norm()))
        throw Error("qdet_of_r: extracted determinant is not diagonal");
    return det;
}

/// q diag(q/p^3, 1, p^3/q).
inline ComplexMatrix qdet_closed_form(const ModelParameters& m)
{
    const double p3 = m.p * m.p * m.p;
    return m.q * diagonal({m.q / p3, 1.0, p3 / m.q});
}

/// max |a_ij - b_ij| / max(1, max |b_ij|)
inline double max_entry_deviation(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("max_entry_deviation: dimension mismatch");
    return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

inline CheckReport check_qdet_closed_form(const ModelParameters& m, double tol = tolerance::qdet)
{
    const ComplexMatrix det = qdet_of_r(m);
    auto r = CheckReport::residual_check("rmatrix.qdet_closed_form", max_entry_deviation(det, qdet_closed_form(m)), tol);
    std::vector<Complex> d(det.diagonal().data(), det.diagonal().data() + 3);
    return tag(r, m).with_extra("qdet_diagonal", d);
}

/// Diagonal ratios (1, x, x^2) with x = q^2 (p/q)^3.
inline CheckReport check_qdet_ratios(const ModelParameters& m, double tol = tolerance::qdet)
{
    const ComplexMatrix det = qdet_of_r(m);
    const double x = m.q * m.q * std::pow(m.p / m.q, 3);
    double res = 0.0;
    const Complex d0 = det(0, 0);
    res = std::max(res, std::abs(det(1, 1) / d0 - x) / std::max(1.0, std::abs(x)));
    res = std::max(res, std::abs(det(2, 2) / d0 - x * x) / std::max(1.0, x * x));
    auto r = CheckReport::residual_check("rmatrix.qdet_ratios", res, tol);
    return tag(r, m);
}

/// (det T) T (det T)^{-1} = (det R)^{-1} T (det R) with T the R-block
/// representation: the matrix index lives on slot 1, the generator on slot 2.
inline CheckReport check_qdet_exchange(const ModelParameters& m, double tol = tolerance::qdet)
{
    const ComplexMatrix det = qdet_of_r(m);
    Eigen::FullPivLU<ComplexMatrix> lu(det);
    if (!lu.isInvertible())
        throw Error("check_qdet_exchange: quantum determinant is not invertible");
    const ComplexMatrix inv = lu.inverse();
    const ComplexMatrix t = cg_r_explicit(m);
    const ComplexMatrix id = identity(3);
    const ComplexMatrix lhs = kron(id, det) * t * kron(id, inv);
    const ComplexMatrix rhs = kron(inv, id) * t * kron(det, id);
    auto r = CheckReport::residual_check("rmatrix.qdet_exchange", residual_norm(lhs, rhs), tol);
    return tag(r, m);
}

// ---------------------------------------------------------------------------
// *-structure

/// Anti-diagonal C_ij = delta_{i, n+1-j}.
inline ComplexMatrix reversal_matrix(int n)
{
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (int i = 1; i <= n; ++i)
        entry(c, i, n + 1 - i) = 1.0;
    return c;
}

/// (C(x)C) P R P (C(x)C) = s R; reports the least-squares s and the fit residual.
inline CheckReport check_star_structure(const ModelParameters& m, double tol = tolerance::star)
{
    const ComplexMatrix r = cg_r_explicit(m);
    const ComplexMatrix cc = kron(reversal_matrix(3), reversal_matrix(3));
    const ComplexMatrix perm = permutation_operator(3);
    const ComplexMatrix lhs = cc * perm * r * perm * cc;
    const Complex s = (r.adjoint() * lhs).trace() / (r.adjoint() * r).trace();
    auto rep = CheckReport::residual_check("rmatrix.star_structure", residual_norm(lhs, s * r), tol);
    return tag(rep, m).with_extra("scalar_re", s.real()).with_extra("scalar_im", s.imag());
}

inline CheckReport check_star_scalar(const ModelParameters& m, double tol = tolerance::star_scalar)
{
    const auto base = check_star_structure(m);
    const Complex s(base.extra_number("scalar_re"), base.extra_number("scalar_im"));
    auto r = CheckReport::residual_check("rmatrix.star_scalar", std::abs(s - 1.0), tol);
    return tag(r, m);
}

// ---------------------------------------------------------------------------
// Baxterization

/// (u - 1/u) Rc + (omega/u) I for any Hecke braid matrix Rc with parameter q.
inline ComplexMatrix baxterize_braid(const ComplexMatrix& rCheck, double q, Complex u)
{
    if (u == Complex(0.0))
        throw Error("baxterize: spectral parameter must be nonzero");
    const double omega = q - 1.0 / q;
    return (u - 1.0 / u) * rCheck + (omega / u) * identity(rCheck.rows());
}

/// Spectral braid matrix Rc(u) of R(q, p, nu).
inline ComplexMatrix baxterize(const ModelParameters& m, Complex u)
{
    return baxterize_braid(braid(cg_r_explicit(m)), m.q, u);
}

/// u Rc - u^{-1} Rc^{-1}, with the inverse taken numerically.
inline ComplexMatrix baxterize_inverse_form(const ModelParameters& m, Complex u)
{
    if (u == Complex(0.0))
        throw Error("baxterize: spectral parameter must be nonzero");
    const ComplexMatrix rc = braid(cg_r_explicit(m));
    return u * rc - (1.0 / u) * rc.fullPivLu().inverse();
}

/// R(u) = P Rc(u).
inline ComplexMatrix spectral_r(const ModelParameters& m, Complex u) { return permutation_operator(3) * baxterize(m, u); }

inline CheckReport check_baxter_forms(const ModelParameters& m, Complex u, double tol = tolerance::baxter_forms)
{
    auto r = CheckReport::residual_check("rmatrix.baxter_forms",
                                         residual_norm(baxterize(m, u), baxterize_inverse_form(m, u)), tol);
    return tag(r, m).with_param("u_re", u.real()).with_param("u_im", u.imag());
}

/// Rc_12(u) Rc_23(uv) Rc_12(v) = Rc_23(v) Rc_12(uv) Rc_23(u).
inline CheckReport check_baxter_ybe(const ModelParameters& m, Complex u, Complex v, double tol = tolerance::baxter_ybe)
{
    const ComplexMatrix id = identity(3);
    auto b12 = [&](Complex x) { return kron(baxterize(m, x), id); };
    auto b23 = [&](Complex x) { return kron(id, baxterize(m, x)); };
    const double res = residual_norm(b12(u) * b23(u * v) * b12(v), b23(v) * b12(u * v) * b23(u));
    auto r = CheckReport::residual_check("rmatrix.baxter_ybe", res, tol);
    return tag(r, m)
        .with_param("u_re", u.real())
        .with_param("u_im", u.imag())
        .with_param("v_re", v.real())
        .with_param("v_im", v.imag());
}

} // namespace cgr
