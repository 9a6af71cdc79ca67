#pragma once

// Dense complex linear algebra shared by every other part of the toolkit.
//
// Index convention: a basis vector e_i (x) e_k of C^n (x) C^n sits at the
// composite position n*(i-1) + k. All public indices are 1-based; the
// 0-based Eigen storage never leaks out of the helpers below.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cgr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Raised for violated preconditions and failed numerical procedures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kEigenTolerance = 1e-8;
inline constexpr std::size_t kDefaultDimensionCap = 6561; // 3^8
inline constexpr unsigned long long kDefaultSeed = 1997;

enum class Boundary { open, periodic };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

// ---------------------------------------------------------------------------
// Index helpers

/// Composite 1-based index of e_i (x) e_k for local dimension n.
inline int flatten(int n, int i, int k) { return n * (i - 1) + k; }

/// Inverse of flatten: composite 1-based index -> (i, k).
inline std::pair<int, int> unflatten(int n, int a) { return {(a - 1) / n + 1, (a - 1) % n + 1}; }

/// 1-based entry access.
inline Complex entry(const ComplexMatrix& m, int row, int col) { return m(row - 1, col - 1); }

inline Complex& entry(ComplexMatrix& m, int row, int col) { return m(row - 1, col - 1); }

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// Matrix unit e_{ij} on C^n (1-based).
inline ComplexMatrix unit(int n, int i, int j)
{
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(i - 1, j - 1) = 1.0;
    return e;
}

inline ComplexMatrix diagonal(const std::vector<Complex>& d)
{
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return m;
}

inline bool is_finite(const ComplexMatrix& m)
{
    return m.allFinite();
}

inline void require_square(const ComplexMatrix& m, const char* what)
{
    if (m.rows() != m.cols())
        throw Error(std::string(what) + ": matrix is not square");
}

inline void require_finite(const ComplexMatrix& m, const char* what)
{
    if (!is_finite(m))
        throw Error(std::string(what) + ": matrix has non-finite entries");
}

/// Integer power with overflow guard against the dimension cap.
inline std::size_t checked_power(std::size_t base, int exponent, std::size_t cap)
{
    std::size_t result = 1;
    for (int i = 0; i < exponent; ++i) {
        if (result > cap / base)
            throw Error("dimension " + std::to_string(base) + "^" + std::to_string(exponent) +
                        " exceeds cap " + std::to_string(cap));
        result *= base;
    }
    if (result > cap)
        throw Error("dimension exceeds cap " + std::to_string(cap));
    return result;
}

// ---------------------------------------------------------------------------
// Tensor products and permutations

/// Kronecker product, row-major in the first factor.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_square(a, "kron");
    require_square(b, "kron");
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.rows();
    ComplexMatrix out(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.block(i * m, j * m, m, m) = a(i, j) * b;
    return out;
}

/// Swap operator on C^n (x) C^n: e_i (x) e_k -> e_k (x) e_i.
inline ComplexMatrix permutation_operator(int n)
{
    if (n < 1)
        throw Error("permutation_operator: n must be positive");
    ComplexMatrix p = ComplexMatrix::Zero(n * n, n * n);
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k)
            entry(p, flatten(n, k, i), flatten(n, i, k)) = 1.0;
    return p;
}

/// Cyclic site shift on (C^d)^{(x)L}: the content of site n moves to site n+1,
/// and site L wraps to site 1.
inline ComplexMatrix cyclic_shift(int length, int localDim, std::size_t cap = kDefaultDimensionCap)
{
    const auto dim = static_cast<Eigen::Index>(checked_power(static_cast<std::size_t>(localDim), length, cap));
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    // Site 1 is the most significant digit. Moving every site one step right
    // means the last digit becomes the first one.
    const Eigen::Index top = dim / localDim;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const Eigen::Index last = idx % localDim;
        const Eigen::Index rest = idx / localDim;
        s(last * top + rest, idx) = 1.0;
    }
    return s;
}

/// Places a two-site operator on arbitrary (1-based, distinct) slots of a
/// `sites`-fold tensor power; `first` receives the first tensor factor of h.
inline ComplexMatrix embed_pair(const ComplexMatrix& h, int first, int second, int sites, int localDim,
                                std::size_t cap = kDefaultDimensionCap)
{
    const Eigen::Index d = localDim;
    if (h.rows() != d * d || h.cols() != d * d)
        throw Error("embed_pair: operator dimension must be localDim^2");
    if (first < 1 || first > sites || second < 1 || second > sites || first == second)
        throw Error("embed_pair: slot out of range");
    const auto dim = static_cast<Eigen::Index>(checked_power(static_cast<std::size_t>(localDim), sites, cap));

    // stride of slot s (1-based, slot 1 most significant)
    auto stride = [&](int slot) {
        Eigen::Index st = 1;
        for (int s = slot; s < sites; ++s)
            st *= d;
        return st;
    };
    const Eigen::Index sa = stride(first);
    const Eigen::Index sb = stride(second);

    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Eigen::Index a = (col / sa) % d;
        const Eigen::Index b = (col / sb) % d;
        const Eigen::Index base = col - a * sa - b * sb;
        for (Eigen::Index ra = 0; ra < d; ++ra)
            for (Eigen::Index rb = 0; rb < d; ++rb) {
                const Complex v = h(ra * d + rb, a * d + b);
                if (v != Complex(0.0))
                    out(base + ra * sa + rb * sb, col) += v;
            }
    }
    return out;
}

/// I^{(x)(site-1)} (x) h (x) I^{(x)(length-site-1)}; with a periodic boundary
/// and site == length, the wrap term on sites (length, 1), obtained by
/// conjugating the (length-1, length) term with the cyclic shift.
inline ComplexMatrix embed_two_site(const ComplexMatrix& h, int site, int length, int localDim, Boundary boundary,
                                    std::size_t cap = kDefaultDimensionCap)
{
    if (h.rows() != static_cast<Eigen::Index>(localDim) * localDim || h.cols() != h.rows())
        throw Error("embed_two_site: h must be localDim^2 square");
    if (length < 2)
        throw Error("embed_two_site: length must be at least 2");
    const bool wrap = boundary == Boundary::periodic && site == length;
    if (site < 1 || (site > length - 1 && !wrap))
        throw Error("embed_two_site: site " + std::to_string(site) + " out of range");
    const auto dim = checked_power(static_cast<std::size_t>(localDim), length, cap);

    if (wrap) {
        const ComplexMatrix s = cyclic_shift(length, localDim, cap);
        return s * embed_two_site(h, length - 1, length, localDim, Boundary::open, cap) * s.adjoint();
    }
    const auto left = static_cast<Eigen::Index>(checked_power(static_cast<std::size_t>(localDim), site - 1, cap));
    const auto right = static_cast<Eigen::Index>(dim) / (left * h.rows());
    ComplexMatrix out = kron(identity(left), h);
    return right == 1 ? out : kron(out, identity(right));
}

// ---------------------------------------------------------------------------
// Norms and residuals

/// ||a - b||_F / max(1, ||a||_F, ||b||_F).
inline double residual_norm(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("residual_norm: dimension mismatch");
    const double scale = std::max({1.0, a.norm(), b.norm()});
    return (a - b).norm() / scale;
}

/// Relative residual restricted to the leading `cols` columns (a subspace of
/// the domain spanned by the first basis vectors).
inline double restricted_residual(const ComplexMatrix& a, const ComplexMatrix& b, Eigen::Index cols)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("restricted_residual: dimension mismatch");
    if (cols <= 0)
        return 0.0;
    const auto la = a.leftCols(cols);
    const auto lb = b.leftCols(cols);
    const double scale = std::max({1.0, la.norm(), lb.norm()});
    return (la - lb).norm() / scale;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

/// Number of singular values above rel_tol * sigma_max.
inline int numerical_rank(const ComplexMatrix& m, double rel_tol = kEigenTolerance)
{
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    const double cut = rel_tol * s(0);
    return static_cast<int>((s.array() > cut).count());
}

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum {
    std::vector<Complex> eigenvalues;
    double scale = 0.0; ///< Frobenius norm of the source matrix

    std::size_t size() const { return eigenvalues.size(); }
};

inline bool lex_less(const Complex& a, const Complex& b)
{
    if (a.real() != b.real())
        return a.real() < b.real();
    return a.imag() < b.imag();
}

inline std::vector<Complex> sorted(std::vector<Complex> v)
{
    std::sort(v.begin(), v.end(), lex_less);
    return v;
}

/// All eigenvalues of a general (non-normal) complex matrix.
inline Spectrum eigenvalues(const ComplexMatrix& m)
{
    require_square(m, "eigenvalues");
    require_finite(m, "eigenvalues");
    Spectrum out;
    out.scale = m.norm();
    if (m.rows() == 0)
        return out;
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw Error("eigenvalues: eigen-decomposition did not converge");
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    return out;
}

struct SpectrumMatch {
    bool pass = false;
    double max_deviation = 0.0;
};

/// Multiset comparison by sort-and-pair on (re, im). Eigenvalues closer than
/// tol to each other may be mispaired, which cannot flip the verdict.
inline SpectrumMatch spectra_match(const Spectrum& s1, const Spectrum& s2, double tol)
{
    if (s1.size() != s2.size())
        throw Error("spectra_match: cardinality mismatch");
    const auto a = sorted(s1.eigenvalues);
    const auto b = sorted(s2.eigenvalues);
    SpectrumMatch out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.max_deviation = std::max(out.max_deviation, std::abs(a[i] - b[i]));
    out.pass = out.max_deviation <= tol * std::max(1.0, s1.scale);
    return out;
}

} // namespace cgr
