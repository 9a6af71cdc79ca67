#include "cgr/rmatrix.hpp"
#include "cgr/sampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

using namespace cgr;

namespace {

// R12 R13 R23 - R23 R13 R12 with R13 obtained by conjugating R12 with the
// swap of slots 2 and 3; independent of the library's slot embedding.
double ybe_oracle(const ComplexMatrix& r)
{
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    const ComplexMatrix swap23 = kron(id, permutation_operator(3));
    const ComplexMatrix r12 = kron(r, id);
    const ComplexMatrix r23 = kron(id, r);
    const ComplexMatrix r13 = swap23 * r12 * swap23;
    const ComplexMatrix lhs = r12 * r13 * r23;
    const ComplexMatrix rhs = r23 * r13 * r12;
    return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

// Totally antisymmetric projector on (C^3)^{(x)3} built from permutations of
// tensor slots.
ComplexMatrix classical_antisymmetrizer()
{
    ComplexMatrix a = ComplexMatrix::Zero(27, 27);
    std::array<int, 3> perm{0, 1, 2};
    do {
        int inversions = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                inversions += perm[i] > perm[j];
        const double sign = inversions % 2 ? -1.0 : 1.0;
        for (int col = 0; col < 27; ++col) {
            const int in[3] = {col / 9, (col / 3) % 3, col % 3};
            int out[3];
            for (int s = 0; s < 3; ++s)
                out[perm[s]] = in[s];
            a(out[0] * 9 + out[1] * 3 + out[2], col) += sign / 6.0;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return a;
}

std::vector<Complex> sorted_spectrum(const ComplexMatrix& m) { return sorted(eigenvalues(m).eigenvalues); }

} // namespace

TEST(StandardR, ClassicalPointIsIdentity)
{
    EXPECT_EQ(residual_norm(standard_r(1.0, 3), identity(9)), 0.0);
}

TEST(StandardR, EntryLayout)
{
    const double q = 1.7;
    const ComplexMatrix r = standard_r(q, 3);
    EXPECT_EQ(entry(r, 1, 1), Complex(q));
    EXPECT_DOUBLE_EQ(entry(r, 2, 4).real(), q - 1.0 / q);
    EXPECT_EQ(entry(r, 4, 2), Complex(0.0));
}

TEST(StandardR, TwoByTwoReference)
{
    ComplexMatrix expected = diagonal({2.0, 1.0, 1.0, 2.0});
    expected(1, 2) = 1.5;
    EXPECT_EQ(residual_norm(standard_r(2.0, 2), expected), 0.0);
    EXPECT_THROW(standard_r(0.0, 3), Error);
    EXPECT_THROW(standard_r(1.0, 1), Error);
}

TEST(ModelParameters, RejectsDegenerateValues)
{
    EXPECT_THROW(ModelParameters(0.0, 1.0, 0.0), Error);
    EXPECT_THROW(ModelParameters(1.0, 0.0, 0.0), Error);
    EXPECT_THROW(ModelParameters(NAN, 1.0, 0.0), Error);
    EXPECT_DOUBLE_EQ(ModelParameters(2.0, 1.0, 0.0).omega(), 1.5);
}

TEST(Twist, ClassicalPointIsTrivial)
{
    const auto [f, f21] = twist_f({1.0, 1.0, 0.0});
    EXPECT_EQ(residual_norm(f, identity(9)), 0.0);
    EXPECT_EQ(residual_norm(f21, identity(9)), 0.0);
}

TEST(Twist, EntriesAndFlip)
{
    const ModelParameters m{1.3, 0.7, 0.4};
    const auto [f, f21] = twist_f(m);
    EXPECT_DOUBLE_EQ(entry(f, 3, 3).real(), 1.3 / 0.7);
    EXPECT_DOUBLE_EQ(entry(f, 3, 5).real(), 0.7 * 0.4);
    const ComplexMatrix p = permutation_operator(3);
    EXPECT_EQ(residual_norm(f21, p * f * p), 0.0);
}

TEST(CremmerGervaisR, ClassicalPointIsIdentity)
{
    EXPECT_EQ(residual_norm(cg_r_explicit({1.0, 1.0, 0.0}), identity(9)), 0.0);
    EXPECT_EQ(residual_norm(cg_r_twisted({1.0, 1.0, 0.0}), identity(9)), 0.0);
}

TEST(CremmerGervaisR, EntryLayout)
{
    const double q = 1.3, p = 0.8, nu = 0.5;
    const ComplexMatrix r = cg_r_explicit({q, p, nu});
    EXPECT_DOUBLE_EQ(entry(r, 3, 3).real(), p * p / q);
    EXPECT_DOUBLE_EQ(entry(r, 7, 7).real(), q / (p * p));
    EXPECT_DOUBLE_EQ(entry(r, 2, 2).real(), p);
    EXPECT_DOUBLE_EQ(entry(r, 4, 4).real(), 1.0 / p);
    // e32 (x) e12 sends e2 (x) e2 (index 5) to e3 (x) e1 (index 7); e12 (x) e32 sends it to e1 (x) e3 (index 3)
    EXPECT_DOUBLE_EQ(entry(r, 7, 5).real(), q * nu);
    EXPECT_DOUBLE_EQ(entry(r, 3, 5).real(), -nu * p * p / q);
    EXPECT_EQ(entry(r, 8, 2), Complex(0.0));
    EXPECT_EQ(entry(r, 2, 8), Complex(0.0));
    EXPECT_DOUBLE_EQ(entry(r, 2, 4).real(), q - 1.0 / q);
}

TEST(CremmerGervaisR, TwistedConstructionMatchesExplicit)
{
    const ModelParameters m{1.2, 0.8, 0.5};
    EXPECT_LE(residual_norm(cg_r_twisted(m), cg_r_explicit(m)), 1e-12);
    EXPECT_TRUE(check_twist_identity(m).pass);
}

TEST(CremmerGervaisR, PureTwistAtClassicalQSolvesYbe)
{
    const ModelParameters m{1.0, 1.7, 0.3};
    EXPECT_LE(ybe_oracle(cg_r_twisted(m)), 1e-12);
    EXPECT_LE(check_ybe(cg_r_twisted(m), 3).residual, 1e-12);
}

TEST(Ybe, KnownSolutions)
{
    EXPECT_EQ(check_ybe(identity(9), 3).residual, 0.0);
    EXPECT_LE(check_ybe(standard_r(1.5, 3), 3).residual, 1e-12);
    EXPECT_LE(check_ybe(cg_r_explicit({1.3, 0.7, 0.9}), 3).residual, 1e-12);
}

TEST(Ybe, AgreesWithOracleAndDetectsPerturbation)
{
    ComplexMatrix r = cg_r_explicit({1.3, 0.8, 0.5});
    EXPECT_NEAR(check_ybe(r, 3).residual, ybe_oracle(r), 1e-14);
    r(0, 0) += 1e-3;
    const auto rep = check_ybe(r, 3);
    EXPECT_FALSE(rep.pass);
    EXPECT_GT(rep.residual, 1e-5);
    EXPECT_THROW(check_ybe(identity(4), 3), Error);
}

TEST(Hecke, DecompositionRanks)
{
    const ModelParameters m{1.4, 1.1, 0.6};
    const auto h = hecke_decomposition(cg_r_explicit(m), m.q);
    EXPECT_LE(h.heckeResidual, 1e-12);
    EXPECT_EQ(h.rankPlus, 6);
    EXPECT_EQ(h.rankMinus, 3);
}

TEST(Hecke, ClassicalSymmetrizers)
{
    const auto h = hecke_decomposition(identity(9), 1.0);
    const ComplexMatrix p = permutation_operator(3);
    EXPECT_EQ(residual_norm(h.rCheck, p), 0.0);
    EXPECT_EQ(residual_norm(h.pPlus, (identity(9) + p) / 2.0), 0.0);
    EXPECT_EQ(residual_norm(h.pMinus, (identity(9) - p) / 2.0), 0.0);
    EXPECT_EQ(h.rankPlus, 6);
    EXPECT_EQ(h.rankMinus, 3);
}

TEST(Hecke, RejectsNonHeckeInput)
{
    Rng rng(2);
    EXPECT_THROW(hecke_decomposition(rng.matrix(9), 1.3), Error);
}

TEST(Hecke, BraidSpectrumReference)
{
    const auto v = sorted_spectrum(braid(cg_r_explicit({2.0, 0.9, 0.4})));
    ASSERT_EQ(v.size(), 9u);
    for (int i = 0; i < 3; ++i)
        EXPECT_LT(std::abs(v[i] - Complex(-0.5)), 1e-9);
    for (int i = 3; i < 9; ++i)
        EXPECT_LT(std::abs(v[i] - Complex(2.0)), 1e-9);

    const auto w = sorted_spectrum(braid(cg_r_explicit({1.5, 1.1, 0.3})));
    for (int i = 0; i < 3; ++i)
        EXPECT_LT(std::abs(w[i] - Complex(-2.0 / 3.0)), 1e-9);
    for (int i = 3; i < 9; ++i)
        EXPECT_LT(std::abs(w[i] - Complex(1.5)), 1e-9);
}

TEST(Hecke, BraidFormsAreSimilarButNotEqual)
{
    const ModelParameters m{1.3, 0.8, 0.5};
    EXPECT_TRUE(check_braid_similarity(m).pass);
    EXPECT_TRUE(check_braid_spectrum_equivalence(m).pass);
    EXPECT_GT(residual_norm(braid(cg_r_explicit(m)), braid(standard_r(m.q, 3))), 1e-3);
}

TEST(Hecke, NonHermitianForNonzeroNu)
{
    const auto rep = check_non_hermiticity({1.3, 0.8, 0.5});
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.extra_number("hermiticity_defect"), 1e-6);
    EXPECT_FALSE(check_non_hermiticity({1.0, 1.0, 0.0}).pass);
}

TEST(Antisymmetrizer, ClassicalLimit)
{
    const ComplexMatrix a = q_antisymmetrizer({1.0, 1.0, 0.0});
    EXPECT_LE(residual_norm(a, classical_antisymmetrizer()), 1e-14);
    EXPECT_EQ(numerical_rank(a), 1);
    EXPECT_NEAR(a.trace().real(), 1.0, 1e-14);
}

TEST(Antisymmetrizer, RankOneIdempotent)
{
    for (const ModelParameters m : {ModelParameters{1.3, 1.0, 0.0}, ModelParameters{1.3, 0.8, 0.5}}) {
        const ComplexMatrix a = q_antisymmetrizer(m);
        EXPECT_EQ(numerical_rank(a), 1);
        EXPECT_LE(residual_norm(a * a, a), 1e-10);
        EXPECT_TRUE(check_q_antisymmetrizer(m).pass);
    }
}

TEST(Antisymmetrizer, AbsorbsBothTwoSiteAntisymmetrizers)
{
    const ModelParameters m{1.3, 0.8, 0.5};
    const ComplexMatrix a = q_antisymmetrizer(m);
    const ComplexMatrix rc = braid(cg_r_explicit(m));
    const ComplexMatrix id3 = identity(3);
    // on the image, each braid generator acts as -1/q
    EXPECT_LE(residual_norm(kron(rc, id3) * a, -a / m.q), 1e-12);
    EXPECT_LE(residual_norm(kron(id3, rc) * a, -a / m.q), 1e-12);
}

TEST(QuantumDeterminant, ClassicalPoint)
{
    EXPECT_LE(max_entry_deviation(qdet_of_r({1.0, 1.0, 0.0}), identity(3)), 1e-12);
}

TEST(QuantumDeterminant, ReferenceValue)
{
    const double c = 1.1 * 1.1 * 1.1;
    const ComplexMatrix expected = 2.0 * diagonal({2.0 / c, 1.0, c / 2.0});
    EXPECT_LE(max_entry_deviation(qdet_of_r({2.0, 1.1, 0.7}), expected), 1e-10);
}

TEST(QuantumDeterminant, CentralWhenPCubedEqualsQ)
{
    const double q = 1.5;
    const ModelParameters m{q, std::cbrt(q), 0.4};
    EXPECT_LE(max_entry_deviation(qdet_of_r(m), q * identity(3)), 1e-10);
    EXPECT_LE(check_qdet_exchange(m).residual, 1e-10);
}

TEST(QuantumDeterminant, ExchangeAndRatios)
{
    EXPECT_EQ(check_qdet_exchange({1.0, 1.0, 0.0}).residual, 0.0);
    EXPECT_LE(check_qdet_exchange({1.3, 0.9, 0.5}).residual, 1e-10);
    EXPECT_TRUE(check_qdet_ratios({1.3, 0.9, 0.5}).pass);
}

TEST(QuantumDeterminant, ExchangeFailsForWrongDiagonal)
{
    // a non-central diagonal that is not the determinant breaks the exchange identity
    const ModelParameters m{1.3, 0.9, 0.5};
    const ComplexMatrix t = cg_r_explicit(m);
    const ComplexMatrix d = diagonal({1.0, 2.0, 5.0});
    const ComplexMatrix di = d.inverse();
    const ComplexMatrix id = identity(3);
    EXPECT_GT(residual_norm(kron(id, d) * t * kron(id, di), kron(di, id) * t * kron(d, id)), 1e-3);
}

TEST(StarStructure, UnitScalar)
{
    for (const ModelParameters m : {ModelParameters{1.0, 1.0, 0.0}, ModelParameters{1.4, 1.0, 0.0},
                                    ModelParameters{1.4, 0.8, 0.6}}) {
        const auto rep = check_star_structure(m);
        EXPECT_LE(rep.residual, 1e-12);
        EXPECT_NEAR(rep.extra_number("scalar_re"), 1.0, 1e-10);
        EXPECT_NEAR(rep.extra_number("scalar_im"), 0.0, 1e-10);
        EXPECT_TRUE(check_star_scalar(m).pass);
    }
}

TEST(StarStructure, ReversalMatrix)
{
    const ComplexMatrix c = reversal_matrix(3);
    EXPECT_EQ(entry(c, 1, 3), Complex(1.0));
    EXPECT_EQ(entry(c, 3, 1), Complex(1.0));
    EXPECT_EQ(residual_norm(c * c, identity(3)), 0.0);
}

TEST(Baxterization, RegularAndAntiRegularPoints)
{
    const ModelParameters m{1.3, 0.8, 0.5};
    EXPECT_EQ(residual_norm(baxterize(m, 1.0), m.omega() * identity(9)), 0.0);
    EXPECT_EQ(residual_norm(baxterize(m, -1.0), -m.omega() * identity(9)), 0.0);
    EXPECT_EQ(residual_norm(spectral_r(m, 1.0), m.omega() * permutation_operator(3)), 0.0);
    EXPECT_THROW(baxterize(m, 0.0), Error);
}

TEST(Baxterization, SpectralBraidRelation)
{
    const ModelParameters m{1.3, 0.8, 0.5};
    EXPECT_LE(check_baxter_ybe(m, 0.7, 1.9).residual, 1e-11);
    EXPECT_LE(check_baxter_forms(m, Complex(0.7, 0.2)).residual, 1e-12);
}

TEST(Baxterization, SpectralYbeInRMatrixForm)
{
    // R12(u/v) R13(u) R23(v) = R23(v) R13(u) R12(u/v) for R(u) = P Rc(u)
    const ModelParameters m{1.25, 0.9, -0.4};
    const Complex u(1.3, 0.2), v(0.8, -0.1);
    const ComplexMatrix id = identity(3);
    const ComplexMatrix swap23 = kron(id, permutation_operator(3));
    auto r12 = [&](Complex x) { return ComplexMatrix(kron(spectral_r(m, x), id)); };
    auto r23 = [&](Complex x) { return ComplexMatrix(kron(id, spectral_r(m, x))); };
    auto r13 = [&](Complex x) { return ComplexMatrix(swap23 * r12(x) * swap23); };
    const ComplexMatrix lhs = r12(u / v) * r13(u) * r23(v);
    const ComplexMatrix rhs = r23(v) * r13(u) * r12(u / v);
    EXPECT_LE(residual_norm(lhs, rhs), 1e-11);
}

class RMatrixGrid : public ::testing::TestWithParam<int> {};

TEST_P(RMatrixGrid, StandingIdentities)
{
    const auto grid = random_grid(static_cast<std::uint64_t>(GetParam()), 25);
    Rng rng(static_cast<std::uint64_t>(GetParam()) + 100);
    for (const auto& m : grid) {
        SCOPED_TRACE(::testing::Message() << "q=" << m.q << " p=" << m.p << " nu=" << m.nu);
        EXPECT_TRUE(check_twist_identity(m).pass);
        EXPECT_LE(ybe_oracle(cg_r_explicit(m)), 1e-11);
        EXPECT_TRUE(check_hecke(m).pass);
        EXPECT_TRUE(check_projector_ranks(m).pass);
        EXPECT_TRUE(check_rcheck_spectrum(m).pass);
        EXPECT_TRUE(check_q_antisymmetrizer(m).pass);
        EXPECT_TRUE(check_qdet_closed_form(m).pass);
        EXPECT_TRUE(check_qdet_exchange(m).pass);
        EXPECT_TRUE(check_star_scalar(m).pass);
        const Complex u = rng.spectral_parameter(), v = rng.spectral_parameter();
        EXPECT_TRUE(check_baxter_ybe(m, u, v).pass);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RMatrixGrid, ::testing::Values(1, 2, 3));
