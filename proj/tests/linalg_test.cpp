#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oplab/errors.hpp"
#include "oplab/linalg/decompositions.hpp"
#include "oplab/linalg/random.hpp"
#include "oplab/linalg/spectral.hpp"

using namespace oplab;

namespace {

double unitary_defect(const ComplexMatrix& q) {
    return max_abs_diff(q.adjoint() * q, ComplexMatrix::identity(q.dim()));
}

bool is_upper_triangular(const ComplexMatrix& t) {
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (t(i, j) != Complex{}) return false;
    return true;
}

ComplexMatrix rotation(double theta) {
    return {{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

const double kSqrt6 = 2.449489742783178;

} // namespace

TEST(Schur, IdentityHasUnitEigenvalues) {
    const SchurForm s = schur_decompose(ComplexMatrix::identity(3));
    ASSERT_EQ(s.eigenvalues.size(), 3u);
    for (const auto& z : s.eigenvalues) EXPECT_NEAR(std::abs(z - 1.0), 0.0, 1e-14);
}

TEST(Schur, DiagonalSortedByModulus) {
    const SchurForm s = schur_decompose({{0.5, 0.0}, {0.0, 2.0}});
    EXPECT_NEAR(std::abs(s.eigenvalues[0] - 2.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.eigenvalues[1] - 0.5), 0.0, 1e-14);
}

TEST(Schur, AntiDiagonalTwoByTwo) {
    const ComplexMatrix a{{0.0, 2.0}, {3.0, 0.0}};
    const SchurForm s = schur_decompose(a);
    // equal moduli: argument ascending puts +sqrt6 (arg 0) before -sqrt6 (arg pi)
    EXPECT_NEAR(std::abs(s.eigenvalues[0] - kSqrt6), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.eigenvalues[1] + kSqrt6), 0.0, 1e-12);
}

TEST(Schur, InvariantsOnRandomMatrices) {
    Rng rng(11);
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        for (int trial = 0; trial < 100; ++trial) {
            const ComplexMatrix a = random_gaussian(n, rng);
            const SchurForm s = schur_decompose(a);
            EXPECT_TRUE(is_upper_triangular(s.upperT));
            EXPECT_LE(frobenius_norm(s.unitaryQ * s.upperT * s.unitaryQ.adjoint() - a),
                      1e-10 * frobenius_norm(a));
            EXPECT_LE(unitary_defect(s.unitaryQ), 1e-10);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_EQ(s.eigenvalues[i], s.upperT(i, i));
                if (i + 1 < n) EXPECT_FALSE(eigenvalue_order(s.eigenvalues[i + 1], s.eigenvalues[i]));
            }
        }
    }
}

TEST(Schur, RejectsNonFinite) {
    ComplexMatrix a(2);
    a(0, 1) = std::nan("");
    EXPECT_THROW(schur_decompose(a), InvalidArgument);
}

TEST(Schur, TightBudgetReportsNonConvergence) {
    Rng rng(5);
    const ComplexMatrix a = random_gaussian(12, rng);
    EXPECT_THROW(schur_decompose(a, kReconstructionTol, SchurOptions{0}), NonConvergence);
}

TEST(Svd, IdentityAndPermutedDiagonal) {
    const SvdResult id = svd(ComplexMatrix::identity(4));
    for (double s : id.sigma) EXPECT_NEAR(s, 1.0, 1e-14);
    const SvdResult r = svd({{0.0, 2.0}, {3.0, 0.0}});
    EXPECT_NEAR(r.sigma[0], 3.0, 1e-14);
    EXPECT_NEAR(r.sigma[1], 2.0, 1e-14);
}

TEST(Svd, SigmaMatchesEigenvaluesOfGram) {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_gaussian(5, rng);
        const SvdResult r = svd(a);
        const CVector ev = schur_decompose(a.adjoint() * a).eigenvalues;
        for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.sigma[i], std::sqrt(ev[i].real()), 1e-8);
    }
}

TEST(Svd, ReconstructionOnRandomMatrices) {
    Rng rng(12);
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        for (int trial = 0; trial < 100; ++trial) {
            const ComplexMatrix a = random_gaussian(n, rng);
            const SvdResult r = svd(a);
            ComplexMatrix us = r.u;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) us(i, k) *= r.sigma[k];
            EXPECT_LE(frobenius_norm(us * r.v.adjoint() - a), 1e-10 * frobenius_norm(a));
            EXPECT_LE(unitary_defect(r.u), 1e-10);
            EXPECT_LE(unitary_defect(r.v), 1e-10);
            for (std::size_t i = 0; i + 1 < n; ++i) EXPECT_GE(r.sigma[i], r.sigma[i + 1]);
        }
    }
}

TEST(Svd, RankDeficientStillUnitary) {
    const SvdResult r = svd({{1.0, 1.0}, {1.0, 1.0}});
    EXPECT_NEAR(r.sigma[0], 2.0, 1e-14);
    EXPECT_NEAR(r.sigma[1], 0.0, 1e-14);
    EXPECT_LE(unitary_defect(r.u), 1e-12);
}

TEST(Polar, IdentityAndAntiDiagonal) {
    const PolarFactors id = polar_decompose(ComplexMatrix::identity(3));
    EXPECT_LE(max_abs_diff(id.isometry, ComplexMatrix::identity(3)), 1e-14);
    EXPECT_LE(max_abs_diff(id.modulus, ComplexMatrix::identity(3)), 1e-14);

    const PolarFactors f = polar_decompose({{0.0, 2.0}, {3.0, 0.0}});
    EXPECT_LE(max_abs_diff(f.modulus, ComplexMatrix{{3.0, 0.0}, {0.0, 2.0}}), 1e-14);
    EXPECT_LE(max_abs_diff(f.isometry, ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}), 1e-14);
}

TEST(Polar, TruncatedConstantShift) {
    // compression of the shift with weights 2 to 16 coordinates: A*A = diag(4,...,4,0)
    // is singular, so use the cyclic closure, whose modulus is exactly 2I
    const std::size_t n = 16;
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) a((i + 1) % n, i) = 2.0;
    const PolarFactors f = polar_decompose(a);
    ComplexMatrix twoI = ComplexMatrix::identity(n);
    twoI *= 2.0;
    EXPECT_LE(max_abs_diff(f.modulus, twoI), 1e-12);
    ComplexMatrix pattern = a;
    pattern *= 0.5;
    EXPECT_LE(max_abs_diff(f.isometry, pattern), 1e-12);
}

TEST(Polar, RefusesSingular) {
    EXPECT_THROW(polar_decompose({{1.0, 1.0}, {1.0, 1.0}}), SingularInput);
    ComplexMatrix open(4);
    for (std::size_t i = 0; i + 1 < 4; ++i) open(i + 1, i) = 2.0;
    EXPECT_THROW(polar_decompose(open), SingularInput);
}

TEST(Polar, InvariantsOnRandomMatrices) {
    Rng rng(13);
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        for (int trial = 0; trial < 100; ++trial) {
            const ComplexMatrix a = random_invertible(n, rng);
            const PolarFactors f = polar_decompose(a);
            EXPECT_LE(frobenius_norm(f.isometry * f.modulus - a), 1e-10 * frobenius_norm(a));
            EXPECT_LE(max_abs_diff(f.modulus, f.modulus.adjoint()), 1e-12);
            EXPECT_GE(hermitian_eigen(f.modulus).values.front(), -1e-10);
            EXPECT_LE(unitary_defect(f.isometry), 1e-10);
        }
    }
}

TEST(PsdPower, Examples) {
    EXPECT_LE(max_abs_diff(psd_power({{4.0, 0.0}, {0.0, 9.0}}, 0.5), ComplexMatrix{{2.0, 0.0}, {0.0, 3.0}}),
              1e-14);
    for (double e : {0.1, 0.5, 1.0})
        EXPECT_LE(max_abs_diff(psd_power(ComplexMatrix::identity(3), e), ComplexMatrix::identity(3)), 1e-14);
    const ComplexMatrix q = psd_power({{2.0, 0.0}, {0.0, 0.5}}, 1.0 / 3.0);
    EXPECT_NEAR(q(0, 0).real(), std::cbrt(2.0), 1e-14);
    EXPECT_NEAR(q(1, 1).real(), 1.0 / std::cbrt(2.0), 1e-14);
}

TEST(PsdPower, Composition) {
    Rng rng(14);
    const double grid[] = {0.25, 1.0 / 3.0, 0.5};
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix g = random_gaussian(6, rng);
        const ComplexMatrix p = g.adjoint() * g;
        EXPECT_LE(max_abs_diff(psd_power(p, 1.0), p), 1e-10);
        for (double a : grid)
            for (double b : grid)
                EXPECT_LE(max_abs_diff(psd_power(psd_power(p, a), b), psd_power(p, a * b)), 1e-8);
    }
}

TEST(PsdPower, RejectsIndefiniteAndBadExponent) {
    EXPECT_THROW(psd_power({{1.0, 0.0}, {0.0, -1.0}}, 0.5), NotPSD);
    EXPECT_THROW(psd_power(ComplexMatrix::identity(2), 0.0), InvalidArgument);
    EXPECT_THROW(psd_power(ComplexMatrix::identity(2), 1.5), InvalidArgument);
}

TEST(OperatorNorm, Examples) {
    EXPECT_NEAR(operator_norm(ComplexMatrix::identity(5)), 1.0, 1e-14);
    EXPECT_NEAR(operator_norm({{0.0, 2.0}, {3.0, 0.0}}), 3.0, 1e-14);
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_gaussian(8, rng);
        EXPECT_NEAR(operator_norm(a), svd(a).sigma[0], 1e-8);
    }
}

TEST(Gelfand, Examples) {
    for (int d : {0, 1, 5, 30}) EXPECT_NEAR(gelfand_radius({{0.5, 0.0}, {0.0, 2.0}}, d), 2.0, 1e-12);
    EXPECT_NEAR(gelfand_radius({{1.0, 1.0}, {0.0, 1.0}}, 20), 1.0, 0.02);
    EXPECT_EQ(gelfand_radius({{0.0, 1.0}, {0.0, 0.0}}, 1), 0.0);
    EXPECT_THROW(gelfand_radius(ComplexMatrix::identity(2), 31), InvalidArgument);
}

TEST(Gelfand, NoOverflowForExpansiveMatrix) {
    const double r = gelfand_radius({{100.0, 1.0}, {0.0, 50.0}}, 30);
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_NEAR(r, 100.0, 1e-6);
}

TEST(Gelfand, AgreesWithSpectralRadiusWhenGapped) {
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        CVector spec(n);
        for (std::size_t i = 0; i < n; ++i) spec[i] = std::polar(0.2 + 0.15 * i, rng.uniform(0.0, 6.0));
        const ComplexMatrix a = random_similar_to_diagonal(spec, rng);
        const double rho = spectral_radius(a);
        EXPECT_NEAR(gelfand_radius(a, 20) / rho, 1.0, 0.02);
    }
}

TEST(Spectra, SimilarityInvariance) {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const ComplexMatrix a = random_gaussian(n, rng);
        const ComplexMatrix h = random_well_conditioned(n, rng);
        const CVector e1 = eigenvalues(a);
        const CVector e2 = eigenvalues(h * a * inverse(h));
        EXPECT_LT(hausdorff_distance(e1, e2), 1e-6);
    }
}

TEST(Spectra, HausdorffBasics) {
    const CVector a{1.0, 2.0};
    const CVector b{1.0, 2.5};
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 0.5);
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, a), 0.0);
}

TEST(SpectralSplit, Diagonal) {
    const SpectralSplit s = spectral_split({{0.5, 0.0}, {0.0, 2.0}});
    EXPECT_LE(max_abs_diff(s.stableProjection, ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}), 1e-14);
    EXPECT_LE(max_abs_diff(s.unstableProjection, ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}), 1e-14);
    EXPECT_DOUBLE_EQ(s.stableRate, 0.5);
    EXPECT_DOUBLE_EQ(s.unstableRate, 2.0);
    EXPECT_NEAR(s.boundConstant, 1.0, 1e-12);
}

TEST(SpectralSplit, RotationIsNotHyperbolic) {
    EXPECT_THROW(spectral_split(rotation(std::numbers::pi / 4)), NotHyperbolic);
    EXPECT_FALSE(is_hyperbolic(rotation(std::numbers::pi / 4)));
}

TEST(SpectralSplit, RandomSimilarityOfDiagonal) {
    Rng rng(18);
    const CVector d{0.3, 0.5, 2.0, 4.0};
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix h = random_well_conditioned(4, rng);
        const ComplexMatrix hinv = inverse(h);
        const ComplexMatrix a = h * ComplexMatrix::diagonal(d) * hinv;
        const SpectralSplit s = spectral_split(a);
        EXPECT_EQ(s.stableDim, 2u);
        EXPECT_EQ(s.unstableDim, 2u);
        const CVector ps{1.0, 1.0, 0.0, 0.0};
        const ComplexMatrix expected = h * ComplexMatrix::diagonal(ps) * hinv;
        EXPECT_LE(max_abs_diff(s.stableProjection, expected), 1e-9);
        EXPECT_NEAR(s.stableRate, 0.5, 1e-10);
        EXPECT_NEAR(s.unstableRate, 2.0, 1e-10);

        const ComplexMatrix id = ComplexMatrix::identity(4);
        EXPECT_LE(max_abs_diff(s.stableProjection + s.unstableProjection, id), 1e-12);
        EXPECT_LE(max_abs_diff(s.stableProjection * s.stableProjection, s.stableProjection), 1e-9);
        EXPECT_LE(max_abs_diff(s.unstableProjection * s.unstableProjection, s.unstableProjection), 1e-9);
        EXPECT_LE(max_abs_diff(a * s.stableProjection, s.stableProjection * a), 1e-9);
        EXPECT_GE(s.boundConstant, 1.0);
        // A^k P_s = H diag(0.3^k, 0.5^k, 0, 0) H^-1; powering P_s directly would
        // amplify its rounding error along the unstable directions
        for (int k = 1; k <= 20; ++k) {
            const CVector dk{std::pow(0.3, k), std::pow(0.5, k), 0.0, 0.0};
            const ComplexMatrix pw = h * ComplexMatrix::diagonal(dk) * hinv;
            EXPECT_LE(operator_norm(pw), s.boundConstant * std::pow(0.5, k) * (1.0 + 1e-9));
        }
    }
}

TEST(SpectralSplit, PurelyStableHasInfiniteUnstableRate) {
    const SpectralSplit s = spectral_split({{0.5, 1.0}, {0.0, 0.25}});
    EXPECT_EQ(s.unstableDim, 0u);
    EXPECT_TRUE(std::isinf(s.unstableRate));
    EXPECT_LE(max_abs_diff(s.stableProjection, ComplexMatrix::identity(2)), 1e-14);
}

TEST(SpectralSplit, SingularRejected) {
    EXPECT_THROW(spectral_split({{0.0, 0.0}, {0.0, 2.0}}), SingularInput);
}

TEST(Hermitian, EigenpairsReconstruct) {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix g = random_gaussian(7, rng);
        const ComplexMatrix h = g + g.adjoint();
        const HermitianEigen e = hermitian_eigen(h);
        ComplexMatrix vd = e.vectors;
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t k = 0; k < 7; ++k) vd(i, k) *= e.values[k];
        EXPECT_LE(max_abs_diff(vd * e.vectors.adjoint(), h), 1e-12);
        for (std::size_t k = 0; k + 1 < 7; ++k) EXPECT_LE(e.values[k], e.values[k + 1]);
    }
}
