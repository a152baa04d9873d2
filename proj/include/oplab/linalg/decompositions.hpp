#pragma once

#include <vector>

#include "oplab/linalg/complex_matrix.hpp"

namespace oplab {

/// Default relative tolerance for factorization reconstruction checks.
inline constexpr double kReconstructionTol = 1e-10;
/// Default tolerance for comparing spectra.
inline constexpr double kSpectralTol = 1e-6;

/// A = Q T Q* with Q unitary and T upper triangular. The diagonal of T is
/// ordered by (modulus desc, argument asc) and copied into `eigenvalues`.
struct SchurForm {
    ComplexMatrix unitaryQ;
    ComplexMatrix upperT;
    CVector eigenvalues;
};

struct SchurOptions {
    /// Total QR sweeps allowed, as a multiple of the dimension.
    std::size_t sweepsPerDim = 100;
};

/// Complex Schur form via Householder Hessenberg reduction and
/// Wilkinson-shifted single-shift QR, followed by a reordering of the diagonal.
SchurForm schur_decompose(const ComplexMatrix& a, double tol = kReconstructionTol,
                          const SchurOptions& opts = {});

/// Strict weak ordering used for every eigenvalue list in the library:
/// larger modulus first, ties broken by smaller argument in (-pi, pi].
bool eigenvalue_order(const Complex& a, const Complex& b);

struct SvdResult {
    ComplexMatrix u;
    std::vector<double> sigma; ///< descending
    ComplexMatrix v;
};

/// One-sided (Hestenes) Jacobi SVD: A = U diag(sigma) V*.
SvdResult svd(const ComplexMatrix& a, double tol = kReconstructionTol, int maxSweeps = 60);

struct HermitianEigen {
    std::vector<double> values; ///< ascending
    ComplexMatrix vectors;      ///< columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for Hermitian input (only the Hermitian part of `a` is used).
HermitianEigen hermitian_eigen(const ComplexMatrix& a, int maxSweeps = 60);

/// Right polar factorization A = U P with P = (A*A)^{1/2}.
struct PolarFactors {
    ComplexMatrix isometry;
    ComplexMatrix modulus;
};

/// Refuses numerically singular input (smallest singular value <= tol * ||A||)
/// with SingularInput.
PolarFactors polar_decompose(const ComplexMatrix& a, double tol = kReconstructionTol);

/// P^exponent for Hermitian PSD P and exponent in (0, 1].
/// Throws NotPSD when P has an eigenvalue below -tol.
ComplexMatrix psd_power(const ComplexMatrix& p, double exponent, double tol = kReconstructionTol);

} // namespace oplab
