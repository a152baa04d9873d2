#pragma once

#include <span>

#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/linalg/decompositions.hpp"

namespace oplab {

/// Largest singular value, computed as sqrt(lambda_max(A*A)) with the
/// Hermitian Jacobi solver (a route independent of svd()).
double operator_norm(const ComplexMatrix& a, double tol = kReconstructionTol);

/// ||A^(2^doublings)||^(1/2^doublings) by repeated squaring. The running power
/// is renormalized after every squaring and its scale kept in log form, so
/// expansive matrices do not overflow.
double gelfand_radius(const ComplexMatrix& a, int doublings, double tol = kReconstructionTol);

/// Eigenvalues in library order (modulus desc, argument asc).
CVector eigenvalues(const ComplexMatrix& a);

double spectral_radius(const ComplexMatrix& a);

/// Symmetric Hausdorff distance between two finite point sets in C.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

/// Invertible and no eigenvalue modulus within tol of 1.
bool is_hyperbolic(const ComplexMatrix& a, double tol = kSpectralTol);

/// Smallest distance of an eigenvalue modulus to 1.
double unit_circle_gap(std::span<const Complex> spectrum);

/// Riesz projections onto the stable (|z| < 1) and unstable (|z| > 1) spectral
/// subspaces, with rates and a bound constant C such that
/// ||A^k P_s|| <= C rho_s^k and ||A^-k P_u|| <= C rho_u^-k on the checked range.
struct SpectralSplit {
    ComplexMatrix stableProjection;
    ComplexMatrix unstableProjection;
    double stableRate = 0.0;   ///< max |z| over the stable part, 0 if it is empty
    double unstableRate = 0.0; ///< min |z| over the unstable part, +inf if it is empty
    double boundConstant = 1.0;
    std::size_t stableDim = 0;
    std::size_t unstableDim = 0;
    int checkedPowers = 0; ///< bound verified for k in [0, checkedPowers]
};

/// Throws NotHyperbolic if an eigenvalue modulus lies in (1 - tol, 1 + tol)
/// and SingularInput if A is not invertible.
SpectralSplit spectral_split(const ComplexMatrix& a, double tol = kSpectralTol);

} // namespace oplab
