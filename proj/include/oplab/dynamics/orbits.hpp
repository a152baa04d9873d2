#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oplab/dynamics/lattice_vector.hpp"
#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/shift/weight_sequence.hpp"

namespace oplab {

inline constexpr std::int64_t kMaxShiftHorizon = 10'000;
inline constexpr std::int64_t kMaxDenseHorizon = 1'000;

/// ||T^n x|| for n in [-horizon, horizon].
struct OrbitSegment {
    std::string backend; ///< "shift" or "dense"
    std::int64_t horizon = 0;
    std::vector<double> norms;    ///< index n + horizon; may hold +inf when the norm overflows
    std::vector<double> logNorms; ///< natural log of norms, always finite for x != 0

    double norm_at(std::int64_t n) const { return norms.at(static_cast<std::size_t>(n + horizon)); }
    double log_norm_at(std::int64_t n) const { return logNorms.at(static_cast<std::size_t>(n + horizon)); }
};

/// Shift backend: norms from scaled weight products,
/// ||T^n e_m|| = prod_{j<n} alpha_{m+j} and ||T^-n e_m|| = prod_{j=1..n} 1/alpha_{m-j}.
/// Throws HorizonTooLarge beyond kMaxShiftHorizon.
OrbitSegment orbit_norms(const WeightSequence& w, const LatticeVector& x, std::int64_t horizon);

/// Dense backend: repeated multiplication by A and by a precomputed A^-1,
/// renormalized each step. Throws HorizonTooLarge beyond kMaxDenseHorizon.
OrbitSegment orbit_norms(const ComplexMatrix& a, const CVector& x, std::int64_t horizon);

/// ||T^n x|| <= r for every |n| >= horizon.
struct HomoclinicReport {
    double r = 0.0;
    std::int64_t horizon = 0;
    /// Smallest N with ||T^n x|| <= r for all |n| >= N (over the scanned range for dense input).
    std::optional<std::int64_t> witnessIndex;
    bool isRHomoclinicAtHorizon = false;
    /// Orbit norms provably tend to infinity in some direction.
    bool certifiedDivergent = false;
    /// The decision holds for all n, not only for a scanned window.
    bool exact = false;
    /// Norm ratios per step once the orbit has left the core (shift backend only).
    double forwardRatio = 0.0;
    double backwardRatio = 0.0;
};

/// Exact for finitely supported x: beyond the core the orbit norms are
/// geometric with ratio rightTail forwards and 1/leftTail backwards.
/// relSlack widens r to r (1 + relSlack) for rounding-tolerant comparisons.
HomoclinicReport is_r_homoclinic(const WeightSequence& w, const LatticeVector& x, double r, std::int64_t horizon,
                                 double relSlack = 0.0);

/// Dense backend: norms scanned for horizon <= |n| <= scanLimit; certifiedDivergent
/// when A is hyperbolic and x != 0.
HomoclinicReport is_r_homoclinic(const ComplexMatrix& a, const CVector& x, double r, std::int64_t horizon,
                                 std::int64_t scanLimit = 0, double relSlack = 0.0);

/// Given x r'-homoclinic at the horizon, checks that (r/r') x is r-homoclinic at
/// the same horizon. Always true by linearity; a false return is a defect.
/// Throws InvalidArgument when x is not r'-homoclinic at the horizon.
bool homoclinic_scaling_check(const WeightSequence& w, const LatticeVector& x, double r, double rPrime,
                              std::int64_t horizon);
bool homoclinic_scaling_check(const ComplexMatrix& a, const CVector& x, double r, double rPrime,
                              std::int64_t horizon);

/// Membership in E^c(T) = {x : sup_n ||T^n x|| < inf}.
struct EcReport {
    bool member = false;
    bool exact = false;     ///< decided for all n rather than a window
    double supNorm = 0.0;   ///< sup over all n (exact) or over the window
    double bound = 0.0;     ///< the caller's bound B
    bool withinBound = false;
};

EcReport ec_membership(const WeightSequence& w, const LatticeVector& x, double bound, std::int64_t horizon);
/// Dense: member iff the window sup is <= bound, unless hyperbolicity certifies divergence.
EcReport ec_membership(const ComplexMatrix& a, const CVector& x, double bound, std::int64_t horizon);

} // namespace oplab
