#pragma once

#include <cstdint>
#include <vector>

#include "oplab/dynamics/lattice_vector.hpp"
#include "oplab/dynamics/orbits.hpp"
#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/linalg/random.hpp"
#include "oplab/linalg/spectral.hpp"
#include "oplab/shift/weight_sequence.hpp"

namespace oplab {

/// Finite window [first, first + size) of a delta-pseudotrajectory. Beyond
/// the window the sequence continues as the exact orbit of its end points,
/// so the defects d_n = x_{n+1} - T x_n vanish outside the window.
template <class Vec>
struct PseudoOrbit {
    double delta = 0.0;
    std::int64_t first = 0;
    std::vector<Vec> points;
    std::vector<Vec> defects; ///< defects[i] = points[i+1] - T points[i]
    double maxDefect = 0.0;

    std::int64_t last() const { return first + static_cast<std::int64_t>(points.size()) - 1; }
    const Vec& at(std::int64_t n) const { return points.at(static_cast<std::size_t>(n - first)); }
};

using DensePseudoOrbit = PseudoOrbit<CVector>;
using ShiftPseudoOrbit = PseudoOrbit<LatticeVector>;

/// x_n = q^|n| T^n x for |n| <= horizon with q = 1 - delta / (4M) and
/// M = sup_n ||T^n x||. Every defect is at most delta / 4.
/// Throws NotBoundedOrbit if x is not in E^c and DeltaTooLarge if q <= 0.
ShiftPseudoOrbit build_pseudo_orbit_from_bounded(const WeightSequence& w, const LatticeVector& x, double delta,
                                                 std::int64_t horizon);
DensePseudoOrbit build_pseudo_orbit_from_bounded(const ComplexMatrix& a, const CVector& x, double delta,
                                                 std::int64_t horizon);

/// Smallest n >= 0 with q^n M <= target, i.e. where the constructed pseudo-orbit
/// has decayed below target.
std::int64_t pseudo_orbit_decay_index(double supNorm, double delta, double target);

/// Wraps given points, computing defects; throws InvalidArgument if some
/// defect is not below delta.
DensePseudoOrbit pseudo_orbit_from_points(const ComplexMatrix& a, std::vector<CVector> points, std::int64_t first,
                                          double delta);

/// Random pseudo-orbit with `steps` defects, bounded on the whole window: a
/// stable component generated forwards and an unstable component generated
/// backwards, each driven by noise whose projected size stays below delta / 2.
/// Requires A hyperbolic.
DensePseudoOrbit random_bounded_pseudo_orbit(const ComplexMatrix& a, std::int64_t steps, double delta, Rng& rng);

template <class Vec>
struct ShadowResult {
    Vec shadowPoint; ///< y with T^n y close to x_n; indexed at n = 0
    double epsilon = 0.0;
    std::vector<double> perStepErrors; ///< ||T^n y - x_n|| over the window
    double shadowingConstant = 0.0;    ///< K
    double guaranteedBound = 0.0;      ///< K * delta
    bool boundHolds = false;
    /// max_n ||c_{n+1} - T c_n - d_n|| for the correction c_n = x_n - T^n y
    double recursionResidual = 0.0;
};

/// K = C / (1 - rho_s) + C rho_u^-1 / (1 - rho_u^-1) from spectral_split.
double shadowing_constant_estimate(const ComplexMatrix& a);

/// Shadow of a pseudo-orbit of a hyperbolic matrix through the stable/unstable
/// series c_n = sum_{k>=0} A^k P_s d_{n-1-k} - sum_{k>=1} A^-k P_u d_{n-1+k},
/// y = x_0 - c_0. Defects vanish outside the window, so both series are finite
/// and are evaluated exactly as a forward and a backward recursion.
/// The window must contain n = 0.
ShadowResult<CVector> shadow_solve(const ComplexMatrix& a, const DensePseudoOrbit& po);

/// Splitting used to shadow a generalized hyperbolic shift: M = span{e_n : n >= s},
/// N = span{e_n : n < s}, with ||T^k P_M|| <= constM rateM^k and
/// ||T^-k P_N|| <= constN rateN^k for all k. Uniform contractions use s = -inf
/// (N = {0}) and uniform expansions s = +inf (M = {0}).
struct ShiftSplitting {
    enum class Kind { Index, AllStable, AllUnstable } kind = Kind::Index;
    std::int64_t splitPoint = 0;
    double rateM = 0.0;
    double rateN = 0.0;
    double constM = 1.0;
    double constN = 1.0;
    double shadowingConstant = 0.0;
};

/// Throws NotShadowing unless the verdict is UniformContraction,
/// UniformExpansion or ShiftedHyperbolic.
ShiftSplitting shift_splitting(const WeightSequence& w);

ShadowResult<LatticeVector> shadow_solve_shift(const WeightSequence& w, const ShiftPseudoOrbit& po);

/// From a bounded-orbit vector x to a nearby r-homoclinic point: pseudo-orbit
/// with delta = eps / (2K), shadow y, then an exact homoclinic decision on y.
struct LemmaReport {
    double epsilon = 0.0;
    double delta = 0.0;
    double shadowingConstant = 0.0;
    double supNorm = 0.0;
    double maxDefect = 0.0;
    double shadowEpsilon = 0.0;
    double distanceToShadow = 0.0; ///< ||x - y||
    LatticeVector shadowPoint;
    HomoclinicReport homoclinic;
    bool ok = false; ///< defects < delta, ||x - y|| <= eps / 2, y r-homoclinic
};

LemmaReport lemma_pipeline(const WeightSequence& w, const LatticeVector& x, double r, double epsilon,
                           std::int64_t horizon);

} // namespace oplab
