#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/linalg/decompositions.hpp"
#include "oplab/linalg/random.hpp"
#include "oplab/shift/shift_algebra.hpp"

namespace oplab {

inline constexpr double kDefaultStopTol = 1e-10;
inline constexpr std::int64_t kMaxAluthgeIterations = 10'000;

/// Delta_lambda(A) = P^lambda U P^(1-lambda) for A = U P. Evaluated from one
/// SVD A = W S V*, where it equals V S^lambda (V* W) S^(1-lambda) V*.
/// Throws SingularInput when the smallest singular value is <= tol * ||A||.
ComplexMatrix aluthge_dense(const ComplexMatrix& a, double lambda, double tol = kReconstructionTol);

/// ||A*A - AA*||.
double commutator_defect(const ComplexMatrix& a);

struct TraceOptions {
    int snapshotEvery = 1;     ///< eigenvalues recorded for iterates k with k % snapshotEvery == 0 (and the last)
    bool keepIterates = false; ///< otherwise only the first and last iterate are kept
};

struct SpectrumSnapshot {
    std::int64_t iterate = 0;
    CVector eigenvalues;
    double drift = 0.0; ///< Hausdorff distance to the eigenvalues of iterate 0
};

/// Iterates Delta^(0) = A, Delta^(k+1) = Delta_lambda(Delta^(k)).
struct AluthgeTrace {
    double lambda = 0.5;
    double stopTol = kDefaultStopTol;
    ComplexMatrix initial;
    ComplexMatrix last;
    std::vector<ComplexMatrix> iterates;   ///< all iterates when keepIterates
    std::vector<double> stepGaps;          ///< stepGaps[k] = ||Delta^(k+1) - Delta^(k)||
    std::vector<double> commutatorDefects; ///< one per iterate, starting at k = 0
    std::vector<SpectrumSnapshot> spectra;
    bool converged = false; ///< stopped because a step gap fell below stopTol

    std::int64_t iterations() const noexcept { return static_cast<std::int64_t>(stepGaps.size()); }
    double max_spectral_drift() const;
};

/// Runs until a step gap drops below stopTol or maxIters transforms were applied.
/// An iterate that loses invertibility raises SingularInput naming its index.
AluthgeTrace iterate_dense(const ComplexMatrix& a, double lambda, std::int64_t maxIters = kMaxAluthgeIterations,
                           double stopTol = kDefaultStopTol, const TraceOptions& opts = {});

struct ShiftAluthgeTrace {
    double lambda = 0.5;
    double stopTol = kDefaultStopTol;
    WeightSequence initial = WeightSequence::constant(1.0);
    WeightSequence last = WeightSequence::constant(1.0);
    std::vector<WeightSequence> iterates; ///< all iterates when keepIterates
    std::vector<double> stepGaps;         ///< exact sup_n |alpha_n^(k+1) - alpha_n^(k)|
    std::vector<SpectralAnnulus> annuli;  ///< one per iterate
    bool converged = false;

    std::int64_t iterations() const noexcept { return static_cast<std::int64_t>(stepGaps.size()); }
};

ShiftAluthgeTrace iterate_shift(const WeightSequence& w, double lambda, std::int64_t maxIters,
                                double stopTol = kDefaultStopTol, bool keepIterates = false);

/// Lower bounds that rule out norm convergence of the Aluthge iterates of a
/// shift with unequal tails.
struct DivergenceCertificate {
    double lambda = 0.5;
    std::int64_t kSmall = 0;
    std::int64_t kLarge = 0;
    std::int64_t probeIndex = 0;
    double valueSmall = 0.0; ///< alpha_n^(kSmall) by the iterated map
    double valueLarge = 0.0;
    double gap = 0.0;            ///< |valueSmall - valueLarge|
    double gapClosedForm = 0.0;  ///< same gap from the binomial closed form
    double iterateDistance = 0.0; ///< ||Delta^(kLarge) - Delta^(kSmall)||, always >= gap
    double leftTail = 0.0;
    double rightTail = 0.0;
    double tailLowerBound = 0.0; ///< |a- - a+| / 2
};

/// Throws ConstantWeights when the tails agree, ContractViolation when the two
/// routes to the probe values differ by more than 1e-10.
DivergenceCertificate divergence_certificate_shift(const WeightSequence& w, double lambda, std::int64_t kSmall,
                                                   std::int64_t kLarge, std::int64_t probeIndex);

/// Probe used when none is given: (k, 4k, n = -round(lambda k)).
DivergenceCertificate divergence_certificate_shift(const WeightSequence& w, double lambda = 0.5,
                                                   std::int64_t k = 16);

enum class LimitStatus { HyperbolicLimit, NotHyperbolicLimit };

std::string_view to_string(LimitStatus s);

struct HyperbolicLimitReport {
    LimitStatus status = LimitStatus::NotHyperbolicLimit;
    CVector limitEigenvalues;
    CVector initialEigenvalues;
    double spectrumMismatch = 0.0; ///< Hausdorff distance between the two lists
    bool initialHyperbolic = false;
    double limitDefect = 0.0; ///< commutator defect of the limit
    /// min over eigenvalues of ||z| - 1|. For the (normal) limit, every
    /// perturbation of smaller norm keeps the spectrum off the unit circle.
    double safeRadius = 0.0;
    int perturbationsTried = 0;
    int perturbationsHyperbolic = 0;
    double crossingNorm = 0.0;     ///< length of the constructed crossing path, 3 * safeRadius
    bool crossingDetected = false; ///< the path hits the unit circle and then flips the unstable dimension
};

/// Throws TraceDiverged when the trace did not converge.
HyperbolicLimitReport hyperbolic_limit_probe(const AluthgeTrace& trace, Rng& rng, double tol = kSpectralTol,
                                             int perturbations = 20);

struct HyponormalReport {
    bool fixedPoint = false;
    std::vector<double> stepGaps; ///< fixed point case: gaps of the first kMax iterates
    std::optional<DivergenceCertificate> certificate;
    double minDistanceToConstant = 0.0; ///< min over k <= kMax of the distance to constant-weight shifts
    ShiftVerdict verdict = ShiftVerdict::Boundary;
    bool hyperbolic = false;
};

/// Throws NotHyponormal unless alpha_n <= alpha_{n+1} everywhere.
HyponormalReport hyponormal_divergence_check(const WeightSequence& w, double lambda = 0.5, std::int64_t kMax = 64);

} // namespace oplab
