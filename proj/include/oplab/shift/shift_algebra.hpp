#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/shift/weight_sequence.hpp"

namespace oplab {

/// Largest window (number of coordinates) a shift may be truncated to.
inline constexpr std::int64_t kMaxTruncation = static_cast<std::int64_t>(ComplexMatrix::kMaxDim);
/// Largest iterate count accepted by aluthge_weights_iterate.
inline constexpr std::int64_t kMaxShiftIterates = std::int64_t{1} << 16;

/// alpha'_n = alpha_n^(1-lambda) alpha_{n+1}^lambda, lambda in (0, 1).
/// Neighbouring equal weights map to themselves exactly, so tails are preserved
/// bit for bit and the result stays canonical.
WeightSequence aluthge_weights(const WeightSequence& w, double lambda);

/// k-fold application of aluthge_weights, carried out in log space.
WeightSequence aluthge_weights_iterate(const WeightSequence& w, double lambda, std::int64_t k);

/// alpha_n^(k) = exp(sum_j C(k,j) lambda^j (1-lambda)^(k-j) log alpha_{n+j}),
/// binomial weights evaluated in log space.
double aluthge_weight_closed_form(const WeightSequence& w, double lambda, std::int64_t k, std::int64_t n);

struct SpectralAnnulus {
    double inner = 0.0;
    double outer = 0.0;
    bool contains_unit_circle_point() const noexcept { return inner <= 1.0 && 1.0 <= outer; }
};

/// Growth rates of the weight products: [min tail, max tail].
SpectralAnnulus spectrum_annulus(const WeightSequence& w);

enum class ShiftVerdict {
    UniformContraction,
    UniformExpansion,
    HyperbolicOnly,
    ShiftedHyperbolic,
    NotGeneralizedHyperbolic,
    Boundary,
};

std::string_view to_string(ShiftVerdict v);
ShiftVerdict shift_verdict_from_string(std::string_view s);

/// Coordinate splitting M = span{e_n : n >= s}, N = span{e_n : n < s}.
/// rateM and rateN are exact operator norms of (T|_M)^p and (T^-1|_N)^p taken
/// to the power 1/p; for p = 1 they are sup_{n>=s} alpha_n and
/// sup_{n<s} 1/alpha_{n-1}.
struct IndexSplit {
    std::int64_t splitPoint = 0;
    double rateM = 0.0;
    double rateN = 0.0;
    int power = 1;
};

struct ShiftClass {
    ShiftVerdict verdict = ShiftVerdict::Boundary;
    SpectralAnnulus annulus;
    std::optional<IndexSplit> split; ///< present for ShiftedHyperbolic
    /// Nonzero vector of T^-1(M) ∩ N: the basis index s - 1 (ShiftedHyperbolic only).
    std::optional<std::int64_t> witnessIndex;
    bool hyperbolic = false;            ///< annulus misses the unit circle
    bool generalizedHyperbolic = false; ///< splitting with uniform contractions exists
};

/// Verdict from the tails:
///   both > 1 -> UniformExpansion, both < 1 -> UniformContraction,
///   left > 1 > right -> ShiftedHyperbolic (with a certified IndexSplit),
///   left < 1 < right -> NotGeneralizedHyperbolic, a tail equal to 1 -> Boundary.
/// HyperbolicOnly cannot occur for this class.
ShiftClass classify(const WeightSequence& w);

/// alpha_n <= alpha_{n+1} for every n.
bool is_hyponormal(const WeightSequence& w);

/// Weights of H W H^-1 for H = diag(d_n): alpha_n d_{n+1} / d_n.
/// Throws UnboundedConjugator unless d has equal tails.
WeightSequence diagonal_conjugate(const WeightSequence& w, const WeightSequence& d);

/// Compression to span{e_from, ..., e_to}: entry (i+1, i) = alpha_{from+i}.
/// Throws WindowTooLarge when the window has more than kMaxTruncation coordinates.
ComplexMatrix truncate_to_dense(const WeightSequence& w, std::int64_t from, std::int64_t to);

/// Same compression closed into a cycle: entry (0, last) = alpha_to. The result
/// is invertible with modulus diag(alpha_from..alpha_to), so its polar data and
/// Aluthge transform agree with the shift's on interior entries.
ComplexMatrix truncate_to_dense_cyclic(const WeightSequence& w, std::int64_t from, std::int64_t to);

/// ||W_a - W_b|| = sup_n |a_n - b_n|, exact.
double shift_distance(const WeightSequence& a, const WeightSequence& b);

/// inf over constants c of ||W_a - cS|| = (sup a - inf a) / 2.
double distance_to_constant(const WeightSequence& w);

/// ||T*T - TT*|| = sup_n |alpha_n^2 - alpha_{n-1}^2|.
double shift_commutator_defect(const WeightSequence& w);

struct NamedShift {
    std::string name;
    WeightSequence weights;
};

/// Built-in library of twelve shifts covering the five reachable verdicts.
const std::vector<NamedShift>& shift_library();

/// Named presets: "paper-sh" = (2 | 1/2) and "paper-hyp" = (2 | 3), both split at 1.
WeightSequence shift_preset(std::string_view name);

} // namespace oplab
