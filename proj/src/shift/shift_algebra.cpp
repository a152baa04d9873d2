#include "oplab/shift/shift_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in (0, 1)");
}

double blend(double a, double b, double lambda) {
    if (a == b) return a;
    return std::exp((1.0 - lambda) * std::log(a) + lambda * std::log(b));
}

} // namespace

WeightSequence aluthge_weights(const WeightSequence& w, double lambda) {
    check_lambda(lambda);
    if (w.is_constant()) return w;
    const std::int64_t from = w.core_start() - 1;
    const std::int64_t to = w.core_end(); // exclusive
    std::vector<double> core;
    core.reserve(static_cast<std::size_t>(to - from));
    for (std::int64_t n = from; n < to; ++n) core.push_back(blend(w.at(n), w.at(n + 1), lambda));
    return WeightSequence(from, std::move(core), w.left_tail(), w.right_tail());
}

WeightSequence aluthge_weights_iterate(const WeightSequence& w, double lambda, std::int64_t k) {
    check_lambda(lambda);
    if (k < 0 || k > kMaxShiftIterates) throw InvalidArgument("iterate count must lie in [0, 2^16]");
    if (k == 0 || w.is_constant()) return w;

    const std::int64_t from = w.core_start() - k;
    const std::size_t len = static_cast<std::size_t>(w.core_end() - from);
    std::vector<double> val(len), lg(len);
    for (std::size_t i = 0; i < len; ++i) {
        val[i] = w.at(from + static_cast<std::int64_t>(i));
        lg[i] = std::log(val[i]);
    }
    const double rightVal = w.right_tail();
    const double rightLog = std::log(rightVal);
    const double mu = 1.0 - lambda;

    for (std::int64_t step = 0; step < k; ++step) {
        // ascending sweep: lg[i + 1] still holds the previous iterate when lg[i] is updated
        for (std::size_t i = 0; i < len; ++i) {
            const bool last = i + 1 == len;
            const double nv = last ? rightVal : val[i + 1];
            if (val[i] == nv) continue;
            const double nl = last ? rightLog : lg[i + 1];
            lg[i] = mu * lg[i] + lambda * nl;
            val[i] = std::exp(lg[i]);
        }
    }
    return WeightSequence(from, std::move(val), w.left_tail(), w.right_tail());
}

double aluthge_weight_closed_form(const WeightSequence& w, double lambda, std::int64_t k, std::int64_t n) {
    check_lambda(lambda);
    if (k < 0 || k > kMaxShiftIterates) throw InvalidArgument("iterate count must lie in [0, 2^16]");
    const double kd = static_cast<double>(k);
    const double lk = std::lgamma(kd + 1.0);
    const double ll = std::log(lambda);
    const double lm = std::log1p(-lambda);
    double acc = 0.0;
    for (std::int64_t j = 0; j <= k; ++j) {
        const double jd = static_cast<double>(j);
        const double logWeight = lk - std::lgamma(jd + 1.0) - std::lgamma(kd - jd + 1.0) + jd * ll + (kd - jd) * lm;
        acc += std::exp(logWeight) * std::log(w.at(n + j));
    }
    return std::exp(acc);
}

SpectralAnnulus spectrum_annulus(const WeightSequence& w) {
    return {std::min(w.left_tail(), w.right_tail()), std::max(w.left_tail(), w.right_tail())};
}

std::string_view to_string(ShiftVerdict v) {
    switch (v) {
    case ShiftVerdict::UniformContraction: return "UniformContraction";
    case ShiftVerdict::UniformExpansion: return "UniformExpansion";
    case ShiftVerdict::HyperbolicOnly: return "HyperbolicOnly";
    case ShiftVerdict::ShiftedHyperbolic: return "ShiftedHyperbolic";
    case ShiftVerdict::NotGeneralizedHyperbolic: return "NotGeneralizedHyperbolic";
    case ShiftVerdict::Boundary: return "Boundary";
    }
    return "?";
}

ShiftVerdict shift_verdict_from_string(std::string_view s) {
    for (auto v : {ShiftVerdict::UniformContraction, ShiftVerdict::UniformExpansion, ShiftVerdict::HyperbolicOnly,
                   ShiftVerdict::ShiftedHyperbolic, ShiftVerdict::NotGeneralizedHyperbolic, ShiftVerdict::Boundary}) {
        if (to_string(v) == s) return v;
    }
    throw InvalidArgument("unknown shift verdict '" + std::string(s) + "'");
}

namespace {

// log sup_{n >= s} prod_{j<p} alpha_{n+j}
double log_rate_m(const WeightSequence& w, std::int64_t s, int p) {
    double best = p * std::log(w.right_tail());
    for (std::int64_t n = s; n < w.core_end(); ++n) {
        double acc = 0.0;
        for (int j = 0; j < p; ++j) acc += std::log(w.at(n + j));
        best = std::max(best, acc);
    }
    return best;
}

// log sup_{n < s} prod_{j=1..p} 1/alpha_{n-j}
double log_rate_n(const WeightSequence& w, std::int64_t s, int p) {
    double best = -p * std::log(w.left_tail());
    for (std::int64_t n = std::min(s - 1, w.core_start()); n < s; ++n) {
        double acc = 0.0;
        for (int j = 1; j <= p; ++j) acc -= std::log(w.at(n - j));
        best = std::max(best, acc);
    }
    return best;
}

std::optional<IndexSplit> try_split(const WeightSequence& w, std::int64_t s, int p) {
    const double lm = log_rate_m(w, s, p);
    const double ln = log_rate_n(w, s, p);
    if (!(lm < 0.0 && ln < 0.0)) return std::nullopt;
    IndexSplit out;
    out.splitPoint = s;
    out.power = p;
    if (p == 1) {
        // exact weights rather than exp(log(.))
        double m = w.right_tail();
        for (std::int64_t n = s; n < w.core_end(); ++n) m = std::max(m, w.at(n));
        double r = 1.0 / w.left_tail();
        for (std::int64_t n = std::min(s - 1, w.core_start()); n < s; ++n) r = std::max(r, 1.0 / w.at(n - 1));
        out.rateM = m;
        out.rateN = r;
    } else {
        out.rateM = std::exp(lm / p);
        out.rateN = std::exp(ln / p);
    }
    return out;
}

IndexSplit find_split(const WeightSequence& w) {
    constexpr int kMaxPower = 4096;
    std::vector<std::int64_t> candidates;
    for (std::int64_t s = w.core_end(); s <= w.core_end() + 1; ++s) candidates.push_back(s);
    for (std::int64_t s = w.core_start() - 1; s < w.core_end(); ++s) candidates.push_back(s);
    for (int p = 1; p <= kMaxPower; p = (p < 16) ? p + 1 : 2 * p) {
        for (std::int64_t s : candidates) {
            if (auto split = try_split(w, s, p)) return *split;
        }
    }
    throw ContractViolation("classify: no certified splitting found for a shifted hyperbolic shift");
}

} // namespace

ShiftClass classify(const WeightSequence& w) {
    ShiftClass out;
    out.annulus = spectrum_annulus(w);
    const double a = w.left_tail();
    const double b = w.right_tail();
    out.hyperbolic = !out.annulus.contains_unit_circle_point();
    if (a == 1.0 || b == 1.0) {
        out.verdict = ShiftVerdict::Boundary;
    } else if (a > 1.0 && b > 1.0) {
        out.verdict = ShiftVerdict::UniformExpansion;
        out.generalizedHyperbolic = true;
    } else if (a < 1.0 && b < 1.0) {
        out.verdict = ShiftVerdict::UniformContraction;
        out.generalizedHyperbolic = true;
    } else if (a > 1.0) {
        out.verdict = ShiftVerdict::ShiftedHyperbolic;
        out.generalizedHyperbolic = true;
        out.split = find_split(w);
        out.witnessIndex = out.split->splitPoint - 1;
    } else {
        out.verdict = ShiftVerdict::NotGeneralizedHyperbolic;
    }
    return out;
}

bool is_hyponormal(const WeightSequence& w) {
    double prev = w.left_tail();
    for (double v : w.core()) {
        if (v < prev) return false;
        prev = v;
    }
    return prev <= w.right_tail();
}

WeightSequence diagonal_conjugate(const WeightSequence& w, const WeightSequence& d) {
    if (d.left_tail() != d.right_tail()) {
        throw UnboundedConjugator("diagonal conjugator must have equal tails (bounded with bounded inverse)");
    }
    const std::int64_t from = std::min(w.core_start(), d.core_start() - 1);
    const std::int64_t to = std::max(w.core_end(), d.core_end());
    std::vector<double> core;
    for (std::int64_t n = from; n < to; ++n) {
        const double dn = d.at(n);
        const double dn1 = d.at(n + 1);
        core.push_back(dn == dn1 ? w.at(n) : w.at(n) * dn1 / dn);
    }
    return WeightSequence(from, std::move(core), w.left_tail(), w.right_tail());
}

namespace {

std::size_t window_size(std::int64_t from, std::int64_t to) {
    if (from > to) throw InvalidArgument("truncation window is empty (from > to)");
    const std::uint64_t span = static_cast<std::uint64_t>(to) - static_cast<std::uint64_t>(from);
    if (span >= static_cast<std::uint64_t>(kMaxTruncation)) {
        throw WindowTooLarge("truncation window exceeds " + std::to_string(kMaxTruncation) + " coordinates");
    }
    return static_cast<std::size_t>(span) + 1;
}

} // namespace

ComplexMatrix truncate_to_dense(const WeightSequence& w, std::int64_t from, std::int64_t to) {
    const std::size_t n = window_size(from, to);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i + 1, i) = w.at(from + static_cast<std::int64_t>(i));
    return m;
}

ComplexMatrix truncate_to_dense_cyclic(const WeightSequence& w, std::int64_t from, std::int64_t to) {
    ComplexMatrix m = truncate_to_dense(w, from, to);
    const std::size_t n = m.dim();
    if (n == 1) {
        m(0, 0) = w.at(to);
    } else {
        m(0, n - 1) = w.at(to);
    }
    return m;
}

double shift_distance(const WeightSequence& a, const WeightSequence& b) {
    double d = std::max(std::abs(a.left_tail() - b.left_tail()), std::abs(a.right_tail() - b.right_tail()));
    const std::int64_t from = std::min(a.core_start(), b.core_start());
    const std::int64_t to = std::max(a.core_end(), b.core_end());
    for (std::int64_t n = from; n < to; ++n) d = std::max(d, std::abs(a.at(n) - b.at(n)));
    return d;
}

double distance_to_constant(const WeightSequence& w) { return (w.sup() - w.inf()) / 2.0; }

double shift_commutator_defect(const WeightSequence& w) {
    double d = 0.0;
    for (std::int64_t n = w.core_start(); n <= w.core_end(); ++n) {
        const double a = w.at(n);
        const double b = w.at(n - 1);
        d = std::max(d, std::abs(a * a - b * b));
    }
    return d;
}

const std::vector<NamedShift>& shift_library() {
    static const std::vector<NamedShift> lib = {
        {"hyp-2-3", WeightSequence::two_tail(2.0, 3.0, 1)},
        {"sh-2-half", WeightSequence::two_tail(2.0, 0.5, 1)},
        {"const-half", WeightSequence::constant(0.5)},
        {"const-3", WeightSequence::constant(3.0)},
        {"ngh-half-2", WeightSequence::two_tail(0.5, 2.0, 1)},
        {"const-1", WeightSequence::constant(1.0)},
        {"boundary-1-2", WeightSequence::two_tail(1.0, 2.0, 0)},
        {"contraction-bumped", WeightSequence(-1, {0.8, 1.5}, 0.5, 0.25)},
        {"sh-bumped", WeightSequence(0, {0.5, 3.0}, 2.0, 0.5)},
        {"ngh-plateau", WeightSequence(0, {1.0, 1.0}, 0.25, 4.0)},
        {"expansion-dip", WeightSequence(2, {0.9}, 1.5, 1.2)},
        {"boundary-half-1", WeightSequence(0, {2.0, 0.75}, 0.5, 1.0)},
    };
    return lib;
}

WeightSequence shift_preset(std::string_view name) {
    if (name == "paper-sh") return WeightSequence::two_tail(2.0, 0.5, 1);
    if (name == "paper-hyp") return WeightSequence::two_tail(2.0, 3.0, 1);
    for (const auto& s : shift_library())
        if (s.name == name) return s.weights;
    throw InvalidArgument("unknown shift preset '" + std::string(name) + "'");
}

} // namespace oplab
