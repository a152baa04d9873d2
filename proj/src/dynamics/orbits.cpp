#include "oplab/dynamics/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "oplab/errors.hpp"
#include "oplab/linalg/spectral.hpp"

namespace oplab {

namespace {

constexpr std::int64_t kMaxTransient = 1'000'000;

// mantissa * 2^exponent, immune to overflow over long weight products
struct Scaled {
    double mant = 0.0;
    std::int64_t exp = 0;

    explicit Scaled(double v) {
        int e = 0;
        mant = std::frexp(v, &e);
        exp = e;
    }
    void mul(double v) {
        int e = 0;
        mant = std::frexp(mant * v, &e);
        exp += e;
    }
    void div(double v) {
        int e = 0;
        mant = std::frexp(mant / v, &e);
        exp += e;
    }
};

struct NormValue {
    double value = 0.0;
    double log = -std::numeric_limits<double>::infinity();
};

NormValue combine(const std::vector<Scaled>& parts) {
    std::int64_t top = std::numeric_limits<std::int64_t>::min();
    for (const auto& p : parts)
        if (p.mant != 0.0) top = std::max(top, p.exp);
    if (top == std::numeric_limits<std::int64_t>::min()) return {};
    double s = 0.0;
    for (const auto& p : parts) {
        if (p.mant == 0.0) continue;
        const std::int64_t shift = p.exp - top;
        if (shift < -1100) continue;
        const double v = std::ldexp(p.mant, static_cast<int>(shift));
        s += v * v;
    }
    const double root = std::sqrt(s);
    NormValue out;
    out.log = std::log(root) + static_cast<double>(top) * std::numbers::ln2;
    out.value = (top > 2000) ? std::numeric_limits<double>::infinity()
                             : (top < -2000 ? 0.0 : std::ldexp(root, static_cast<int>(top)));
    return out;
}

// Norms of T^n x for n in [-back, fwd], index n + back.
std::vector<NormValue> shift_series(const WeightSequence& w, const LatticeVector& x, std::int64_t back,
                                    std::int64_t fwd) {
    std::vector<NormValue> out(static_cast<std::size_t>(back + fwd + 1));
    std::vector<std::int64_t> idx;
    std::vector<Scaled> base;
    for (const auto& [m, c] : x.coefficients()) {
        idx.push_back(m);
        base.emplace_back(std::abs(c));
    }
    out[static_cast<std::size_t>(back)] = combine(base);
    std::vector<Scaled> cur = base;
    for (std::int64_t n = 1; n <= fwd; ++n) {
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i].mul(w.at(idx[i] + n - 1));
        out[static_cast<std::size_t>(back + n)] = combine(cur);
    }
    cur = base;
    for (std::int64_t n = 1; n <= back; ++n) {
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i].div(w.at(idx[i] - n));
        out[static_cast<std::size_t>(back - n)] = combine(cur);
    }
    return out;
}

bool within(const NormValue& v, double r, double logR) {
    if (std::isfinite(v.value) && v.value > 0.0) return v.value <= r;
    return v.log <= logR;
}

struct Transient {
    std::int64_t fwd = 0;  // forward norms are geometric (ratio rightTail) from here on
    std::int64_t back = 0; // backward norms are geometric (ratio 1/leftTail) from here on
};

Transient transient(const WeightSequence& w, const LatticeVector& x) {
    Transient t;
    t.fwd = std::max<std::int64_t>(0, w.core_end() - x.min_index());
    t.back = std::max<std::int64_t>(0, x.max_index() - w.core_start());
    if (t.fwd > kMaxTransient || t.back > kMaxTransient) {
        throw HorizonTooLarge("vector support lies too far from the weight core");
    }
    return t;
}

// Last n >= 0 (in one direction) with norm > r, given the transient series
// s[0..t] and the geometric ratio beyond t. Returns nullopt when violations never stop.
std::optional<std::int64_t> last_violation(const std::vector<NormValue>& s, double ratio, double r, double logR) {
    std::int64_t last = -1;
    for (std::size_t n = 0; n < s.size(); ++n)
        if (!within(s[n], r, logR)) last = static_cast<std::int64_t>(n);
    const std::int64_t t = static_cast<std::int64_t>(s.size()) - 1;
    if (within(s.back(), r, logR)) return last;
    if (ratio >= 1.0) return std::nullopt;
    const double lr = std::log(ratio);
    const double l0 = s.back().log;
    auto exceeds = [&](std::int64_t k) { return l0 + static_cast<double>(k) * lr > logR; };
    std::int64_t k = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((l0 - logR) / -lr)));
    while (exceeds(k)) ++k;
    while (k > 1 && !exceeds(k - 1)) --k;
    return t + k - 1;
}

} // namespace

OrbitSegment orbit_norms(const WeightSequence& w, const LatticeVector& x, std::int64_t horizon) {
    if (horizon < 0) throw InvalidArgument("orbit_norms: horizon must be nonnegative");
    if (horizon > kMaxShiftHorizon) throw HorizonTooLarge("orbit_norms: shift horizon exceeds 10^4");
    OrbitSegment seg;
    seg.backend = "shift";
    seg.horizon = horizon;
    const std::size_t len = static_cast<std::size_t>(2 * horizon + 1);
    if (x.is_zero()) {
        seg.norms.assign(len, 0.0);
        seg.logNorms.assign(len, -std::numeric_limits<double>::infinity());
        return seg;
    }
    for (const auto& v : shift_series(w, x, horizon, horizon)) {
        seg.norms.push_back(v.value);
        seg.logNorms.push_back(v.log);
    }
    return seg;
}

OrbitSegment orbit_norms(const ComplexMatrix& a, const CVector& x, std::int64_t horizon) {
    if (horizon < 0) throw InvalidArgument("orbit_norms: horizon must be nonnegative");
    if (horizon > kMaxDenseHorizon) throw HorizonTooLarge("orbit_norms: dense horizon exceeds 10^3");
    if (x.size() != a.dim()) throw InvalidArgument("orbit_norms: vector length does not match matrix dimension");
    OrbitSegment seg;
    seg.backend = "dense";
    seg.horizon = horizon;
    const std::size_t len = static_cast<std::size_t>(2 * horizon + 1);
    seg.norms.assign(len, 0.0);
    seg.logNorms.assign(len, -std::numeric_limits<double>::infinity());
    const double n0 = norm2(x);
    if (n0 == 0.0) return seg;
    const ComplexMatrix ainv = inverse(a);
    auto sweep = [&](const ComplexMatrix& m, int dir) {
        CVector v = (1.0 / n0) * x;
        double logScale = std::log(n0);
        for (std::int64_t n = 1; n <= horizon; ++n) {
            v = m * v;
            const double nv = norm2(v);
            logScale += std::log(nv);
            v = (1.0 / nv) * v;
            const auto i = static_cast<std::size_t>(horizon + dir * n);
            seg.logNorms[i] = logScale;
            seg.norms[i] = std::exp(logScale);
        }
    };
    seg.logNorms[static_cast<std::size_t>(horizon)] = std::log(n0);
    seg.norms[static_cast<std::size_t>(horizon)] = n0;
    sweep(a, 1);
    sweep(ainv, -1);
    return seg;
}

HomoclinicReport is_r_homoclinic(const WeightSequence& w, const LatticeVector& x, double r, std::int64_t horizon,
                                 double relSlack) {
    if (!(r > 0.0)) throw InvalidArgument("is_r_homoclinic: r must be positive");
    if (horizon < 0) throw InvalidArgument("is_r_homoclinic: horizon must be nonnegative");
    HomoclinicReport rep;
    rep.r = r;
    rep.horizon = horizon;
    rep.exact = true;
    rep.forwardRatio = w.right_tail();
    rep.backwardRatio = 1.0 / w.left_tail();
    if (x.is_zero()) {
        rep.witnessIndex = 0;
        rep.isRHomoclinicAtHorizon = true;
        return rep;
    }
    if (rep.forwardRatio > 1.0 || rep.backwardRatio > 1.0) {
        rep.certifiedDivergent = true;
        return rep;
    }
    const Transient t = transient(w, x);
    const auto series = shift_series(w, x, t.back, t.fwd);
    std::vector<NormValue> fwd(series.begin() + t.back, series.end());
    std::vector<NormValue> bwd(series.begin(), series.begin() + t.back + 1);
    std::reverse(bwd.begin(), bwd.end());
    const double rr = r * (1.0 + relSlack);
    const double logR = std::log(rr);
    const auto lf = last_violation(fwd, rep.forwardRatio, rr, logR);
    const auto lb = last_violation(bwd, rep.backwardRatio, rr, logR);
    if (!lf || !lb) return rep; // bounded but stays above r forever in some direction
    rep.witnessIndex = std::max(*lf, *lb) + 1;
    rep.isRHomoclinicAtHorizon = *rep.witnessIndex <= horizon;
    return rep;
}

HomoclinicReport is_r_homoclinic(const ComplexMatrix& a, const CVector& x, double r, std::int64_t horizon,
                                 std::int64_t scanLimit, double relSlack) {
    if (!(r > 0.0)) throw InvalidArgument("is_r_homoclinic: r must be positive");
    if (horizon < 0) throw InvalidArgument("is_r_homoclinic: horizon must be nonnegative");
    if (scanLimit <= 0) scanLimit = std::min(kMaxDenseHorizon, std::max(2 * horizon, horizon + 64));
    if (scanLimit < horizon) throw InvalidArgument("is_r_homoclinic: scan limit below horizon");
    HomoclinicReport rep;
    rep.r = r;
    rep.horizon = horizon;
    if (norm2(x) == 0.0) {
        rep.exact = true;
        rep.witnessIndex = 0;
        rep.isRHomoclinicAtHorizon = true;
        return rep;
    }
    if (is_hyperbolic(a)) {
        // every nonzero vector has a stable or unstable component, and that
        // component blows up backwards or forwards
        rep.exact = true;
        rep.certifiedDivergent = true;
        return rep;
    }
    const OrbitSegment seg = orbit_norms(a, x, scanLimit);
    const double rr = r * (1.0 + relSlack);
    std::int64_t last = -1;
    for (std::int64_t n = -scanLimit; n <= scanLimit; ++n)
        if (!(seg.norm_at(n) <= rr)) last = std::max(last, n < 0 ? -n : n);
    if (last < scanLimit) {
        rep.witnessIndex = last + 1;
        rep.isRHomoclinicAtHorizon = *rep.witnessIndex <= horizon;
    }
    return rep;
}

namespace {

constexpr double kScalingSlack = 1e-12;

} // namespace

bool homoclinic_scaling_check(const WeightSequence& w, const LatticeVector& x, double r, double rPrime,
                              std::int64_t horizon) {
    if (!(r > 0.0 && rPrime > 0.0)) throw InvalidArgument("homoclinic_scaling_check: radii must be positive");
    const HomoclinicReport base = is_r_homoclinic(w, x, rPrime, horizon);
    if (!base.isRHomoclinicAtHorizon) {
        throw InvalidArgument("homoclinic_scaling_check: x is not r'-homoclinic at the horizon");
    }
    const HomoclinicReport scaled = is_r_homoclinic(w, (r / rPrime) * x, r, horizon, kScalingSlack);
    return scaled.isRHomoclinicAtHorizon;
}

bool homoclinic_scaling_check(const ComplexMatrix& a, const CVector& x, double r, double rPrime,
                              std::int64_t horizon) {
    if (!(r > 0.0 && rPrime > 0.0)) throw InvalidArgument("homoclinic_scaling_check: radii must be positive");
    const HomoclinicReport base = is_r_homoclinic(a, x, rPrime, horizon);
    if (!base.isRHomoclinicAtHorizon) {
        throw InvalidArgument("homoclinic_scaling_check: x is not r'-homoclinic at the horizon");
    }
    const HomoclinicReport scaled = is_r_homoclinic(a, (r / rPrime) * x, r, horizon, 0, kScalingSlack);
    return scaled.isRHomoclinicAtHorizon;
}

EcReport ec_membership(const WeightSequence& w, const LatticeVector& x, double bound, std::int64_t horizon) {
    if (horizon < 0) throw InvalidArgument("ec_membership: horizon must be nonnegative");
    EcReport rep;
    rep.bound = bound;
    rep.exact = true;
    if (x.is_zero()) {
        rep.member = true;
        rep.withinBound = 0.0 <= bound;
        return rep;
    }
    if (w.right_tail() > 1.0 || w.left_tail() < 1.0) {
        rep.supNorm = std::numeric_limits<double>::infinity();
        return rep;
    }
    const Transient t = transient(w, x);
    double sup = 0.0;
    for (const auto& v : shift_series(w, x, t.back, t.fwd)) sup = std::max(sup, v.value);
    rep.member = true;
    rep.supNorm = sup;
    rep.withinBound = sup <= bound;
    return rep;
}

EcReport ec_membership(const ComplexMatrix& a, const CVector& x, double bound, std::int64_t horizon) {
    EcReport rep;
    rep.bound = bound;
    if (norm2(x) == 0.0) {
        rep.member = true;
        rep.exact = true;
        rep.withinBound = 0.0 <= bound;
        return rep;
    }
    const OrbitSegment seg = orbit_norms(a, x, horizon);
    rep.supNorm = *std::max_element(seg.norms.begin(), seg.norms.end());
    rep.withinBound = rep.supNorm <= bound;
    if (is_hyperbolic(a)) {
        rep.exact = true;
        rep.member = false;
        return rep;
    }
    rep.member = rep.withinBound;
    return rep;
}

} // namespace oplab
