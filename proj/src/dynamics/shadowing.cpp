#include "oplab/dynamics/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oplab/errors.hpp"
#include "oplab/shift/shift_algebra.hpp"

namespace oplab {

namespace {

double geometric_q(double supNorm, double delta) {
    const double q = 1.0 - delta / (4.0 * supNorm);
    if (!(q > 0.0)) {
        throw DeltaTooLarge("delta >= 4 sup_n ||T^n x||; no geometric damping exists");
    }
    return q;
}

template <class Vec>
double max_defect(const std::vector<Vec>& defects) {
    double m = 0.0;
    for (const auto& d : defects) {
        if constexpr (std::is_same_v<Vec, CVector>) {
            m = std::max(m, norm2(d));
        } else {
            m = std::max(m, d.norm());
        }
    }
    return m;
}

void check_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be positive and finite");
}

} // namespace

ShiftPseudoOrbit build_pseudo_orbit_from_bounded(const WeightSequence& w, const LatticeVector& x, double delta,
                                                 std::int64_t horizon) {
    check_delta(delta);
    if (horizon < 0) throw InvalidArgument("horizon must be nonnegative");
    if (horizon > kMaxShiftHorizon) throw HorizonTooLarge("pseudo-orbit horizon exceeds 10^4");
    const EcReport ec = ec_membership(w, x, std::numeric_limits<double>::infinity(), horizon);
    if (!ec.member) throw NotBoundedOrbit("vector has an unbounded orbit; no pseudo-orbit can be built from it");

    ShiftPseudoOrbit po;
    po.delta = delta;
    po.first = -horizon;
    const std::size_t len = static_cast<std::size_t>(2 * horizon + 1);
    po.points.resize(len);
    if (!x.is_zero()) {
        const double q = geometric_q(ec.supNorm, delta);
        LatticeVector fwd = x;
        LatticeVector bwd = x;
        po.points[static_cast<std::size_t>(horizon)] = x;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            fwd = apply_shift(w, fwd);
            bwd = apply_shift_inverse(w, bwd);
            const double beta = std::pow(q, static_cast<double>(n));
            po.points[static_cast<std::size_t>(horizon + n)] = beta * fwd;
            po.points[static_cast<std::size_t>(horizon - n)] = beta * bwd;
        }
    }
    for (std::size_t i = 0; i + 1 < len; ++i) po.defects.push_back(po.points[i + 1] - apply_shift(w, po.points[i]));
    po.maxDefect = max_defect(po.defects);
    if (!(po.maxDefect < delta)) {
        throw ContractViolation("constructed pseudo-orbit has a defect >= delta");
    }
    return po;
}

DensePseudoOrbit build_pseudo_orbit_from_bounded(const ComplexMatrix& a, const CVector& x, double delta,
                                                 std::int64_t horizon) {
    check_delta(delta);
    if (horizon < 0) throw InvalidArgument("horizon must be nonnegative");
    const EcReport ec = ec_membership(a, x, std::numeric_limits<double>::infinity(), horizon);
    if (!ec.member) throw NotBoundedOrbit("vector has an unbounded orbit; no pseudo-orbit can be built from it");

    DensePseudoOrbit po;
    po.delta = delta;
    po.first = -horizon;
    const std::size_t len = static_cast<std::size_t>(2 * horizon + 1);
    po.points.assign(len, CVector(a.dim()));
    if (norm2(x) > 0.0) {
        // M is the sup over the window, which is all the defects below depend on
        const double q = geometric_q(ec.supNorm, delta);
        const ComplexMatrix ainv = inverse(a);
        CVector fwd = x;
        CVector bwd = x;
        po.points[static_cast<std::size_t>(horizon)] = x;
        for (std::int64_t n = 1; n <= horizon; ++n) {
            fwd = a * fwd;
            bwd = ainv * bwd;
            const double beta = std::pow(q, static_cast<double>(n));
            po.points[static_cast<std::size_t>(horizon + n)] = beta * fwd;
            po.points[static_cast<std::size_t>(horizon - n)] = beta * bwd;
        }
    }
    for (std::size_t i = 0; i + 1 < len; ++i) po.defects.push_back(po.points[i + 1] - a * po.points[i]);
    po.maxDefect = max_defect(po.defects);
    if (!(po.maxDefect < delta)) {
        throw ContractViolation("constructed pseudo-orbit has a defect >= delta");
    }
    return po;
}

std::int64_t pseudo_orbit_decay_index(double supNorm, double delta, double target) {
    check_delta(delta);
    if (!(target > 0.0)) throw InvalidArgument("target must be positive");
    if (supNorm <= target) return 0;
    const double q = geometric_q(supNorm, delta);
    auto n = static_cast<std::int64_t>(std::ceil(std::log(target / supNorm) / std::log(q)));
    while (n > 0 && std::pow(q, static_cast<double>(n - 1)) * supNorm <= target) --n;
    while (std::pow(q, static_cast<double>(n)) * supNorm > target) ++n;
    return n;
}

DensePseudoOrbit pseudo_orbit_from_points(const ComplexMatrix& a, std::vector<CVector> points, std::int64_t first,
                                          double delta) {
    check_delta(delta);
    if (points.empty()) throw InvalidArgument("pseudo-orbit needs at least one point");
    for (const auto& p : points)
        if (p.size() != a.dim()) throw InvalidArgument("pseudo-orbit point has the wrong dimension");
    DensePseudoOrbit po;
    po.delta = delta;
    po.first = first;
    po.points = std::move(points);
    for (std::size_t i = 0; i + 1 < po.points.size(); ++i) po.defects.push_back(po.points[i + 1] - a * po.points[i]);
    po.maxDefect = max_defect(po.defects);
    if (!(po.maxDefect < delta)) {
        throw InvalidArgument("sequence is not a delta-pseudo-orbit: max defect " + std::to_string(po.maxDefect));
    }
    return po;
}

namespace {

CVector random_vector(std::size_t n, Rng& rng, double radius) {
    CVector v(n);
    for (auto& z : v) z = rng.complex_normal();
    const double nv = norm2(v);
    return (radius / nv) * v;
}

} // namespace

DensePseudoOrbit random_bounded_pseudo_orbit(const ComplexMatrix& a, std::int64_t steps, double delta, Rng& rng) {
    check_delta(delta);
    if (steps < 1) throw InvalidArgument("pseudo-orbit needs at least one step");
    if (steps > kMaxDenseHorizon) throw HorizonTooLarge("pseudo-orbit length exceeds 10^3 steps");
    const SpectralSplit split = spectral_split(a);
    const std::size_t n = a.dim();
    const std::size_t len = static_cast<std::size_t>(steps + 1);
    const ComplexMatrix ainv = inverse(a);
    const double ns = std::max(operator_norm(split.stableProjection), 1.0);
    const double nu = std::max(operator_norm(split.unstableProjection), 1.0);
    // 0.99 keeps the projected noise strictly below delta / 2 after rounding
    const double rs = 0.99 * delta / (2.0 * ns);
    const double ru = 0.99 * delta / (2.0 * nu);

    std::vector<CVector> s(len), u(len);
    s[0] = split.stableProjection * random_vector(n, rng, 1.0);
    for (std::size_t i = 0; i + 1 < len; ++i) {
        const CVector e = random_vector(n, rng, rng.uniform() * rs);
        s[i + 1] = split.stableProjection * (a * s[i] + e);
    }
    u[len - 1] = split.unstableProjection * random_vector(n, rng, 1.0);
    for (std::size_t i = len - 1; i-- > 0;) {
        const CVector f = random_vector(n, rng, rng.uniform() * ru);
        u[i] = split.unstableProjection * (ainv * (u[i + 1] - split.unstableProjection * f));
    }
    std::vector<CVector> points(len);
    for (std::size_t i = 0; i < len; ++i) points[i] = s[i] + u[i];
    return pseudo_orbit_from_points(a, std::move(points), 0, delta);
}

double shadowing_constant_estimate(const ComplexMatrix& a) {
    const SpectralSplit split = spectral_split(a);
    double k = 0.0;
    if (split.stableDim > 0) k += split.boundConstant / (1.0 - split.stableRate);
    if (split.unstableDim > 0) {
        const double inv = 1.0 / split.unstableRate;
        k += split.boundConstant * inv / (1.0 - inv);
    }
    return k;
}

ShadowResult<CVector> shadow_solve(const ComplexMatrix& a, const DensePseudoOrbit& po) {
    if (po.first > 0 || po.last() < 0) throw InvalidArgument("shadow_solve: pseudo-orbit window must contain n = 0");
    const SpectralSplit split = spectral_split(a);
    const ComplexMatrix ainv = inverse(a);
    const std::size_t len = po.points.size();
    const std::size_t n = a.dim();

    // c_n = s_n - u_n with s_{n+1} = A s_n + P_s d_n (s = 0 before the window) and
    // u_n = A^-1 (u_{n+1} + P_u d_n) (u = 0 after it). The projections are
    // re-applied every step so rounding never feeds the expanding direction.
    std::vector<CVector> s(len, CVector(n)), u(len, CVector(n));
    for (std::size_t i = 0; i + 1 < len; ++i)
        s[i + 1] = split.stableProjection * (a * s[i] + po.defects[i]);
    for (std::size_t i = len - 1; i-- > 0;)
        u[i] = split.unstableProjection * (ainv * (u[i + 1] + po.defects[i]));

    ShadowResult<CVector> out;
    std::vector<CVector> c(len);
    for (std::size_t i = 0; i < len; ++i) {
        c[i] = s[i] - u[i];
        out.perStepErrors.push_back(norm2(c[i]));
    }
    const std::size_t origin = static_cast<std::size_t>(-po.first);
    out.shadowPoint = po.points[origin] - c[origin];
    out.epsilon = *std::max_element(out.perStepErrors.begin(), out.perStepErrors.end());
    for (std::size_t i = 0; i + 1 < len; ++i) {
        out.recursionResidual = std::max(out.recursionResidual, norm2(c[i + 1] - a * c[i] - po.defects[i]));
    }
    out.shadowingConstant = shadowing_constant_estimate(a);
    out.guaranteedBound = out.shadowingConstant * po.delta;
    out.boundHolds = out.epsilon <= out.guaranteedBound;
    return out;
}

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

// sup over m in [lo, hi] of sign * sum_{i<j} log alpha_{m+i}; lo/hi may be infinite.
double sup_window_log(const WeightSequence& w, std::int64_t lo, std::int64_t hi, int j, double sign) {
    if (j == 0) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    const std::int64_t a = w.core_start() - j - 1;
    const std::int64_t b = w.core_end() + 1;
    if (lo < a) best = std::max(best, sign * j * std::log(w.left_tail()));
    if (hi > b) best = std::max(best, sign * j * std::log(w.right_tail()));
    for (std::int64_t m = std::max(lo, a); m <= std::min(hi, b); ++m) {
        double acc = 0.0;
        for (int i = 0; i < j; ++i) acc += std::log(w.at(m + i));
        best = std::max(best, sign * acc);
    }
    return best;
}

struct PowerRate {
    double rate = 0.0;
    double constant = 1.0;
};

// Given a norm family k -> ||X^k|| = exp(logNorm(k)), find p with ||X^p|| < 1 and
// return rate = ||X^p||^(1/p), constant = max_{j<p} ||X^j|| / rate^j.
template <class F>
PowerRate power_rate(F logNorm) {
    for (int p = 1; p <= 4096; p = (p < 16) ? p + 1 : 2 * p) {
        const double lp = logNorm(p);
        if (!(lp < 0.0)) continue;
        PowerRate out;
        out.rate = std::exp(lp / p);
        double c = 1.0;
        for (int j = 1; j < p; ++j) c = std::max(c, std::exp(logNorm(j) - j * lp / p));
        out.constant = c;
        return out;
    }
    throw ContractViolation("no contracting power found for a generalized hyperbolic shift");
}

} // namespace

ShiftSplitting shift_splitting(const WeightSequence& w) {
    const ShiftClass cls = classify(w);
    ShiftSplitting out;
    switch (cls.verdict) {
    case ShiftVerdict::UniformContraction: {
        out.kind = ShiftSplitting::Kind::AllStable;
        const auto pr = power_rate([&](int j) { return sup_window_log(w, kNegInf, kPosInf, j, 1.0); });
        out.rateM = pr.rate;
        out.constM = pr.constant;
        out.shadowingConstant = out.constM / (1.0 - out.rateM);
        return out;
    }
    case ShiftVerdict::UniformExpansion: {
        out.kind = ShiftSplitting::Kind::AllUnstable;
        const auto pr = power_rate([&](int j) { return sup_window_log(w, kNegInf, kPosInf, j, -1.0); });
        out.rateN = pr.rate;
        out.constN = pr.constant;
        out.shadowingConstant = out.constN * out.rateN / (1.0 - out.rateN);
        return out;
    }
    case ShiftVerdict::ShiftedHyperbolic: {
        const std::int64_t s = cls.split->splitPoint;
        out.kind = ShiftSplitting::Kind::Index;
        out.splitPoint = s;
        // ||T^j P_M|| = sup_{n>=s} prod_{i<j} alpha_{n+i}
        const auto pm = power_rate([&](int j) { return sup_window_log(w, s, kPosInf, j, 1.0); });
        // ||T^-j P_N|| = sup_{n<s} prod_{i=1..j} 1/alpha_{n-i}, window start m = n - j <= s - 1 - j
        const auto pn = power_rate([&](int j) { return sup_window_log(w, kNegInf, s - 1 - j, j, -1.0); });
        out.rateM = pm.rate;
        out.constM = pm.constant;
        out.rateN = pn.rate;
        out.constN = pn.constant;
        out.shadowingConstant = out.constM / (1.0 - out.rateM) + out.constN * out.rateN / (1.0 - out.rateN);
        return out;
    }
    default:
        throw NotShadowing("shift with verdict " + std::string(to_string(cls.verdict)) +
                           " is not generalized hyperbolic");
    }
}

ShadowResult<LatticeVector> shadow_solve_shift(const WeightSequence& w, const ShiftPseudoOrbit& po) {
    if (po.first > 0 || po.last() < 0) {
        throw InvalidArgument("shadow_solve_shift: pseudo-orbit window must contain n = 0");
    }
    const ShiftSplitting sp = shift_splitting(w);
    auto projM = [&](const LatticeVector& v) {
        switch (sp.kind) {
        case ShiftSplitting::Kind::AllStable: return v;
        case ShiftSplitting::Kind::AllUnstable: return LatticeVector{};
        default: return project_from(v, sp.splitPoint);
        }
    };
    auto projN = [&](const LatticeVector& v) {
        switch (sp.kind) {
        case ShiftSplitting::Kind::AllStable: return LatticeVector{};
        case ShiftSplitting::Kind::AllUnstable: return v;
        default: return project_below(v, sp.splitPoint);
        }
    };
    const std::size_t len = po.points.size();
    std::vector<LatticeVector> s(len), u(len);
    for (std::size_t i = 0; i + 1 < len; ++i) s[i + 1] = apply_shift(w, s[i]) + projM(po.defects[i]);
    for (std::size_t i = len - 1; i-- > 0;) u[i] = apply_shift_inverse(w, u[i + 1] + projN(po.defects[i]));

    ShadowResult<LatticeVector> out;
    std::vector<LatticeVector> c(len);
    for (std::size_t i = 0; i < len; ++i) {
        c[i] = s[i] - u[i];
        out.perStepErrors.push_back(c[i].norm());
    }
    const std::size_t origin = static_cast<std::size_t>(-po.first);
    out.shadowPoint = po.points[origin] - c[origin];
    out.epsilon = *std::max_element(out.perStepErrors.begin(), out.perStepErrors.end());
    for (std::size_t i = 0; i + 1 < len; ++i) {
        out.recursionResidual =
            std::max(out.recursionResidual, (c[i + 1] - apply_shift(w, c[i]) - po.defects[i]).norm());
    }
    out.shadowingConstant = sp.shadowingConstant;
    out.guaranteedBound = sp.shadowingConstant * po.delta;
    out.boundHolds = out.epsilon <= out.guaranteedBound;
    return out;
}

LemmaReport lemma_pipeline(const WeightSequence& w, const LatticeVector& x, double r, double epsilon,
                           std::int64_t horizon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("lemma_pipeline: epsilon must be positive");
    if (!(r > 0.0)) throw InvalidArgument("lemma_pipeline: r must be positive");
    const ShiftSplitting sp = shift_splitting(w);
    LemmaReport rep;
    rep.epsilon = epsilon;
    rep.shadowingConstant = sp.shadowingConstant;
    rep.delta = epsilon / (2.0 * sp.shadowingConstant);
    const EcReport ec = ec_membership(w, x, std::numeric_limits<double>::infinity(), horizon);
    rep.supNorm = ec.supNorm;
    const ShiftPseudoOrbit po = build_pseudo_orbit_from_bounded(w, x, rep.delta, horizon);
    rep.maxDefect = po.maxDefect;
    const ShadowResult<LatticeVector> sh = shadow_solve_shift(w, po);
    rep.shadowEpsilon = sh.epsilon;
    rep.shadowPoint = sh.shadowPoint;
    rep.distanceToShadow = (x - sh.shadowPoint).norm();
    rep.homoclinic = is_r_homoclinic(w, sh.shadowPoint, r, horizon);
    rep.ok = rep.maxDefect < rep.delta && rep.distanceToShadow <= epsilon / 2.0 && rep.homoclinic.witnessIndex;
    return rep;
}

} // namespace oplab
