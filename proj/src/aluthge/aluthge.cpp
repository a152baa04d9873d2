#include "oplab/aluthge/aluthge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oplab/errors.hpp"
#include "oplab/linalg/spectral.hpp"

namespace oplab {

namespace {

void check_lambda(double lambda, const char* op) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument(std::string(op) + ": lambda must lie in (0, 1)");
}

void check_budget(std::int64_t maxIters, const char* op) {
    if (maxIters < 1 || maxIters > kMaxAluthgeIterations) {
        throw InvalidArgument(std::string(op) + ": maxIters must lie in [1, " +
                              std::to_string(kMaxAluthgeIterations) + "]");
    }
}

SpectrumSnapshot snapshot(std::int64_t k, const ComplexMatrix& a, const CVector* reference) {
    SpectrumSnapshot s{k, eigenvalues(a), 0.0};
    if (reference != nullptr) s.drift = hausdorff_distance(s.eigenvalues, *reference);
    return s;
}

std::size_t unstable_count(const CVector& ev) {
    return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [](const Complex& z) { return std::abs(z) > 1.0; }));
}

} // namespace

ComplexMatrix aluthge_dense(const ComplexMatrix& a, double lambda, double tol) {
    check_lambda(lambda, "aluthge_dense");
    const SvdResult s = svd(a, tol);
    if (s.sigma.back() <= tol * s.sigma.front()) {
        throw SingularInput("aluthge_dense: smallest singular value " + std::to_string(s.sigma.back()) +
                            " is below tol * ||A||");
    }
    const std::size_t n = a.dim();
    // M = S^lambda (V* W) S^(1-lambda)
    ComplexMatrix m = s.v.adjoint() * s.u;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = std::pow(s.sigma[i], lambda);
        for (std::size_t j = 0; j < n; ++j) m(i, j) *= left * std::pow(s.sigma[j], 1.0 - lambda);
    }
    return s.v * m * s.v.adjoint();
}

double commutator_defect(const ComplexMatrix& a) {
    const ComplexMatrix ah = a.adjoint();
    return operator_norm(ah * a - a * ah);
}

double AluthgeTrace::max_spectral_drift() const {
    double d = 0.0;
    for (const auto& s : spectra) d = std::max(d, s.drift);
    return d;
}

AluthgeTrace iterate_dense(const ComplexMatrix& a, double lambda, std::int64_t maxIters, double stopTol,
                           const TraceOptions& opts) {
    check_lambda(lambda, "iterate_dense");
    check_budget(maxIters, "iterate_dense");
    if (!(stopTol > 0.0)) throw InvalidArgument("iterate_dense: stopTol must be positive");
    if (opts.snapshotEvery < 1) throw InvalidArgument("iterate_dense: snapshotEvery must be positive");
    require_finite_square(a, "iterate_dense");

    AluthgeTrace t;
    t.lambda = lambda;
    t.stopTol = stopTol;
    t.initial = a;
    t.last = a;
    if (opts.keepIterates) t.iterates.push_back(a);
    t.commutatorDefects.push_back(commutator_defect(a));
    t.spectra.push_back(snapshot(0, a, nullptr));
    const CVector reference = t.spectra.front().eigenvalues;

    for (std::int64_t k = 1; k <= maxIters; ++k) {
        ComplexMatrix next(a.dim());
        try {
            next = aluthge_dense(t.last, lambda);
        } catch (const SingularInput& e) {
            throw SingularInput("iterate_dense: iterate " + std::to_string(k - 1) + " is not invertible (" +
                                e.what() + ")");
        }
        t.stepGaps.push_back(operator_norm(next - t.last));
        t.last = std::move(next);
        t.commutatorDefects.push_back(commutator_defect(t.last));
        if (opts.keepIterates) t.iterates.push_back(t.last);
        t.converged = t.stepGaps.back() < stopTol;
        if (k % opts.snapshotEvery == 0 || t.converged || k == maxIters) {
            t.spectra.push_back(snapshot(k, t.last, &reference));
        }
        if (t.converged) break;
    }
    return t;
}

ShiftAluthgeTrace iterate_shift(const WeightSequence& w, double lambda, std::int64_t maxIters, double stopTol,
                                bool keepIterates) {
    check_lambda(lambda, "iterate_shift");
    check_budget(maxIters, "iterate_shift");
    if (!(stopTol > 0.0)) throw InvalidArgument("iterate_shift: stopTol must be positive");

    ShiftAluthgeTrace t;
    t.lambda = lambda;
    t.stopTol = stopTol;
    t.initial = w;
    t.last = w;
    if (keepIterates) t.iterates.push_back(w);
    t.annuli.push_back(spectrum_annulus(w));
    for (std::int64_t k = 1; k <= maxIters; ++k) {
        WeightSequence next = aluthge_weights(t.last, lambda);
        t.stepGaps.push_back(shift_distance(next, t.last));
        t.last = std::move(next);
        t.annuli.push_back(spectrum_annulus(t.last));
        if (keepIterates) t.iterates.push_back(t.last);
        t.converged = t.stepGaps.back() < stopTol;
        if (t.converged) break;
    }
    return t;
}

DivergenceCertificate divergence_certificate_shift(const WeightSequence& w, double lambda, std::int64_t kSmall,
                                                   std::int64_t kLarge, std::int64_t probeIndex) {
    check_lambda(lambda, "divergence_certificate_shift");
    if (kSmall < 0 || kSmall >= kLarge || kLarge > kMaxShiftIterates) {
        throw InvalidArgument("divergence_certificate_shift: need 0 <= kSmall < kLarge <= " +
                              std::to_string(kMaxShiftIterates));
    }
    if (w.left_tail() == w.right_tail()) {
        throw ConstantWeights("divergence_certificate_shift: tails are equal, the iterates of a shift with "
                              "equal tails have no divergence certificate");
    }

    DivergenceCertificate c;
    c.lambda = lambda;
    c.kSmall = kSmall;
    c.kLarge = kLarge;
    c.probeIndex = probeIndex;
    c.leftTail = w.left_tail();
    c.rightTail = w.right_tail();
    c.tailLowerBound = std::abs(c.leftTail - c.rightTail) / 2.0;

    const WeightSequence small = aluthge_weights_iterate(w, lambda, kSmall);
    const WeightSequence large = aluthge_weights_iterate(w, lambda, kLarge);
    c.valueSmall = small.at(probeIndex);
    c.valueLarge = large.at(probeIndex);
    c.gap = std::abs(c.valueSmall - c.valueLarge);

    const double closedSmall = aluthge_weight_closed_form(w, lambda, kSmall, probeIndex);
    const double closedLarge = aluthge_weight_closed_form(w, lambda, kLarge, probeIndex);
    c.gapClosedForm = std::abs(closedSmall - closedLarge);
    if (std::abs(closedSmall - c.valueSmall) > 1e-10 || std::abs(closedLarge - c.valueLarge) > 1e-10) {
        throw ContractViolation("divergence_certificate_shift: iterated map and closed form disagree at the probe");
    }

    c.iterateDistance = shift_distance(small, large);
    if (c.iterateDistance < c.gap) {
        throw ContractViolation("divergence_certificate_shift: iterate distance below the probe gap");
    }
    for (const WeightSequence* it : {&small, &large}) {
        if (it->left_tail() != c.leftTail || it->right_tail() != c.rightTail) {
            throw ContractViolation("divergence_certificate_shift: tails were not preserved");
        }
    }
    return c;
}

DivergenceCertificate divergence_certificate_shift(const WeightSequence& w, double lambda, std::int64_t k) {
    const auto n = -static_cast<std::int64_t>(std::llround(lambda * static_cast<double>(k)));
    return divergence_certificate_shift(w, lambda, k, 4 * k, n);
}

std::string_view to_string(LimitStatus s) {
    return s == LimitStatus::HyperbolicLimit ? "HyperbolicLimit" : "NotHyperbolicLimit";
}

HyperbolicLimitReport hyperbolic_limit_probe(const AluthgeTrace& trace, Rng& rng, double tol, int perturbations) {
    if (!trace.converged) {
        throw TraceDiverged("hyperbolic_limit_probe: step gaps never fell below " + std::to_string(trace.stopTol) +
                            " in " + std::to_string(trace.iterations()) + " iterations");
    }
    if (perturbations < 0) throw InvalidArgument("hyperbolic_limit_probe: perturbations must be nonnegative");

    const ComplexMatrix& limit = trace.last;
    const std::size_t n = limit.dim();
    const SchurForm sf = schur_decompose(limit);

    HyperbolicLimitReport r;
    r.limitEigenvalues = sf.eigenvalues;
    r.initialEigenvalues = eigenvalues(trace.initial);
    r.spectrumMismatch = hausdorff_distance(r.limitEigenvalues, r.initialEigenvalues);
    r.limitDefect = trace.commutatorDefects.back();
    r.safeRadius = unit_circle_gap(r.limitEigenvalues);
    r.status = is_hyperbolic(limit, tol) ? LimitStatus::HyperbolicLimit : LimitStatus::NotHyperbolicLimit;
    r.initialHyperbolic = is_hyperbolic(trace.initial, tol);
    if (r.status == LimitStatus::NotHyperbolicLimit) return r;

    // Random perturbations of norm safeRadius / 2. The limit is normal, so its
    // eigenvalues move by at most the perturbation norm.
    for (int i = 0; i < perturbations; ++i) {
        ComplexMatrix e = random_gaussian(n, rng);
        e *= 0.5 * r.safeRadius / operator_norm(e);
        ++r.perturbationsTried;
        if (is_hyperbolic(limit + e, tol)) ++r.perturbationsHyperbolic;
    }

    // Push the eigenvalue closest to the circle radially across it along
    // t -> limit + t E with ||E|| = 1. It sits on the circle at t = safeRadius
    // and on the far side (modulus 1 -+ h/2, h = min(safeRadius, 1)) at
    // t = safeRadius + h/2 <= 3 safeRadius, short of the origin.
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(std::abs(sf.eigenvalues[i]) - 1.0) < std::abs(std::abs(sf.eigenvalues[j]) - 1.0)) j = i;
    }
    const Complex z = sf.eigenvalues[j];
    const Complex dir = (std::abs(z) > 1.0 ? -1.0 : 1.0) * z / std::abs(z);
    ComplexMatrix e(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) e(p, q) = dir * sf.unitaryQ(p, j) * std::conj(sf.unitaryQ(q, j));
    r.crossingNorm = 3.0 * r.safeRadius;
    const double h = std::min(r.safeRadius, 1.0);
    ComplexMatrix onCircle = e;
    onCircle *= r.safeRadius;
    ComplexMatrix across = e;
    across *= r.safeRadius + 0.5 * h;
    const bool hitsCircle = !is_hyperbolic(limit + onCircle, tol);
    const bool flips = unstable_count(eigenvalues(limit + across)) != unstable_count(r.limitEigenvalues);
    r.crossingDetected = hitsCircle && flips;
    return r;
}

HyponormalReport hyponormal_divergence_check(const WeightSequence& w, double lambda, std::int64_t kMax) {
    check_lambda(lambda, "hyponormal_divergence_check");
    if (kMax < 4 || kMax > kMaxShiftIterates) {
        throw InvalidArgument("hyponormal_divergence_check: kMax must lie in [4, " +
                              std::to_string(kMaxShiftIterates) + "]");
    }
    if (!is_hyponormal(w)) throw NotHyponormal("hyponormal_divergence_check: weights are not nondecreasing");

    HyponormalReport r;
    const ShiftClass cls = classify(w);
    r.verdict = cls.verdict;
    r.hyperbolic = cls.hyperbolic;

    if (w.is_constant()) {
        r.fixedPoint = true;
        WeightSequence cur = w;
        for (std::int64_t k = 0; k < kMax; ++k) {
            WeightSequence next = aluthge_weights(cur, lambda);
            r.stepGaps.push_back(shift_distance(next, cur));
            cur = std::move(next);
        }
        r.minDistanceToConstant = 0.0;
        return r;
    }

    r.certificate = divergence_certificate_shift(w, lambda, kMax / 4);
    // Every iterate keeps both tails, so its distance to the constants is at
    // least the tail bound; checked here iterate by iterate.
    double minDist = std::numeric_limits<double>::infinity();
    WeightSequence cur = w;
    for (std::int64_t k = 0; k <= kMax; ++k) {
        minDist = std::min(minDist, distance_to_constant(cur));
        if (k < kMax) cur = aluthge_weights(cur, lambda);
    }
    r.minDistanceToConstant = minDist;
    if (minDist < r.certificate->tailLowerBound) {
        throw ContractViolation("hyponormal_divergence_check: an iterate came closer to a constant shift than the "
                                "tail bound allows");
    }
    return r;
}

} // namespace oplab
