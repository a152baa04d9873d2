#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oplab/aluthge/aluthge.hpp"
#include "oplab/dynamics/orbits.hpp"
#include "oplab/dynamics/shadowing.hpp"
#include "oplab/errors.hpp"
#include "oplab/linalg/random.hpp"
#include "oplab/linalg/spectral.hpp"
#include "oplab/shift/shift_algebra.hpp"

using namespace oplab;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

// Records the first failure; later failures only bump the count.
class Tally {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures_++ == 0) first_ = what;
    }
    Outcome outcome(std::string summary) const {
        if (failures_ == 0) return {true, std::move(summary)};
        return {false, std::to_string(failures_) + " failure(s), first: " + first_};
    }

private:
    int failures_ = 0;
    std::string first_;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const WeightSequence kSh = WeightSequence::two_tail(2.0, 0.5, 1);
const WeightSequence kHyp = WeightSequence::two_tail(2.0, 3.0, 1);
const double kLambdas[] = {0.25, 0.5, 0.75};

Outcome fixed_points() {
    Tally t;
    double worst = 0.0;
    for (double lambda : kLambdas) {
        for (double c : {0.3, 1.0, 2.0, 3.7}) {
            const WeightSequence w = WeightSequence::constant(c);
            const double d = shift_distance(aluthge_weights(w, lambda), w);
            worst = std::max(worst, d);
            t.expect(d <= 1e-10, "constant " + fmt(c));
        }
    }
    Rng rng(1001);
    for (int trial = 0; trial < 50; ++trial) {
        CVector spec(2 + trial % 7);
        for (auto& z : spec) z = std::polar(rng.uniform(0.2, 3.0), rng.uniform(-3.1, 3.1));
        const ComplexMatrix a = random_normal_with_spectrum(spec, rng);
        for (double lambda : kLambdas) {
            const double d = max_abs_diff(aluthge_dense(a, lambda), a);
            worst = std::max(worst, d);
            t.expect(d <= 1e-10, "normal trial " + std::to_string(trial));
        }
    }
    return t.outcome("max deviation " + fmt(worst));
}

Outcome spectrum_preservation() {
    Tally t;
    Rng rng(1002);
    double worstStep = 0.0, worstTotal = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix a = random_invertible(2 + trial % 7, rng);
        const AluthgeTrace tr = iterate_dense(a, 0.5, 200, 1e-300);
        t.expect(tr.iterations() == 200, "trial " + std::to_string(trial) + " stopped early");
        for (std::size_t i = 1; i < tr.spectra.size(); ++i) {
            const double step = hausdorff_distance(tr.spectra[i].eigenvalues, tr.spectra[i - 1].eigenvalues);
            worstStep = std::max(worstStep, step);
            t.expect(step < 1e-6, "trial " + std::to_string(trial) + " step " + std::to_string(i));
        }
        worstTotal = std::max(worstTotal, tr.max_spectral_drift());
        t.expect(tr.max_spectral_drift() < 1e-5, "trial " + std::to_string(trial) + " accumulated");
    }
    return t.outcome("max per-step " + fmt(worstStep) + ", max accumulated " + fmt(worstTotal));
}

Outcome finite_dim_convergence() {
    Tally t;
    Rng rng(1003);
    double worst = 0.0;
    std::int64_t maxIters = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const AluthgeTrace tr = iterate_dense(random_invertible(4, rng), 0.5, kMaxAluthgeIterations);
        const double d = commutator_defect(tr.last);
        worst = std::max(worst, d);
        maxIters = std::max(maxIters, tr.iterations());
        t.expect(d < 1e-6, "trial " + std::to_string(trial) + " defect " + fmt(d));
    }
    return t.outcome("max defect " + fmt(worst) + ", max iterations " + std::to_string(maxIters));
}

Outcome shifted_hyperbolic_divergence() {
    Tally t;
    double worstDiff = 0.0;
    WeightSequence wk = kSh;
    for (std::int64_t k = 0; k <= 256; ++k) {
        if (k > 0) {
            wk = aluthge_weights_iterate(kSh, 0.5, k);
            for (std::int64_t n = -k - 4; n <= k + 4; ++n) {
                const double d = std::abs(wk.at(n) - aluthge_weight_closed_form(kSh, 0.5, k, n));
                worstDiff = std::max(worstDiff, d);
                t.expect(d <= 1e-10, "closed form k=" + std::to_string(k) + " n=" + std::to_string(n));
            }
        }
        t.expect(distance_to_constant(wk) >= 0.75, "distance at k=" + std::to_string(k));
    }
    const DivergenceCertificate c = divergence_certificate_shift(kSh, 0.5, 16, 64, -8);
    t.expect(c.gap >= 0.3, "gap " + fmt(c.gap));
    t.expect(c.tailLowerBound == 0.75, "tail bound " + fmt(c.tailLowerBound));
    return t.outcome("closed form max diff " + fmt(worstDiff) + ", gap " + fmt(c.gap) + ", tail bound " +
                     fmt(c.tailLowerBound));
}

Outcome hyperbolic_divergence() {
    Tally t;
    const ShiftClass cls = classify(kHyp);
    t.expect(cls.verdict == ShiftVerdict::UniformExpansion, "verdict " + std::string(to_string(cls.verdict)));
    t.expect(cls.annulus.inner == 2.0 && cls.annulus.outer == 3.0, "annulus");
    t.expect(is_hyponormal(kHyp), "hyponormality");
    const DivergenceCertificate c = divergence_certificate_shift(kHyp, 0.5, 16, 64, -8);
    t.expect(c.gap >= 0.3, "gap " + fmt(c.gap));
    double minDist = INFINITY;
    for (std::int64_t k = 0; k <= 64; ++k) {
        const double d = distance_to_constant(aluthge_weights_iterate(kHyp, 0.5, k));
        minDist = std::min(minDist, d);
        t.expect(d >= 0.5, "distance at k=" + std::to_string(k));
    }
    return t.outcome("annulus [2, 3], gap " + fmt(c.gap) + ", min distance " + fmt(minDist));
}

Outcome classification_invariance() {
    Tally t;
    std::set<ShiftVerdict> seen;
    const double grid[] = {0.1, 0.25, 0.5, 0.75, 0.9};
    for (const auto& s : shift_library()) {
        const ShiftVerdict v0 = classify(s.weights).verdict;
        seen.insert(v0);
        for (double lambda : grid) {
            WeightSequence w = s.weights;
            for (int k = 1; k <= 64; ++k) {
                w = aluthge_weights(w, lambda);
                t.expect(classify(w).verdict == v0, s.name + " lambda=" + fmt(lambda) + " k=" + std::to_string(k));
            }
        }
    }
    t.expect(shift_library().size() == 12, "library size");
    t.expect(seen.size() == 5, "verdicts covered " + std::to_string(seen.size()));
    return t.outcome(std::to_string(shift_library().size()) + " shifts, " + std::to_string(seen.size()) +
                     " verdicts");
}

Outcome conjugacy_invariance() {
    Tally t;
    Rng rng(1007);
    for (const auto& s : shift_library()) {
        const ShiftVerdict v0 = classify(s.weights).verdict;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> core(1 + static_cast<std::size_t>(rng.uniform(0.0, 5.0)));
            for (auto& v : core) v = rng.uniform(0.1, 10.0);
            const double tail = rng.uniform(0.5, 2.0);
            const WeightSequence d(static_cast<std::int64_t>(rng.uniform(-4.0, 4.0)), core, tail, tail);
            t.expect(classify(diagonal_conjugate(s.weights, d)).verdict == v0, s.name);
        }
    }
    int hyperbolicCount = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const ComplexMatrix a = trial % 2 == 0 ? random_hyperbolic(n, rng) : random_unitary(n, rng);
        const ComplexMatrix s = random_well_conditioned(n, rng);
        const bool h = is_hyperbolic(a);
        hyperbolicCount += h;
        t.expect(is_hyperbolic(s * a * inverse(s)) == h, "dense trial " + std::to_string(trial));
    }
    t.expect(hyperbolicCount == 25, "dense hyperbolic count " + std::to_string(hyperbolicCount));
    return t.outcome("600 shift conjugations, 50 dense similarities");
}

Outcome shadowing_pipeline() {
    Tally t;
    Rng rng(1008);
    double worstRatio = 0.0, worstResidual = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_hyperbolic(4 + trial % 5, rng);
        const double k = shadowing_constant_estimate(a);
        for (double delta : {1e-2, 1e-3, 1e-4}) {
            const DensePseudoOrbit po = random_bounded_pseudo_orbit(a, 500, delta, rng);
            const auto res = shadow_solve(a, po);
            const std::string tag = "trial " + std::to_string(trial) + " delta " + fmt(delta);
            t.expect(po.maxDefect < delta, tag + " defect");
            t.expect(res.epsilon <= k * delta, tag + " eps " + fmt(res.epsilon) + " > K delta " + fmt(k * delta));
            t.expect(res.recursionResidual < 1e-8, tag + " residual " + fmt(res.recursionResidual));
            worstRatio = std::max(worstRatio, res.epsilon / (k * delta));
            worstResidual = std::max(worstResidual, res.recursionResidual);
        }
    }
    return t.outcome("max eps/(K delta) " + fmt(worstRatio) + ", max residual " + fmt(worstResidual));
}

LatticeVector random_lattice(Rng& rng, std::int64_t lo, std::int64_t hi) {
    LatticeVector v;
    const int terms = 1 + static_cast<int>(rng.uniform(0.0, 4.0));
    for (int i = 0; i < terms; ++i)
        v.set(lo + static_cast<std::int64_t>(rng.uniform(0.0, static_cast<double>(hi - lo + 1))), rng.complex_normal());
    return v;
}

Outcome homoclinic_suite() {
    Tally t;
    for (std::int64_t m = -32; m <= 32; ++m) {
        const HomoclinicReport h = is_r_homoclinic(kSh, LatticeVector::basis(m), 1.0, 0);
        t.expect(h.exact && h.witnessIndex.has_value(), "(2|1/2) e_" + std::to_string(m));
        const HomoclinicReport d = is_r_homoclinic(kHyp, LatticeVector::basis(m), 10.0, 0);
        t.expect(d.exact && !d.witnessIndex && d.certifiedDivergent, "(2|3) e_" + std::to_string(m));
    }
    Rng rng(1009);
    for (int trial = 0; trial < 100; ++trial) {
        const LatticeVector x = random_lattice(rng, -10, 10);
        const double rp = rng.uniform(0.05, 5.0);
        const HomoclinicReport h = is_r_homoclinic(kSh, x, rp, 0);
        if (!h.witnessIndex) {
            t.expect(false, "random witness " + std::to_string(trial));
            continue;
        }
        t.expect(homoclinic_scaling_check(kSh, x, rng.uniform(1e-8, 100.0), rp, *h.witnessIndex),
                 "scaling " + std::to_string(trial));
    }
    int members = 0;
    for (const auto& s : shift_library()) {
        const ShiftClass cls = classify(s.weights);
        for (std::int64_t m = -8; m <= 8; ++m) {
            const LatticeVector x = LatticeVector::basis(m);
            const std::string tag = s.name + " e_" + std::to_string(m);
            const HomoclinicReport h = is_r_homoclinic(s.weights, x, 1.0, 0);
            const EcReport ec = ec_membership(s.weights, x, 1e300, 0);
            if (h.witnessIndex) t.expect(ec.member, tag + " H_r not in E^c");
            if (!ec.member || !cls.generalizedHyperbolic) continue;
            const LemmaReport rep = lemma_pipeline(s.weights, x, 1.0, 1e-6, 60);
            t.expect(rep.ok && rep.distanceToShadow <= 1e-6 && rep.homoclinic.witnessIndex.has_value(),
                     tag + " E^c not in closure of H_r");
            ++members;
        }
    }
    t.expect(members > 0, "sandwich checked no members");
    return t.outcome("65 + 65 basis vectors, 100 scaling witnesses, " + std::to_string(members) +
                     " sandwich members");
}

Outcome backend_consistency() {
    Tally t;
    double worst = 0.0;
    std::vector<WeightSequence> shifts{kSh, kHyp, WeightSequence(-3, {1.5, 0.7, 2.2, 1.1, 0.9}, 2.0, 0.5)};
    for (const auto& s : shift_library()) shifts.push_back(s.weights);
    for (const auto& w : shifts) {
        const ComplexMatrix dense = truncate_to_dense_cyclic(w, -32, 31);
        for (double lambda : kLambdas) {
            const ComplexMatrix d = aluthge_dense(dense, lambda);
            const WeightSequence aw = aluthge_weights(w, lambda);
            for (std::int64_t n = -16; n <= 16; ++n) {
                const auto i = static_cast<std::size_t>(n + 32);
                const double diff = std::abs(d(i + 1, i) - Complex(aw.at(n)));
                worst = std::max(worst, diff);
                t.expect(diff <= 1e-8, "n=" + std::to_string(n) + " lambda=" + fmt(lambda));
            }
        }
    }
    return t.outcome(std::to_string(shifts.size()) + " shifts, max diff " + fmt(worst));
}

Outcome hyperbolicity_openness() {
    Tally t;
    Rng rng(1011);
    double minRadius = INFINITY;
    for (int trial = 0; trial < 20; ++trial) {
        const std::string tag = "trial " + std::to_string(trial);
        const AluthgeTrace tr = iterate_dense(random_hyperbolic(2 + trial % 7, rng), 0.5);
        const HyperbolicLimitReport r = hyperbolic_limit_probe(tr, rng);
        t.expect(r.status == LimitStatus::HyperbolicLimit, tag + " status");
        t.expect(r.perturbationsTried == 20 && r.perturbationsHyperbolic == 20,
                 tag + " perturbations " + std::to_string(r.perturbationsHyperbolic));
        t.expect(r.crossingDetected, tag + " crossing");
        minRadius = std::min(minRadius, r.safeRadius);
    }
    return t.outcome("20 limits, min safe radius " + fmt(minRadius));
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"fixed points of the transform", fixed_points},
        {"spectrum preservation", spectrum_preservation},
        {"finite-dimensional convergence", finite_dim_convergence},
        {"shifted hyperbolic divergence", shifted_hyperbolic_divergence},
        {"hyperbolic divergence", hyperbolic_divergence},
        {"classification invariance", classification_invariance},
        {"conjugacy invariance", conjugacy_invariance},
        {"shadowing pipeline", shadowing_pipeline},
        {"homoclinic suite", homoclinic_suite},
        {"backend consistency", backend_consistency},
        {"openness of hyperbolicity", hyperbolicity_openness},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.passed;
        std::printf("criterion %2zu %-32s %s  %s\n", i + 1, criteria[i].first.c_str(), o.passed ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
