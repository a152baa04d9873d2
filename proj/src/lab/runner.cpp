#include "oplab/lab/runner.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <set>

#include "oplab/dynamics/shadowing.hpp"
#include "oplab/linalg/spectral.hpp"
#include "oplab/version.hpp"

namespace oplab {

namespace {

constexpr double kLambdaGrid[] = {0.25, 0.5, 0.75};

bool is_shift(const ExperimentConfig& c) { return std::holds_alternative<WeightSequence>(c.op->value); }

const WeightSequence& weights_operand(const ExperimentConfig& c) {
    if (!is_shift(c)) throw ConfigInvalid("operator", std::string(to_string(c.kind)) + " needs a weight sequence");
    return std::get<WeightSequence>(c.op->value);
}

ComplexMatrix matrix_operand(const ExperimentConfig& c, Rng& rng) {
    if (const auto* m = std::get_if<ComplexMatrix>(&c.op->value)) return *m;
    const auto* r = std::get_if<RandomMatrixSpec>(&c.op->value);
    if (r == nullptr) throw ConfigInvalid("operator", std::string(to_string(c.kind)) + " needs a matrix");
    if (r->family == "gaussian") return random_gaussian(r->dim, rng);
    if (r->family == "unitary") return random_unitary(r->dim, rng);
    if (r->family == "hyperbolic") return random_hyperbolic(r->dim, rng);
    return random_invertible(r->dim, rng);
}

std::vector<Cell> cells(std::initializer_list<Cell> c) { return c; }

Cell optional_cell(const std::optional<std::int64_t>& v) { return v ? Cell(*v) : Cell{}; }

const std::vector<std::string> kCertificateColumns{"lambda",     "kSmall",     "kLarge",        "probeIndex",
                                                   "valueSmall", "valueLarge", "gap",           "gapClosedForm",
                                                   "iterateDistance", "leftTail", "rightTail", "tailLowerBound"};

void add_certificate_row(ResultTable& t, const DivergenceCertificate& c) {
    t.add_row(cells({c.lambda, c.kSmall, c.kLarge, c.probeIndex, c.valueSmall, c.valueLarge, c.gap, c.gapClosedForm,
                     c.iterateDistance, c.leftTail, c.rightTail, c.tailLowerBound}));
}

Json annulus_json(const SpectralAnnulus& a) { return {{"inner", a.inner}, {"outer", a.outer}}; }

// classify ------------------------------------------------------------------

ResultTable run_classify(const ExperimentConfig& c, Rng& rng) {
    ResultTable t;
    if (is_shift(c)) {
        const WeightSequence& w = weights_operand(c);
        const ShiftClass cls = classify(w);
        t.columns = {"verdict", "innerRadius", "outerRadius", "hyperbolic", "generalizedHyperbolic", "splitPoint",
                     "rateM", "rateN", "power", "witnessIndex", "hyponormal", "distanceToConstant"};
        t.add_row(cells({std::string(to_string(cls.verdict)), cls.annulus.inner, cls.annulus.outer, cls.hyperbolic,
                         cls.generalizedHyperbolic,
                         cls.split ? Cell(cls.split->splitPoint) : Cell{}, cls.split ? Cell(cls.split->rateM) : Cell{},
                         cls.split ? Cell(cls.split->rateN) : Cell{},
                         cls.split ? Cell(static_cast<std::int64_t>(cls.split->power)) : Cell{},
                         optional_cell(cls.witnessIndex), is_hyponormal(w), distance_to_constant(w)}));

        const std::int64_t kMax = c.params.k.value_or(64);
        std::vector<double> lambdas(std::begin(kLambdaGrid), std::end(kLambdaGrid));
        if (c.params.lambda) lambdas = {*c.params.lambda};
        std::string firstChange;
        for (double lambda : lambdas) {
            WeightSequence cur = w;
            for (std::int64_t k = 1; k <= kMax && firstChange.empty(); ++k) {
                cur = aluthge_weights(cur, lambda);
                const ShiftVerdict v = classify(cur).verdict;
                if (v != cls.verdict) {
                    firstChange = "lambda " + format_double(lambda) + ", k " + std::to_string(k) + ": " +
                                  std::string(to_string(v));
                }
            }
        }
        t.check("verdict-invariant-under-aluthge", firstChange.empty(),
                firstChange.empty() ? "k <= " + std::to_string(kMax) : firstChange);
        return t;
    }

    const ComplexMatrix a = matrix_operand(c, rng);
    const double tol = c.params.tol.value_or(kSpectralTol);
    const CVector ev = eigenvalues(a);
    const bool hyper = is_hyperbolic(a, tol);
    t.columns = {"hyperbolic", "spectralRadius", "unitCircleGap", "stableDim", "unstableDim", "boundConstant",
                 "shadowingConstant"};
    std::vector<Cell> row{hyper, std::abs(ev.front()), unit_circle_gap(ev), Cell{}, Cell{}, Cell{}, Cell{}};
    if (hyper) {
        const SpectralSplit s = spectral_split(a, tol);
        row[3] = static_cast<std::int64_t>(s.stableDim);
        row[4] = static_cast<std::int64_t>(s.unstableDim);
        row[5] = s.boundConstant;
        row[6] = shadowing_constant_estimate(a);
    }
    t.add_row(std::move(row));
    return t;
}

// aluthge -------------------------------------------------------------------

ResultTable run_aluthge(const ExperimentConfig& c, Rng& rng) {
    const double lambda = c.params.lambda.value_or(0.5);
    const double stopTol = c.params.stopTol.value_or(kDefaultStopTol);
    if (is_shift(c)) {
        const ShiftAluthgeTrace tr = iterate_shift(weights_operand(c), lambda, c.params.maxIters.value_or(64), stopTol);
        ResultTable t = trace_table(tr);
        t.report = {{"converged", tr.converged}, {"iterations", tr.iterations()}, {"final", weights_to_json(tr.last)}};
        bool tails = true;
        for (const auto& a : tr.annuli) tails = tails && a.inner == tr.annuli[0].inner && a.outer == tr.annuli[0].outer;
        t.check("tails-preserved", tails);
        return t;
    }
    const ComplexMatrix a = matrix_operand(c, rng);
    TraceOptions opts;
    opts.snapshotEvery = static_cast<int>(c.params.snapshotEvery.value_or(1));
    const AluthgeTrace tr = iterate_dense(a, lambda, c.params.maxIters.value_or(kMaxAluthgeIterations), stopTol, opts);
    ResultTable t = trace_table(tr);
    t.report = {{"converged", tr.converged},
                {"iterations", tr.iterations()},
                {"finalCommutatorDefect", tr.commutatorDefects.back()},
                {"maxSpectralDrift", tr.max_spectral_drift()},
                {"final", matrix_to_json(tr.last)}};
    t.check("spectrum-preserved", tr.max_spectral_drift() < 1e-5, "max drift " + format_double(tr.max_spectral_drift()));
    return t;
}

// orbit ---------------------------------------------------------------------

template <class Op, class Vec>
ResultTable orbit_common(const ExperimentConfig& c, const Op& op, const Vec& x) {
    const std::int64_t horizon = c.params.horizon.value_or(32);
    ResultTable t = orbit_table(orbit_norms(op, x, horizon));
    if (c.params.r) {
        const double r = *c.params.r;
        const HomoclinicReport h = is_r_homoclinic(op, x, r, horizon);
        t.report["homoclinic"] = homoclinic_to_json(h);
        if (h.witnessIndex) {
            const bool ok = homoclinic_scaling_check(op, x, r / 2.0, r, *h.witnessIndex);
            t.check("scaling-check", ok, "x scaled by 1/2 is r/2-homoclinic at the same horizon");
        }
    }
    if (c.params.bound) t.report["ec"] = ec_to_json(ec_membership(op, x, *c.params.bound, horizon));
    return t;
}

ResultTable run_orbit(const ExperimentConfig& c, Rng& rng) {
    if (!c.params.vector) throw ConfigInvalid("parameters.vector", "required for orbit");
    if (is_shift(c)) return orbit_common(c, weights_operand(c), vector_from_json(*c.params.vector, "parameters.vector"));
    const ComplexMatrix a = matrix_operand(c, rng);
    return orbit_common(c, a, dense_vector_from_json(*c.params.vector, a.dim(), "parameters.vector"));
}

// shadow --------------------------------------------------------------------

ResultTable run_shadow(const ExperimentConfig& c, Rng& rng) {
    ResultTable t;
    if (is_shift(c)) {
        if (!c.params.vector) throw ConfigInvalid("parameters.vector", "required for shadow on a shift");
        const LatticeVector x = vector_from_json(*c.params.vector, "parameters.vector");
        const LemmaReport rep = lemma_pipeline(weights_operand(c), x, c.params.r.value_or(1.0),
                                               c.params.epsilon.value_or(1e-6), c.params.horizon.value_or(60));
        t.columns = {"epsilon", "delta", "shadowingConstant", "supNorm", "maxDefect", "shadowEpsilon",
                     "distanceToShadow", "witnessIndex", "ok"};
        t.add_row(cells({rep.epsilon, rep.delta, rep.shadowingConstant, rep.supNorm, rep.maxDefect, rep.shadowEpsilon,
                         rep.distanceToShadow, optional_cell(rep.homoclinic.witnessIndex), rep.ok}));
        t.report = {{"shadowPoint", vector_to_json(rep.shadowPoint)}, {"homoclinic", homoclinic_to_json(rep.homoclinic)}};
        t.check("lemma-pipeline", rep.ok, "||x - y|| = " + format_double(rep.distanceToShadow));
        return t;
    }
    const ComplexMatrix a = matrix_operand(c, rng);
    const double delta = c.params.delta.value_or(1e-3);
    const DensePseudoOrbit po = random_bounded_pseudo_orbit(a, c.params.steps.value_or(500), delta, rng);
    const auto res = shadow_solve(a, po);
    t.columns = {"n", "error"};
    for (std::size_t i = 0; i < res.perStepErrors.size(); ++i)
        t.add_row(cells({po.first + static_cast<std::int64_t>(i), res.perStepErrors[i]}));
    t.report = {{"delta", delta},
                {"maxDefect", po.maxDefect},
                {"epsilon", res.epsilon},
                {"shadowingConstant", res.shadowingConstant},
                {"guaranteedBound", res.guaranteedBound},
                {"recursionResidual", res.recursionResidual},
                {"shadowPoint", vector_to_json(res.shadowPoint)}};
    t.check("epsilon-within-K-delta", res.boundHolds,
            format_double(res.epsilon) + " <= " + format_double(res.guaranteedBound));
    t.check("recursion-residual", res.recursionResidual < 1e-8, format_double(res.recursionResidual));
    return t;
}

// spectrum ------------------------------------------------------------------

ResultTable run_spectrum(const ExperimentConfig& c, Rng& rng) {
    ResultTable t;
    if (is_shift(c)) {
        const SpectralAnnulus a = spectrum_annulus(weights_operand(c));
        t.columns = {"innerRadius", "outerRadius", "containsUnitCirclePoint", "hyperbolic"};
        t.add_row(cells({a.inner, a.outer, a.contains_unit_circle_point(), !a.contains_unit_circle_point()}));
        return t;
    }
    const ComplexMatrix a = matrix_operand(c, rng);
    const std::int64_t doublings = c.params.k.value_or(10);
    if (doublings > 30) throw ConfigInvalid("parameters.k", "spectrum uses k as the number of squarings, at most 30");
    const CVector ev = eigenvalues(a);
    t.columns = {"index", "re", "im", "modulus"};
    for (std::size_t i = 0; i < ev.size(); ++i)
        t.add_row(cells({static_cast<std::int64_t>(i), ev[i].real(), ev[i].imag(), std::abs(ev[i])}));
    t.report = {{"spectralRadius", std::abs(ev.front())},
                {"gelfandRadius", gelfand_radius(a, static_cast<int>(doublings))},
                {"unitCircleGap", unit_circle_gap(ev)},
                {"hyperbolic", is_hyperbolic(a, c.params.tol.value_or(kSpectralTol))}};
    return t;
}

// certificate ---------------------------------------------------------------

ResultTable run_certificate(const ExperimentConfig& c) {
    const WeightSequence& w = weights_operand(c);
    const double lambda = c.params.lambda.value_or(0.5);
    const std::int64_t kSmall = c.params.kSmall.value_or(16);
    const std::int64_t kLarge = c.params.kLarge.value_or(4 * kSmall);
    const std::int64_t probe =
        c.params.probeIndex.value_or(-static_cast<std::int64_t>(std::llround(lambda * static_cast<double>(kSmall))));
    const DivergenceCertificate cert = divergence_certificate_shift(w, lambda, kSmall, kLarge, probe);
    ResultTable t;
    t.columns = kCertificateColumns;
    add_certificate_row(t, cert);
    t.report["certificate"] = certificate_to_json(cert);
    t.check("routes-agree", std::abs(cert.gap - cert.gapClosedForm) <= 1e-10);
    t.check("gap-bounded-by-iterate-distance", cert.gap <= cert.iterateDistance);
    return t;
}

// presets -------------------------------------------------------------------

ResultTable preset_sh_divergence() {
    const WeightSequence w = shift_preset("paper-sh");
    constexpr double kLambda = 0.5;
    const DivergenceCertificate cert = divergence_certificate_shift(w, kLambda, 16, 64, -8);

    double closedFormDiff = 0.0;
    double minDistance = distance_to_constant(w);
    WeightSequence cur = w;
    for (std::int64_t k = 1; k <= 256; ++k) {
        cur = aluthge_weights(cur, kLambda);
        minDistance = std::min(minDistance, distance_to_constant(cur));
        for (std::int64_t n = cur.core_start() - 2; n <= cur.core_end() + 1; ++n) {
            closedFormDiff = std::max(closedFormDiff, std::abs(cur.at(n) - aluthge_weight_closed_form(w, kLambda, k, n)));
        }
    }

    ResultTable t;
    t.columns = kCertificateColumns;
    add_certificate_row(t, cert);
    t.report = {{"certificate", certificate_to_json(cert)},
                {"closedFormMaxDiff", closedFormDiff},
                {"minDistanceToConstant", minDistance}};
    t.check("closed-form-matches-iterated-map", closedFormDiff <= 1e-10,
            "max diff " + format_double(closedFormDiff) + " for k <= 256");
    t.check("gap-at-least-0.3", cert.gap >= 0.3, "gap " + format_double(cert.gap));
    t.check("distance-to-constants-at-least-0.75", minDistance >= 0.75, "min " + format_double(minDistance));
    return t;
}

ResultTable preset_hyp_divergence() {
    const WeightSequence w = shift_preset("paper-hyp");
    const HyponormalReport rep = hyponormal_divergence_check(w, 0.5, 64);
    const ShiftClass cls = classify(w);
    ResultTable t;
    t.columns = kCertificateColumns;
    add_certificate_row(t, *rep.certificate);
    t.report = {{"certificate", certificate_to_json(*rep.certificate)},
                {"verdict", to_string(cls.verdict)},
                {"annulus", annulus_json(cls.annulus)},
                {"hyponormal", is_hyponormal(w)},
                {"minDistanceToConstant", rep.minDistanceToConstant}};
    t.check("verdict-uniform-expansion", cls.verdict == ShiftVerdict::UniformExpansion);
    t.check("annulus-2-3", cls.annulus.inner == 2.0 && cls.annulus.outer == 3.0);
    t.check("hyponormal", is_hyponormal(w));
    t.check("gap-at-least-0.3", rep.certificate->gap >= 0.3, "gap " + format_double(rep.certificate->gap));
    t.check("distance-to-constants-at-least-0.5", rep.minDistanceToConstant >= 0.5,
            "min over k <= 64: " + format_double(rep.minDistanceToConstant));
    return t;
}

ResultTable preset_spectrum_audit(const ExperimentConfig& c, Rng& rng) {
    const double lambda = c.params.lambda.value_or(0.5);
    const std::int64_t trials = c.params.trials.value_or(50);
    const std::int64_t iters = c.params.maxIters.value_or(200);
    ResultTable t;
    t.columns = {"trial", "dim", "iterations", "maxStepDrift", "accumulatedDrift", "finalCommutatorDefect"};
    double worstStep = 0.0, worstAccum = 0.0;
    for (std::int64_t i = 0; i < trials; ++i) {
        const std::size_t dim = 2 + static_cast<std::size_t>(i % 7);
        const AluthgeTrace tr = iterate_dense(random_invertible(dim, rng), lambda, iters, c.params.stopTol.value_or(kDefaultStopTol));
        double step = 0.0;
        for (std::size_t k = 1; k < tr.spectra.size(); ++k)
            step = std::max(step, hausdorff_distance(tr.spectra[k].eigenvalues, tr.spectra[k - 1].eigenvalues));
        worstStep = std::max(worstStep, step);
        worstAccum = std::max(worstAccum, tr.max_spectral_drift());
        t.add_row(cells({i, static_cast<std::int64_t>(dim), tr.iterations(), step, tr.max_spectral_drift(),
                         tr.commutatorDefects.back()}));
    }
    t.check("per-step-drift-below-1e-6", worstStep < 1e-6, "worst " + format_double(worstStep));
    t.check("accumulated-drift-below-1e-5", worstAccum < 1e-5, "worst " + format_double(worstAccum));
    return t;
}

ResultTable preset_shadow(const ExperimentConfig& c, Rng& rng) {
    ResultTable t;
    t.columns = {"case", "backend", "dim", "delta", "epsilon", "shadowingConstant", "bound", "residual", "ok"};
    const WeightSequence w = shift_preset("paper-sh");
    const double eps = c.params.epsilon.value_or(1e-6);
    bool lemmaOk = true;
    for (std::int64_t m = -4; m <= 4; ++m) {
        const LemmaReport rep = lemma_pipeline(w, LatticeVector::basis(m), 1.0, eps, 60);
        lemmaOk = lemmaOk && rep.ok;
        t.add_row(cells({"e_" + std::to_string(m), std::string("shift"), Cell{}, rep.delta, rep.distanceToShadow,
                         rep.shadowingConstant, eps / 2.0, Cell{}, rep.ok}));
    }
    bool boundOk = true, residualOk = true;
    const std::int64_t trials = c.params.trials.value_or(10);
    const std::int64_t steps = c.params.steps.value_or(500);
    for (std::int64_t i = 0; i < trials; ++i) {
        const std::size_t dim = 4 + static_cast<std::size_t>(i % 5);
        const ComplexMatrix a = random_hyperbolic(dim, rng);
        for (double delta : {1e-2, 1e-3, 1e-4}) {
            const DensePseudoOrbit po = random_bounded_pseudo_orbit(a, steps, delta, rng);
            const auto res = shadow_solve(a, po);
            const bool resOk = res.recursionResidual < 1e-8;
            boundOk = boundOk && res.boundHolds;
            residualOk = residualOk && resOk;
            t.add_row(cells({"matrix " + std::to_string(i), std::string("dense"), static_cast<std::int64_t>(dim), delta,
                             res.epsilon, res.shadowingConstant, res.guaranteedBound, res.recursionResidual,
                             res.boundHolds && resOk}));
        }
    }
    t.check("lemma-pipeline", lemmaOk, "basis vectors e_-4..e_4 of (2|1/2)");
    t.check("epsilon-within-K-delta", boundOk);
    t.check("recursion-residual-below-1e-8", residualOk);
    return t;
}

std::string_view alternative(ShiftVerdict v) {
    switch (v) {
    case ShiftVerdict::UniformContraction: return "uniform-contraction";
    case ShiftVerdict::UniformExpansion: return "uniform-expansion";
    case ShiftVerdict::ShiftedHyperbolic: return "Ec-dense";
    default: return "not-shadowing";
    }
}

ResultTable preset_classify_library() {
    ResultTable t;
    t.columns = {"name", "verdict", "innerRadius", "outerRadius", "hyperbolic", "generalizedHyperbolic", "hyponormal",
                 "alternative", "ecDenseWitness", "witnessIndex"};
    std::set<ShiftVerdict> seen;
    bool shRow = false, consistent = true;
    for (const auto& s : shift_library()) {
        const ShiftClass cls = classify(s.weights);
        seen.insert(cls.verdict);
        // basis vectors are homoclinic iff both exact tail ratios are below 1
        bool allHomoclinic = true;
        for (std::int64_t m = -32; m <= 32 && allHomoclinic; ++m) {
            const HomoclinicReport h = is_r_homoclinic(s.weights, LatticeVector::basis(m), 1.0, 0);
            allHomoclinic = h.forwardRatio < 1.0 && h.backwardRatio < 1.0;
        }
        const std::string witness = allHomoclinic ? "all-basis-homoclinic" : "none";
        consistent = consistent && (allHomoclinic == (cls.verdict == ShiftVerdict::ShiftedHyperbolic));
        if (s.weights == shift_preset("paper-sh")) {
            shRow = cls.verdict == ShiftVerdict::ShiftedHyperbolic && allHomoclinic;
        }
        t.add_row(cells({s.name, std::string(to_string(cls.verdict)), cls.annulus.inner, cls.annulus.outer,
                         cls.hyperbolic, cls.generalizedHyperbolic, is_hyponormal(s.weights),
                         std::string(alternative(cls.verdict)), witness, optional_cell(cls.witnessIndex)}));
    }
    t.check("shifted-hyperbolic-row-has-dense-Ec", shRow, "(2|1/2): every basis vector homoclinic");
    t.check("Ec-dense-exactly-for-shifted-hyperbolic", consistent);
    t.check("five-verdicts-covered", seen.size() == 5, std::to_string(seen.size()) + " distinct verdicts");
    return t;
}

ResultTable run_preset(const ExperimentConfig& c, Rng& rng) {
    if (c.preset == "paper-sh-divergence") return preset_sh_divergence();
    if (c.preset == "paper-hyp-divergence") return preset_hyp_divergence();
    if (c.preset == "paper-spectrum-audit") return preset_spectrum_audit(c, rng);
    if (c.preset == "paper-shadow") return preset_shadow(c, rng);
    return preset_classify_library();
}

std::string operation_name(const ExperimentConfig& c) {
    return c.kind == ExperimentKind::Preset ? "preset " + c.preset : std::string(to_string(c.kind));
}

} // namespace

ResultTable run(const ExperimentConfig& config, const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(config.seed.value_or(0));
    ResultTable t;
    try {
        switch (config.kind) {
        case ExperimentKind::Classify: t = run_classify(config, rng); break;
        case ExperimentKind::Aluthge: t = run_aluthge(config, rng); break;
        case ExperimentKind::Orbit: t = run_orbit(config, rng); break;
        case ExperimentKind::Shadow: t = run_shadow(config, rng); break;
        case ExperimentKind::Spectrum: t = run_spectrum(config, rng); break;
        case ExperimentKind::Certificate: t = run_certificate(config); break;
        case ExperimentKind::Preset: t = run_preset(config, rng); break;
        }
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const ContractViolation& e) {
        throw ExperimentError(operation_name(config), e.what(), true);
    } catch (const Error& e) {
        throw ExperimentError(operation_name(config), e.what(), false);
    }
    t.metadata["tool"] = "oplab-lab";
    t.metadata["version"] = kVersion;
    t.metadata["experiment"] = operation_name(config);
    t.metadata["config"] = config.source;
    if (opts.timing) {
        t.metadata["wallTimeSeconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return t;
}

std::vector<ResultTable> run_batch(const BatchConfig& batch, const RunOptions& opts) {
    std::vector<std::future<ResultTable>> pending;
    pending.reserve(batch.cells.size());
    for (const auto& cell : batch.cells)
        pending.push_back(std::async(std::launch::async, [&cell, &opts] { return run(cell, opts); }));
    std::vector<ResultTable> out;
    out.reserve(pending.size());
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

} // namespace oplab
