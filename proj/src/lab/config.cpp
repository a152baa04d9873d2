#include "oplab/lab/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "oplab/errors.hpp"
#include "oplab/shift/shift_algebra.hpp"

namespace oplab {

namespace {

constexpr std::array kKindNames{std::pair{ExperimentKind::Classify, "classify"},
                                std::pair{ExperimentKind::Aluthge, "aluthge"},
                                std::pair{ExperimentKind::Orbit, "orbit"},
                                std::pair{ExperimentKind::Shadow, "shadow"},
                                std::pair{ExperimentKind::Spectrum, "spectrum"},
                                std::pair{ExperimentKind::Certificate, "certificate"},
                                std::pair{ExperimentKind::Preset, "preset"}};

std::string join(const std::string& path, std::string_view name) {
    return path.empty() ? std::string(name) : path + "." + std::string(name);
}

std::string expect_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigInvalid(path, "expected a string");
    return j.get<std::string>();
}

std::int64_t expect_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigInvalid(path, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw ConfigInvalid(path, "integer out of range");
    }
    return j.get<std::int64_t>();
}

OutputFormat parse_format(const Json& j, const std::string& path) {
    const std::string s = expect_string(j, path);
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigInvalid(path, "expected \"csv\" or \"json\"");
}

OperatorSpec parse_operator(const Json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1) {
        throw ConfigInvalid(path, "expected exactly one of weights, matrix, preset, random");
    }
    require_known_fields(j, {"weights", "matrix", "preset", "random"}, path);
    const std::string key = j.begin().key();
    const Json& value = j.begin().value();
    const std::string sub = join(path, key);
    if (key == "weights") return {weights_from_json(value, sub), ""};
    if (key == "matrix") return {matrix_from_json(value, sub), ""};
    if (key == "preset") {
        const std::string name = expect_string(value, sub);
        try {
            return {shift_preset(name), name};
        } catch (const InvalidArgument&) {
            throw ConfigInvalid(sub, "unknown operator preset \"" + name + "\"");
        }
    }
    if (!value.is_object()) throw ConfigInvalid(sub, "expected an object");
    require_known_fields(value, {"family", "dim"}, sub);
    RandomMatrixSpec r;
    r.family = value.contains("family") ? expect_string(value["family"], join(sub, "family")) : "invertible";
    if (r.family != "invertible" && r.family != "gaussian" && r.family != "unitary" && r.family != "hyperbolic") {
        throw ConfigInvalid(join(sub, "family"), "expected invertible, gaussian, unitary or hyperbolic");
    }
    if (!value.contains("dim")) throw ConfigInvalid(join(sub, "dim"), "missing required field");
    const std::int64_t dim = expect_int(value["dim"], join(sub, "dim"));
    if (dim < 2 || dim > static_cast<std::int64_t>(ComplexMatrix::kMaxDim)) {
        throw ConfigInvalid(join(sub, "dim"), "must lie in [2, " + std::to_string(ComplexMatrix::kMaxDim) + "]");
    }
    r.dim = static_cast<std::size_t>(dim);
    return {r, ""};
}

Parameters parse_parameters(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigInvalid(path, "expected an object");
    require_known_fields(j,
                         {"lambda", "r", "delta", "epsilon", "bound", "stopTol", "tol", "k", "kSmall", "kLarge",
                          "probeIndex", "horizon", "maxIters", "steps", "snapshotEvery", "trials", "vector"},
                         path);
    Parameters p;
    auto real = [&](std::string_view name, std::optional<double>& slot) {
        if (!j.contains(name)) return;
        const std::string sub = join(path, name);
        const double v = number_from_json(j[std::string(name)], sub);
        if (!std::isfinite(v)) throw ConfigInvalid(sub, "must be finite");
        slot = v;
    };
    auto positive = [&](std::string_view name, std::optional<double>& slot) {
        real(name, slot);
        if (slot && !(*slot > 0.0)) throw ConfigInvalid(join(path, name), "must be positive");
    };
    auto integer = [&](std::string_view name, std::optional<std::int64_t>& slot, std::int64_t lo, std::int64_t hi) {
        if (!j.contains(name)) return;
        const std::string sub = join(path, name);
        const std::int64_t v = expect_int(j[std::string(name)], sub);
        if (v < lo || v > hi) {
            throw ConfigInvalid(sub, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        slot = v;
    };

    real("lambda", p.lambda);
    if (p.lambda && !(*p.lambda > 0.0 && *p.lambda < 1.0)) throw ConfigInvalid(join(path, "lambda"), "must lie in (0, 1)");
    positive("r", p.r);
    positive("delta", p.delta);
    positive("epsilon", p.epsilon);
    positive("bound", p.bound);
    positive("stopTol", p.stopTol);
    positive("tol", p.tol);
    integer("k", p.k, 0, kMaxShiftIterates);
    integer("kSmall", p.kSmall, 0, kMaxShiftIterates);
    integer("kLarge", p.kLarge, 1, kMaxShiftIterates);
    integer("probeIndex", p.probeIndex, -kMaxShiftIterates, kMaxShiftIterates);
    integer("horizon", p.horizon, 0, 10'000);
    integer("maxIters", p.maxIters, 1, kMaxAluthgeIterations);
    integer("steps", p.steps, 1, 1000);
    integer("snapshotEvery", p.snapshotEvery, 1, kMaxAluthgeIterations);
    integer("trials", p.trials, 1, 1000);
    if (p.kSmall && p.kLarge && *p.kSmall >= *p.kLarge) {
        throw ConfigInvalid(join(path, "kLarge"), "must exceed kSmall");
    }
    if (j.contains("vector")) {
        vector_from_json(j["vector"], join(path, "vector")); // validate now, decode per backend later
        p.vector = j["vector"];
    }
    return p;
}

} // namespace

std::string_view to_string(ExperimentKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "?";
}

std::optional<ExperimentKind> experiment_kind_from_string(std::string_view s) {
    for (const auto& [kind, name] : kKindNames)
        if (s == name) return kind;
    return std::nullopt;
}

const std::vector<std::string>& experiment_presets() {
    static const std::vector<std::string> names{"paper-sh-divergence", "paper-hyp-divergence",
                                                "paper-spectrum-audit", "paper-shadow", "paper-classify-library"};
    return names;
}

bool needs_seed(const ExperimentConfig& c) {
    if (c.op && std::holds_alternative<RandomMatrixSpec>(c.op->value)) return true;
    if (c.kind == ExperimentKind::Shadow && c.op && std::holds_alternative<ComplexMatrix>(c.op->value)) return true;
    return c.kind == ExperimentKind::Preset && (c.preset == "paper-spectrum-audit" || c.preset == "paper-shadow");
}

ExperimentConfig parse_experiment(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigInvalid(path.empty() ? "$" : path, "expected an object");
    require_known_fields(j, {"schema", "kind", "operator", "preset", "parameters", "seed", "output", "format"}, path);

    ExperimentConfig c;
    c.source = j;
    if (j.contains("schema")) {
        const std::string s = expect_string(j["schema"], join(path, "schema"));
        if (s != kConfigSchema) throw ConfigInvalid(join(path, "schema"), "unsupported schema \"" + s + "\"");
    }
    if (!j.contains("kind")) throw ConfigInvalid(join(path, "kind"), "missing required field");
    const std::string kind = expect_string(j["kind"], join(path, "kind"));
    const auto parsed = experiment_kind_from_string(kind);
    if (!parsed) throw ConfigInvalid(join(path, "kind"), "unknown kind \"" + kind + "\"");
    c.kind = *parsed;

    if (j.contains("operator")) c.op = parse_operator(j["operator"], join(path, "operator"));
    if (j.contains("preset")) {
        if (c.kind != ExperimentKind::Preset) throw ConfigInvalid(join(path, "preset"), "only valid with kind preset");
        c.preset = expect_string(j["preset"], join(path, "preset"));
        const auto& names = experiment_presets();
        if (std::find(names.begin(), names.end(), c.preset) == names.end()) {
            throw ConfigInvalid(join(path, "preset"), "unknown preset \"" + c.preset + "\"");
        }
    }
    if (c.kind == ExperimentKind::Preset) {
        if (c.preset.empty()) throw ConfigInvalid(join(path, "preset"), "missing required field");
        if (c.op) throw ConfigInvalid(join(path, "operator"), "presets fix their own operators");
    } else if (!c.op) {
        throw ConfigInvalid(join(path, "operator"), "missing required field");
    }
    if (j.contains("parameters")) c.params = parse_parameters(j["parameters"], join(path, "parameters"));
    if (j.contains("seed")) {
        const Json& s = j["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            throw ConfigInvalid(join(path, "seed"), "expected an unsigned 64-bit integer");
        }
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("output")) c.output = expect_string(j["output"], join(path, "output"));
    if (j.contains("format")) c.format = parse_format(j["format"], join(path, "format"));
    if (needs_seed(c) && !c.seed) throw ConfigInvalid(join(path, "seed"), "required: this experiment uses random numbers");
    return c;
}

BatchConfig parse_config(const Json& j) {
    BatchConfig b;
    if (j.is_object() && j.contains("cells")) {
        require_known_fields(j, {"schema", "cells", "output", "format"}, "");
        if (j.contains("schema")) {
            const std::string s = expect_string(j["schema"], "schema");
            if (s != kConfigSchema) throw ConfigInvalid("schema", "unsupported schema \"" + s + "\"");
        }
        const Json& cells = j["cells"];
        if (!cells.is_array() || cells.empty()) throw ConfigInvalid("cells", "expected a non-empty array");
        for (std::size_t i = 0; i < cells.size(); ++i)
            b.cells.push_back(parse_experiment(cells[i], "cells[" + std::to_string(i) + "]"));
        b.batch = true;
        if (j.contains("output")) b.output = expect_string(j["output"], "output");
        if (j.contains("format")) b.format = parse_format(j["format"], "format");
        return b;
    }
    b.cells.push_back(parse_experiment(j));
    b.output = b.cells.front().output;
    b.format = b.cells.front().format;
    return b;
}

} // namespace oplab
