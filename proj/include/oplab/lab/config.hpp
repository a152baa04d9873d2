#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oplab/lab/json_io.hpp"

namespace oplab {

inline constexpr std::string_view kConfigSchema = "experiment-config.v1";

enum class ExperimentKind { Classify, Aluthge, Orbit, Shadow, Spectrum, Certificate, Preset };

std::string_view to_string(ExperimentKind k);
std::optional<ExperimentKind> experiment_kind_from_string(std::string_view s);

/// Matrix drawn from the experiment's seed: family is one of
/// invertible, gaussian, unitary, hyperbolic.
struct RandomMatrixSpec {
    std::string family;
    std::size_t dim = 0;
};

struct OperatorSpec {
    std::variant<WeightSequence, ComplexMatrix, RandomMatrixSpec> value;
    std::string name; ///< preset name when given by name
};

struct Parameters {
    std::optional<double> lambda;
    std::optional<double> r;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<double> bound;
    std::optional<double> stopTol;
    std::optional<double> tol;
    std::optional<std::int64_t> k;
    std::optional<std::int64_t> kSmall;
    std::optional<std::int64_t> kLarge;
    std::optional<std::int64_t> probeIndex;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> maxIters;
    std::optional<std::int64_t> steps;
    std::optional<std::int64_t> snapshotEvery;
    std::optional<std::int64_t> trials;
    std::optional<Json> vector; ///< {index: [re, im]}, decoded per backend
};

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Classify;
    std::optional<OperatorSpec> op;
    std::string preset; ///< experiment preset name (kind == Preset)
    Parameters params;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::optional<OutputFormat> format;
    Json source; ///< the parsed document, echoed into result metadata
};

/// A single experiment, or {"cells": [...]} of independent experiments.
struct BatchConfig {
    std::vector<ExperimentConfig> cells;
    bool batch = false;
    std::string output;
    std::optional<OutputFormat> format;
};

/// Names accepted by `preset`.
const std::vector<std::string>& experiment_presets();

/// Throws ConfigInvalid naming the offending field: unknown fields, wrong
/// types, non-positive tolerances, out-of-range parameters, a missing seed
/// when the experiment draws random numbers.
ExperimentConfig parse_experiment(const Json& j, const std::string& path = "");
BatchConfig parse_config(const Json& j);

/// True when running the experiment consumes random numbers.
bool needs_seed(const ExperimentConfig& c);

} // namespace oplab
