#pragma once

#include <string>
#include <vector>

#include "oplab/errors.hpp"
#include "oplab/lab/config.hpp"
#include "oplab/lab/result_table.hpp"

namespace oplab {

/// A library error raised while running an experiment, tagged with the
/// operation that raised it. contractViolation marks failed internal
/// cross-checks (as opposed to refused inputs).
class ExperimentError : public Error {
public:
    ExperimentError(std::string operation, const std::string& message, bool contractViolation)
        : Error(operation + ": " + message), operation_(std::move(operation)), contract_(contractViolation) {}

    const std::string& operation() const noexcept { return operation_; }
    bool contract_violation() const noexcept { return contract_; }

private:
    std::string operation_;
    bool contract_;
};

struct RunOptions {
    bool timing = false; ///< record wall time in the metadata (output is then no longer byte-stable)
};

/// Runs one experiment. Throws ExperimentError for library failures; results
/// of contract checks are reported in the table.
ResultTable run(const ExperimentConfig& config, const RunOptions& opts = {});

/// Runs the cells concurrently and returns their tables in cell order.
std::vector<ResultTable> run_batch(const BatchConfig& batch, const RunOptions& opts = {});

} // namespace oplab
