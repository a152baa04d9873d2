#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "oplab/aluthge/aluthge.hpp"
#include "oplab/dynamics/orbits.hpp"
#include "oplab/lab/json_io.hpp"

namespace oplab {

using Cell = std::variant<std::monostate, std::int64_t, double, std::string, bool>;

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Named columns and rows plus metadata, contract checks and a free-form
/// JSON report (certificates and other structured results).
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json metadata = Json::object();
    Json report = Json::object();
    std::vector<Check> checks;

    /// Throws InvalidArgument when the row width differs from the column count.
    void add_row(std::vector<Cell> row);
    void check(std::string name, bool passed, std::string detail = {});
    bool all_passed() const;
};

/// Metadata, checks and the report as '#' comment lines, then the table.
/// Doubles are written with 17 significant digits.
void write_csv(std::ostream& os, const ResultTable& t);

Json to_json(const ResultTable& t);

/// k, stepGap, commutatorDefect, innerRadius, outerRadius: the step gap on row
/// k is ||Delta^(k) - Delta^(k-1)||; cells without data are empty.
ResultTable trace_table(const AluthgeTrace& t);
ResultTable trace_table(const ShiftAluthgeTrace& t);

/// n, norm, logNorm.
ResultTable orbit_table(const OrbitSegment& s);

} // namespace oplab
