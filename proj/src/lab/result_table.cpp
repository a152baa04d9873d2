#include "oplab/lab/result_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_field(v);
        },
        c);
}

Json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) return number_to_json(v);
            else return v;
        },
        c);
}

Cell modulus_extreme(const CVector& ev, bool largest) {
    double m = largest ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& z : ev) m = largest ? std::max(m, std::abs(z)) : std::min(m, std::abs(z));
    return m;
}

} // namespace

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw InvalidArgument("result row has " + std::to_string(row.size()) + " cells, table has " +
                              std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

void ResultTable::check(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
}

bool ResultTable::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

void write_csv(std::ostream& os, const ResultTable& t) {
    for (const auto& [key, value] : t.metadata.items()) os << "# " << key << ": " << value.dump() << '\n';
    for (const auto& c : t.checks) {
        os << "# check " << c.name << ": " << (c.passed ? "pass" : "FAIL");
        if (!c.detail.empty()) os << " (" << c.detail << ')';
        os << '\n';
    }
    if (!t.report.empty()) os << "# report: " << t.report.dump() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

Json to_json(const ResultTable& t) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    Json checks = Json::array();
    for (const auto& c : t.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"metadata", t.metadata}, {"columns", t.columns}, {"rows", std::move(rows)},
            {"checks", std::move(checks)}, {"report", t.report}};
}

ResultTable trace_table(const AluthgeTrace& t) {
    ResultTable out;
    out.columns = {"k", "stepGap", "commutatorDefect", "innerRadius", "outerRadius"};
    auto snap = t.spectra.begin();
    for (std::int64_t k = 0; k <= t.iterations(); ++k) {
        std::vector<Cell> row{k, k ? Cell(t.stepGaps[static_cast<std::size_t>(k - 1)]) : Cell{},
                              t.commutatorDefects[static_cast<std::size_t>(k)], Cell{}, Cell{}};
        while (snap != t.spectra.end() && snap->iterate < k) ++snap;
        if (snap != t.spectra.end() && snap->iterate == k) {
            row[3] = modulus_extreme(snap->eigenvalues, false);
            row[4] = modulus_extreme(snap->eigenvalues, true);
        }
        out.add_row(std::move(row));
    }
    return out;
}

ResultTable trace_table(const ShiftAluthgeTrace& t) {
    ResultTable out;
    out.columns = {"k", "stepGap", "commutatorDefect", "innerRadius", "outerRadius"};
    for (std::int64_t k = 0; k <= t.iterations(); ++k) {
        const auto& a = t.annuli[static_cast<std::size_t>(k)];
        out.add_row({k, k ? Cell(t.stepGaps[static_cast<std::size_t>(k - 1)]) : Cell{}, Cell{}, a.inner, a.outer});
    }
    return out;
}

ResultTable orbit_table(const OrbitSegment& s) {
    ResultTable out;
    out.columns = {"n", "norm", "logNorm"};
    for (std::int64_t n = -s.horizon; n <= s.horizon; ++n) out.add_row({n, s.norm_at(n), s.log_norm_at(n)});
    return out;
}

} // namespace oplab
