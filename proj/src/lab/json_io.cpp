#include "oplab/lab/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

std::string join(const std::string& path, std::string_view member) {
    return path.empty() ? std::string(member) : path + "." + std::string(member);
}

std::string join(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

const Json& member(const Json& obj, std::string_view name, const std::string& path) {
    const auto it = obj.find(name);
    if (it == obj.end()) throw ConfigInvalid(join(path, name), "missing required field");
    return *it;
}

void require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigInvalid(path, "expected an object");
}

std::int64_t integer_from_json(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigInvalid(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::int64_t parse_index(const std::string& key, const std::string& path) {
    std::int64_t v = 0;
    const char* end = key.data() + key.size();
    const auto [ptr, ec] = std::from_chars(key.data(), end, v);
    if (ec != std::errc{} || ptr != end || key.empty()) {
        throw ConfigInvalid(join(path, key), "vector keys must be decimal integers");
    }
    return v;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json number_to_json(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double number_from_json(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigInvalid(path, "expected a number");
}

Json complex_to_json(Complex z) { return Json::array({number_to_json(z.real()), number_to_json(z.imag())}); }

Complex complex_from_json(const Json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ConfigInvalid(path, "expected [re, im]");
    return {number_from_json(j[0], join(path, 0)), number_from_json(j[1], join(path, 1))};
}

Json matrix_to_json(const ComplexMatrix& a) {
    Json entries = Json::array();
    for (const auto& z : a.data()) entries.push_back(complex_to_json(z));
    return {{"dim", a.dim()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    require_known_fields(j, {"dim", "entries"}, path);
    const std::int64_t dim = integer_from_json(member(j, "dim", path), join(path, "dim"));
    if (dim < 1 || dim > static_cast<std::int64_t>(ComplexMatrix::kMaxDim)) {
        throw ConfigInvalid(join(path, "dim"), "must lie in [1, " + std::to_string(ComplexMatrix::kMaxDim) + "]");
    }
    const Json& entries = member(j, "entries", path);
    const std::string epath = join(path, "entries");
    const auto n = static_cast<std::size_t>(dim);
    if (!entries.is_array() || entries.size() != n * n) {
        throw ConfigInvalid(epath, "expected " + std::to_string(n * n) + " entries");
    }
    std::vector<Complex> data;
    data.reserve(n * n);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const Complex z = complex_from_json(entries[k], join(epath, k));
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConfigInvalid(join(epath, k), "entry is not finite");
        data.push_back(z);
    }
    return ComplexMatrix(n, std::move(data));
}

Json weights_to_json(const WeightSequence& w) {
    Json core = Json::array();
    for (double v : w.core()) core.push_back(v);
    return {{"coreStart", w.core_start()}, {"core", std::move(core)}, {"leftTail", w.left_tail()},
            {"rightTail", w.right_tail()}};
}

WeightSequence weights_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    require_known_fields(j, {"coreStart", "core", "leftTail", "rightTail"}, path);
    const std::int64_t coreStart =
        j.contains("coreStart") ? integer_from_json(j["coreStart"], join(path, "coreStart")) : 0;
    std::vector<double> core;
    if (j.contains("core")) {
        const Json& c = j["core"];
        if (!c.is_array()) throw ConfigInvalid(join(path, "core"), "expected an array");
        for (std::size_t k = 0; k < c.size(); ++k) core.push_back(number_from_json(c[k], join(join(path, "core"), k)));
    }
    const double left = number_from_json(member(j, "leftTail", path), join(path, "leftTail"));
    const double right = number_from_json(member(j, "rightTail", path), join(path, "rightTail"));
    try {
        return WeightSequence(coreStart, std::move(core), left, right);
    } catch (const InvalidArgument& e) {
        throw ConfigInvalid(path, e.what());
    }
}

Json vector_to_json(const LatticeVector& v) {
    Json out = Json::object();
    for (const auto& [n, c] : v.coefficients()) out[std::to_string(n)] = complex_to_json(c);
    return out;
}

LatticeVector vector_from_json(const Json& j, const std::string& path) {
    require_object(j, path);
    LatticeVector v;
    for (const auto& [key, value] : j.items()) {
        const std::int64_t n = parse_index(key, path);
        const Complex c = complex_from_json(value, join(path, key));
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ConfigInvalid(join(path, key), "not finite");
        v.set(n, c);
    }
    return v;
}

Json vector_to_json(const CVector& v) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != Complex{}) out[std::to_string(i)] = complex_to_json(v[i]);
    return out;
}

CVector dense_vector_from_json(const Json& j, std::size_t dim, const std::string& path) {
    const LatticeVector lv = vector_from_json(j, path);
    CVector out(dim);
    for (const auto& [n, c] : lv.coefficients()) {
        if (n < 0 || n >= static_cast<std::int64_t>(dim)) {
            throw ConfigInvalid(join(path, std::to_string(n)), "index outside [0, " + std::to_string(dim) + ")");
        }
        out[static_cast<std::size_t>(n)] = c;
    }
    return out;
}

Json certificate_to_json(const DivergenceCertificate& c) {
    return {{"lambda", c.lambda},
            {"kSmall", c.kSmall},
            {"kLarge", c.kLarge},
            {"probeIndex", c.probeIndex},
            {"valueSmall", c.valueSmall},
            {"valueLarge", c.valueLarge},
            {"gap", c.gap},
            {"gapClosedForm", c.gapClosedForm},
            {"iterateDistance", c.iterateDistance},
            {"leftTail", c.leftTail},
            {"rightTail", c.rightTail},
            {"tailLowerBound", c.tailLowerBound}};
}

Json homoclinic_to_json(const HomoclinicReport& r) {
    Json j = {{"r", r.r},
              {"horizon", r.horizon},
              {"isRHomoclinicAtHorizon", r.isRHomoclinicAtHorizon},
              {"certifiedDivergent", r.certifiedDivergent},
              {"exact", r.exact},
              {"forwardRatio", number_to_json(r.forwardRatio)},
              {"backwardRatio", number_to_json(r.backwardRatio)}};
    j["witnessIndex"] = r.witnessIndex ? Json(*r.witnessIndex) : Json(nullptr);
    return j;
}

Json ec_to_json(const EcReport& r) {
    return {{"member", r.member},
            {"exact", r.exact},
            {"supNorm", number_to_json(r.supNorm)},
            {"bound", number_to_json(r.bound)},
            {"withinBound", r.withinBound}};
}

void require_known_fields(const Json& obj, std::initializer_list<std::string_view> allowed,
                          const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigInvalid(join(path, key), "unknown field");
        }
    }
}

} // namespace oplab
