#pragma once

#include <string>

#include "json.hpp"
#include "oplab/aluthge/aluthge.hpp"
#include "oplab/dynamics/lattice_vector.hpp"
#include "oplab/dynamics/orbits.hpp"
#include "oplab/linalg/complex_matrix.hpp"
#include "oplab/shift/weight_sequence.hpp"

namespace oplab {

using Json = nlohmann::json;

/// "%.17g"; non-finite values print as inf, -inf, nan.
std::string format_double(double v);

/// Finite numbers stay numbers; non-finite ones become the strings of format_double.
Json number_to_json(double v);

/// Reads a number, accepting the strings "inf", "-inf" and "nan" as well.
/// Parse failures throw ConfigInvalid naming `path`.
double number_from_json(const Json& j, const std::string& path);

Json complex_to_json(Complex z); ///< [re, im]
Complex complex_from_json(const Json& j, const std::string& path);

/// {"dim": n, "entries": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const Json& j, const std::string& path);

/// {"coreStart": s, "core": [...], "leftTail": a, "rightTail": b}. Parsing
/// canonicalizes, so a serialized sequence re-parses to an equal value.
Json weights_to_json(const WeightSequence& w);
WeightSequence weights_from_json(const Json& j, const std::string& path);

/// {"index": [re, im], ...} with decimal index keys.
Json vector_to_json(const LatticeVector& v);
LatticeVector vector_from_json(const Json& j, const std::string& path);

/// Dense vectors use the same map form with keys in [0, dim).
Json vector_to_json(const CVector& v);
CVector dense_vector_from_json(const Json& j, std::size_t dim, const std::string& path);

Json certificate_to_json(const DivergenceCertificate& c);
Json homoclinic_to_json(const HomoclinicReport& r);
Json ec_to_json(const EcReport& r);

/// Rejects members of `obj` not listed in `allowed` with ConfigInvalid.
void require_known_fields(const Json& obj, std::initializer_list<std::string_view> allowed,
                          const std::string& path);

} // namespace oplab
