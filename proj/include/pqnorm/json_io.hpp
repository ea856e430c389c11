#pragma once

// JSON forms of descriptors, elements, operators and certificates.
//
// Complex numbers are [re, im] pairs, matrices are lists of rows, exponents
// are numbers or the string "inf". An infinite upper bound is written as null.

#include "pqnorm/amplification.hpp"
#include "pqnorm/cb.hpp"
#include "pqnorm/certificate.hpp"

#include "json.hpp"

#include <stdexcept>

namespace pqnorm {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json exponent_to_json(double p);
double exponent_from_json(const Json& j);

Json to_json(Complex z);
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);
Json to_json(const Coeffs& u);
Complex complex_from_json(const Json& j);
CVector vector_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);
Coeffs coeffs_from_json(const Json& j);

Json to_json(const BaseSpace& e);
Json to_json(const PQSpace& e);
Json to_json(const MeasureSpace& x);
BasePtr base_from_json(const Json& j);
SpacePtr space_from_json(const Json& j);
MeasureSpace measure_from_json(const Json& j);

/// {"ambient": space, "terms": [{"matrix": ..., "vector": ...}]}
Json to_json(const AmpElem& u);
AmpElem element_from_json(const Json& j);

/// {"domain", "codomain", "matrix"}
OperatorDesc operator_from_json(const Json& j);
/// {"left", "right", "codomain", "components"}
BilinearDesc bilinear_from_json(const Json& j);

Json to_json(const NormCertificate& c);
Json to_json(const SupEstimate& s);

/// Parses text, turning library exceptions into ParseError.
Json parse_json(const std::string& text);

}  // namespace pqnorm
