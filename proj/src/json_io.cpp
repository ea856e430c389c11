#include "pqnorm/json_io.hpp"

#include <cmath>

namespace pqnorm {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

Json upper_to_json(double v) { return std::isinf(v) ? Json(nullptr) : Json(v); }

Json decomposition_to_json(const TensorDecomposition& d) {
  Json terms = Json::array();
  for (int k = 0; k < d.length(); ++k) {
    Json t;
    t["left"] = to_json(CVector(d.left.col(k)));
    t["right"] = to_json(CVector(d.right.col(k)));
    t["left_norm"] = k < static_cast<int>(d.left_norms.size()) ? d.left_norms[static_cast<std::size_t>(k)] : 0.0;
    t["right_norm"] = k < static_cast<int>(d.right_norms.size()) ? d.right_norms[static_cast<std::size_t>(k)] : 0.0;
    terms.push_back(t);
  }
  Json out;
  out["cost"] = d.cost;
  out["terms"] = terms;
  return out;
}

Json representation_to_json(const PopRepresentation& r) {
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    Json j;
    j["a"] = to_json(t.a);
    j["u"] = to_json(t.u);
    j["v"] = to_json(t.v);
    j["b"] = to_json(t.b);
    j["u_norm"] = upper_to_json(t.u_norm);
    j["v_norm"] = upper_to_json(t.v_norm);
    j["cost"] = upper_to_json(t.cost());
    terms.push_back(j);
  }
  Json out;
  out["cost"] = upper_to_json(r.cost());
  out["terms"] = terms;
  return out;
}

}  // namespace

Json exponent_to_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

double exponent_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw ParseError("exponent must be a number or \"inf\"");
  }
  return number(j, "exponent");
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const Coeffs& u) {
  Json out = Json::array();
  for (const auto& c : u) out.push_back(to_json(c));
  return out;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("complex numbers must be [re, im] pairs");
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("vector must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
  }
  return m;
}

Coeffs coeffs_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("coefficients must be an array of matrices");
  Coeffs out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

Json to_json(const MeasureSpace& x) {
  Json out;
  out["atom_weights"] = x.atom_weights;
  return out;
}

MeasureSpace measure_from_json(const Json& j) { return MeasureSpace(numbers(field(j, "atom_weights"), "atom_weights")); }

Json to_json(const BaseSpace& e) {
  Json out;
  switch (e.kind) {
    case BaseKind::lp:
      out["kind"] = "lp";
      out["n"] = e.n;
      out["p"] = exponent_to_json(e.p);
      break;
    case BaseKind::weighted_l1:
      out["kind"] = "weighted_l1";
      out["weights"] = e.weights;
      break;
    case BaseKind::lp_sum:
      out["kind"] = "lp_sum";
      out["weights"] = e.weights;
      out["p"] = exponent_to_json(e.p);
      out["inner"] = to_json(*e.left);
      break;
    case BaseKind::tensor:
      out["kind"] = "tensor";
      out["left"] = to_json(*e.left);
      out["right"] = to_json(*e.right);
      break;
    case BaseKind::dual:
      out["kind"] = "dual";
      out["of"] = to_json(*e.left);
      break;
  }
  return out;
}

BasePtr base_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("base kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "lp") return BaseSpace::lp(integer(field(j, "n"), "n"), exponent_from_json(field(j, "p")));
  if (k == "weighted_l1") return BaseSpace::weighted_l1(numbers(field(j, "weights"), "weights"));
  if (k == "lp_sum")
    return BaseSpace::lp_sum(numbers(field(j, "weights"), "weights"), base_from_json(field(j, "inner")),
                             exponent_from_json(field(j, "p")));
  if (k == "tensor") return BaseSpace::tensor(base_from_json(field(j, "left")), base_from_json(field(j, "right")));
  if (k == "dual") return BaseSpace::dual(base_from_json(field(j, "of")));
  throw ParseError("unknown base kind '" + k + "'");
}

Json to_json(const PQSpace& e) {
  Json out;
  switch (e.kind) {
    case QuantKind::schatten:
      out["quantization"] = "schatten";
      out["p"] = exponent_to_json(e.p);
      out["base"] = to_json(*e.base);
      break;
    case QuantKind::min:
      out["quantization"] = "min";
      out["base"] = to_json(*e.base);
      break;
    case QuantKind::lp:
      out["quantization"] = "lp";
      out["p"] = exponent_to_json(e.p);
      out["measure"] = to_json(e.measure);
      out["inner"] = to_json(*e.first);
      break;
    case QuantKind::pr_tensor:
      out["quantization"] = "pr_tensor";
      out["left_base"] = to_json(*e.pr_left);
      out["right"] = to_json(*e.first);
      break;
    case QuantKind::pop_tensor:
      out["quantization"] = "pop_tensor";
      out["left"] = to_json(*e.first);
      out["right"] = to_json(*e.second);
      break;
    case QuantKind::cb_space:
      out["quantization"] = "cb_space";
      out["domain"] = to_json(*e.first);
      out["codomain"] = to_json(*e.second);
      break;
  }
  return out;
}

SpacePtr space_from_json(const Json& j) {
  const Json& q = field(j, "quantization");
  if (!q.is_string()) throw ParseError("quantization must be a string");
  const std::string k = q.get<std::string>();
  if (k == "schatten") return PQSpace::schatten(base_from_json(field(j, "base")), exponent_from_json(field(j, "p")));
  if (k == "max") return PQSpace::max(base_from_json(field(j, "base")));
  if (k == "min") return PQSpace::min(base_from_json(field(j, "base")));
  if (k == "lp")
    return PQSpace::lp(measure_from_json(field(j, "measure")), space_from_json(field(j, "inner")),
                       exponent_from_json(field(j, "p")));
  if (k == "pr_tensor") return PQSpace::pr_tensor(base_from_json(field(j, "left_base")), space_from_json(field(j, "right")));
  if (k == "pop_tensor") return PQSpace::pop_tensor(space_from_json(field(j, "left")), space_from_json(field(j, "right")));
  if (k == "cb_space") return PQSpace::cb_space(space_from_json(field(j, "domain")), space_from_json(field(j, "codomain")));
  throw ParseError("unknown quantization '" + k + "'");
}

Json to_json(const AmpElem& u) {
  Json out;
  out["ambient"] = to_json(*u.ambient());
  Json terms = Json::array();
  for (const auto& t : u.terms()) {
    Json term;
    term["matrix"] = to_json(t.coeff);
    term["vector"] = to_json(t.vec);
    terms.push_back(term);
  }
  out["terms"] = terms;
  return out;
}

AmpElem element_from_json(const Json& j) {
  SpacePtr ambient = space_from_json(field(j, "ambient"));
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw ParseError("terms must be an array");
  std::vector<AmpTerm> out;
  for (const auto& t : terms) out.push_back({matrix_from_json(field(t, "matrix")), vector_from_json(field(t, "vector"))});
  if (out.empty()) return AmpElem(std::move(ambient));
  return AmpElem(std::move(ambient), std::move(out));
}

OperatorDesc operator_from_json(const Json& j) {
  OperatorDesc op{space_from_json(field(j, "domain")), space_from_json(field(j, "codomain")),
                  matrix_from_json(field(j, "matrix")), j.value("label", std::string("operator"))};
  if (op.matrix.rows() != op.codomain->dimension() || op.matrix.cols() != op.domain->dimension())
    throw DimensionError("operator matrix shape does not match its spaces");
  return op;
}

BilinearDesc bilinear_from_json(const Json& j) {
  BilinearDesc rho{space_from_json(field(j, "left")), space_from_json(field(j, "right")),
                   space_from_json(field(j, "codomain")), {}, j.value("label", std::string("bilinear"))};
  const Json& comps = field(j, "components");
  if (!comps.is_array()) throw ParseError("components must be an array of matrices");
  for (const auto& c : comps) rho.components.push_back(matrix_from_json(c));
  if (static_cast<int>(rho.components.size()) != rho.codomain->dimension())
    throw DimensionError("bilinear: one component per codomain coordinate is required");
  for (const auto& c : rho.components)
    if (c.rows() != rho.left->dimension() || c.cols() != rho.right->dimension())
      throw DimensionError("bilinear: component shape mismatch");
  return rho;
}

Json to_json(const NormCertificate& c) {
  Json out;
  out["lower"] = c.lower;
  out["upper"] = upper_to_json(c.upper);
  out["method"] = c.method;
  out["seed"] = c.seed;
  out["heuristic"] = c.heuristic;
  Json upper;
  upper["kind"] = c.upper_witness.kind;
  upper["value"] = upper_to_json(c.upper_witness.value);
  if (c.upper_witness.kind == "decomposition") upper["decomposition"] = decomposition_to_json(c.upper_witness.decomposition);
  if (c.upper_witness.kind == "pop_representation")
    upper["representation"] = representation_to_json(c.upper_witness.representation);
  if (!c.upper_witness.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : c.upper_witness.parts) parts.push_back(to_json(p));
    upper["parts"] = parts;
  }
  Json lower;
  lower["kind"] = c.lower_witness.kind;
  if (!c.lower_witness.tag.empty()) lower["tag"] = c.lower_witness.tag;
  lower["value"] = c.lower_witness.value;
  if (!c.lower_witness.vectors.empty()) {
    Json vs = Json::array();
    for (const auto& v : c.lower_witness.vectors) vs.push_back(to_json(v));
    lower["vectors"] = vs;
  }
  if (!c.lower_witness.element.empty()) lower["element"] = to_json(c.lower_witness.element);
  out["witness"] = {{"upper", upper}, {"lower", lower}};
  return out;
}

Json to_json(const SupEstimate& s) {
  Json out;
  out["lower"] = s.lower;
  out["profile"] = s.profile;
  out["witness_level"] = s.witness_level;
  out["witness"] = to_json(s.witness);
  if (!s.witness_right.empty()) out["witness_right"] = to_json(s.witness_right);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace pqnorm
