#pragma once

// Norm certificates: an interval [lower, upper] together with the data that
// produced each endpoint, so that either end can be recomputed independently.

#include "pqnorm/amplification.hpp"
#include "pqnorm/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pqnorm {

struct Interval {
  double lower = 0.0;
  double upper = kInf;

  static Interval exact(double v) { return {v, v}; }
  bool tight(double tol) const { return upper - lower <= tol * std::max(1.0, upper); }
};

/// tensor = left * right^T, term k pairing column k of each factor.
struct TensorDecomposition {
  CMatrix left;
  CMatrix right;
  std::vector<double> left_norms;
  std::vector<double> right_norms;
  double cost = 0.0;

  int length() const { return static_cast<int>(left.cols()); }
  CMatrix reconstruct() const { return left * right.transpose(); }
};

/// a . (u <> v) . b. u and v are dense coefficient lists in the two factors;
/// the stored norms are the factor upper bounds used for the cost.
struct PopTerm {
  CMatrix a;
  Coeffs u;
  Coeffs v;
  CMatrix b;
  double u_norm = 0.0;
  double v_norm = 0.0;

  double cost() const;
  /// Coefficients of the term at level max(level(a), level(u <> v), level(b)).
  Coeffs reconstruct() const;
};

struct PopRepresentation {
  std::vector<PopTerm> terms;

  double cost() const;
  Coeffs reconstruct(int dim) const;
};

struct NormCertificate;

struct UpperWitness {
  /// none | decomposition | pop_representation | atoms | bound
  std::string kind = "none";
  TensorDecomposition decomposition;
  PopRepresentation representation;
  std::vector<NormCertificate> parts;
  double value = kInf;
};

struct LowerWitness {
  /// none | exact | injective | absolute | functional | functional_pair |
  /// structural | sup_element | phase_grid | atoms
  std::string kind = "none";
  std::string tag;
  std::vector<CVector> vectors;
  Coeffs element;
  double value = 0.0;
};

struct NormCertificate {
  double lower = 0.0;
  double upper = kInf;
  std::string method;
  std::uint64_t seed = 0;
  bool heuristic = false;
  UpperWitness upper_witness;
  LowerWitness lower_witness;

  Interval interval() const { return {lower, upper}; }
};

}  // namespace pqnorm
