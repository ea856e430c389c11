#pragma once

// Sup-type searches: cb-norms of operators and bioperators, and the norm of
// the CB(E, G) quantization. All results are certified lower bounds.

#include "pqnorm/amplification.hpp"
#include "pqnorm/certificate.hpp"
#include "pqnorm/search.hpp"

#include <vector>

namespace pqnorm {

struct SupEstimate {
  double lower = 0.0;
  /// Running best value after levels 1..D.
  std::vector<double> profile;
  Coeffs witness;
  Coeffs witness_right;
  int witness_level = 1;
};

/// Sup over searched u at levels <= D of lower||phi(u)|| / upper||u||.
SupEstimate cb_norm_estimate(const OperatorDesc& phi, int max_level, const EngineOptions& opts = {});

/// Sup over searched pairs (u, v) of lower||rho(u, v)|| / (upper||u|| upper||v||).
SupEstimate cb_bilinear_estimate(const BilinearDesc& rho, int max_level, const EngineOptions& opts = {});

/// Sup over searched u in K E of lower||E(u, Phi)|| / upper||u||, Phi in K CB(E, G).
SupEstimate cbspace_norm(const PQSpace& space, const Coeffs& phi, int max_level, const EngineOptions& opts = {});
SupEstimate cbspace_norm(const AmpElem& phi, int max_level, const EngineOptions& opts = {});

/// Ratio of a single candidate, as used by the searches.
double operator_ratio(const OperatorDesc& phi, const Coeffs& u, const EngineOptions& opts = {});
double cbspace_ratio(const PQSpace& space, const Coeffs& phi, const Coeffs& u, const EngineOptions& opts = {});

}  // namespace pqnorm
