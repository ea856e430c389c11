#pragma once

// The proto-operator-projective norm of E (x)pop F, the single-diamond
// op-norm, and the V_n family separating them.

#include "pqnorm/certificate.hpp"
#include "pqnorm/norms.hpp"

namespace pqnorm {

/// Best representation cost over structured candidates plus refinement.
NormCertificate pop_upper(const PQSpace& space, const Coeffs& u, const EngineOptions& opts = {},
                          const std::vector<PopRepresentation>& hints = {});
NormCertificate pop_upper(const AmpElem& u, const EngineOptions& opts = {},
                          const std::vector<PopRepresentation>& hints = {});

/// Functional-pair and structural lower bounds.
NormCertificate pop_lower(const PQSpace& space, const Coeffs& u, const EngineOptions& opts = {});
NormCertificate pop_lower(const AmpElem& u, const EngineOptions& opts = {});

/// Best single-diamond representation a . (u <> v) . b found.
NormCertificate op_norm_upper(const PQSpace& space, const Coeffs& u, const EngineOptions& opts = {},
                              const std::vector<PopRepresentation>& hints = {});
NormCertificate op_norm_upper(const AmpElem& u, const EngineOptions& opts = {},
                              const std::vector<PopRepresentation>& hints = {});

/// Norms of the factors of a term, recomputed as upper bounds.
PopTerm with_factor_norms(const PQSpace& space, PopTerm term, const EngineOptions& opts = {});

/// Reconstruction error of a representation against u, relative to max(1, scale).
double representation_error(const PopRepresentation& rep, const Coeffs& u);

/// Local gauge search u -> G u H with compensating outer factors.
PopTerm refine_term(const PQSpace& space, const PopTerm& term, const EngineOptions& opts);

/// L_1 over n unit atoms with values in ^(inf)C.
SpacePtr l1_scalar_space(int n);
/// V_n = sum_k P_k (e_k (x) e_k) with P_k the diagonal matrix units of level n,
/// in l1_scalar_space(n) (x)pop l1_scalar_space(n).
AmpElem vn_family(int n);
/// V_n at the given level with the supplied rank-one orthogonal projections.
AmpElem vn_family(int n, const std::vector<CMatrix>& projections);
/// sum_{first <= k < last} P_k (e_k (x) e_k) in the ambient of V_n.
AmpElem vn_part(int n, int first, int last);
/// Single-diamond representation of V_n of cost n^2 with ||a|| = ||b|| = 1.
PopRepresentation vn_witness(int n);
/// Witness for vn_part(n, first, last), of cost (last - first)^2.
PopRepresentation vn_witness(int n, int first, int last);
/// Random single-diamond representation of V_n: the explicit witness padded
/// by one dimension, with junk added in the padding and random gauges.
PopTerm random_vn_representation(int n, Rng& rng);

}  // namespace pqnorm
