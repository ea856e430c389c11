#pragma once

// Norm evaluation for base spaces and for every quantization.
//
// Closed forms are used where they exist; everything else goes through the
// engines and comes back as an interval with witnesses.

#include "pqnorm/amplification.hpp"
#include "pqnorm/certificate.hpp"
#include "pqnorm/projective.hpp"
#include "pqnorm/search.hpp"

#include <optional>

namespace pqnorm {

// ---- base spaces ----

/// Interval for ||x||_E. Exact except for projective tensors without an l1
/// factor and for duals of those.
Interval base_norm_bounds(const CVector& x, const BaseSpace& e, const EngineOptions& opts = {});
/// Upper end when finite, else the lower end.
double base_norm(const CVector& x, const BaseSpace& e, const EngineOptions& opts = {});
/// Interval for the dual norm sup |sum x_i f_i| / ||x||_E.
Interval dual_norm_bounds(const CVector& f, const BaseSpace& e, const EngineOptions& opts = {});
/// f with sum x_i f_i close to ||x|| and dual norm close to 1.
CVector saturating_functional(const CVector& x, const BaseSpace& e, const EngineOptions& opts = {});
/// x with ||x|| at most 1 and sum x_i f_i close to the dual norm of f.
CVector norming_vector(const CVector& f, const BaseSpace& e, const EngineOptions& opts = {});

/// Dual side of the base norm, for the projective engine.
DualSide base_dual_side(const BaseSpace& e, const EngineOptions& opts = {});

// ---- underlying (level one) norm of a PQ-space ----

/// Upper bound on the norm of f as a functional on the underlying space.
double underlying_dual_upper(const CVector& f, const PQSpace& e, const EngineOptions& opts = {});
/// Functional nearly saturating x for the underlying norm (a search
/// direction; only its dual bound enters certificates).
CVector underlying_saturate(const CVector& x, const PQSpace& e, const EngineOptions& opts = {});
/// Weights w with underlying norm sum w_i |x_i|, if it has that form.
std::optional<std::vector<double>> underlying_l1_weights(const PQSpace& e);

// ---- quantized norms ----

NormCertificate pq_bounds(const PQSpace& space, const Coeffs& u, const EngineOptions& opts = {});
NormCertificate pq_norm(const AmpElem& u, const EngineOptions& opts = {});
/// Atom-wise evaluation in L_p(X, F).
NormCertificate norm_Lp(const AmpElem& u, const EngineOptions& opts = {});
/// Projective evaluation in E (x)pr F after the flip onto E (x) K F.
NormCertificate norm_pr_quant(const AmpElem& u, const EngineOptions& opts = {});

/// Tensor matrix and factor norms behind a decomposition witness for
/// schatten and pr_tensor spaces.
std::optional<ProjectiveProblem> projective_problem(const PQSpace& space, const Coeffs& u,
                                                    const EngineOptions& opts = {});

/// Largest deviation between the certificate's claimed bounds and a fresh
/// evaluation of its witnesses (including reconstruction errors).
double witness_discrepancy(const PQSpace& space, const Coeffs& u, const NormCertificate& cert,
                           const EngineOptions& opts = {});

/// Coefficients of the blocks of an element of a product index space:
/// block(u, outer, inner, s) = (u[s * inner + j])_j.
Coeffs coeff_block(const Coeffs& u, int inner, int s);

}  // namespace pqnorm
