#pragma once

// Classical projective tensor norm of a tensor T = sum_k a_k (x) b_k, with
// T stored as the matrix sum_k a_k b_k^T. Upper bounds come from explicit
// decompositions, lower bounds from norm-one bilinear forms.

#include "pqnorm/certificate.hpp"
#include "pqnorm/search.hpp"

#include <functional>

namespace pqnorm {

using VectorNorm = std::function<double(const CVector&)>;

struct ProjectiveProblem {
  CMatrix tensor;
  VectorNorm left_norm;
  VectorNorm right_norm;
};

double decomposition_cost(const ProjectiveProblem& prob, const CMatrix& left, const CMatrix& right,
                          std::vector<double>* left_norms = nullptr,
                          std::vector<double>* right_norms = nullptr);

/// Columns of the tensor against the standard basis of the right factor.
TensorDecomposition standard_decomposition(const ProjectiveProblem& prob);
/// Singular value decomposition split into rank-one terms.
TensorDecomposition svd_decomposition(const ProjectiveProblem& prob);

/// Best decomposition found by gauge-move local search from structured seeds
/// plus `budget` restarts. Never below the true projective norm.
TensorDecomposition proj_norm_upper(const ProjectiveProblem& prob, const EngineOptions& opts,
                                    const std::vector<TensorDecomposition>& extra_seeds = {});

/// Dual data of one factor: `saturate(y)` returns a functional f with
/// <y, f> close to ||y|| (bilinear pairing sum y_i f_i), `dual_upper(f)` an
/// upper bound on the dual norm of f.
struct DualSide {
  std::function<CVector(const CVector&)> saturate;
  VectorNorm dual_upper;
};

struct InjectiveWitness {
  CVector g;
  CVector h;
  double value = 0.0;
};

double injective_value(const CMatrix& tensor, const CVector& g, const CVector& h, const DualSide& left,
                       const DualSide& right);

/// Sup over searched product functionals g (x) h of |g^T T h| / (||g|| ||h||),
/// by alternating saturation. A lower bound on every reasonable tensor norm.
InjectiveWitness proj_norm_lower(const CMatrix& tensor, const DualSide& left, const DualSide& right,
                                 const EngineOptions& opts);

/// Column-major flattening of a square matrix and its inverse.
CVector flatten(const CMatrix& a);
CMatrix unflatten(const CVector& v, int level);

/// Schatten-p dual data on flattened matrices.
DualSide schatten_dual_side(double p, int level);
CVector schatten_saturate(const CMatrix& a, double p);

}  // namespace pqnorm
