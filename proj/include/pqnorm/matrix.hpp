#pragma once

// Dense complex linear algebra on finite levels.
//
// An operator in the finite-rank ideal is modelled as a square d x d complex
// matrix acting on the first d basis vectors of the ambient Hilbert space; the
// integer d is its level. Matrices of different levels are combined after
// zero-padding to the larger level (see embed / align).

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pqnorm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when shapes, levels or dimensions do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// a = left * diag(values) * right, values non-increasing.
struct SingularForm {
  CMatrix left;
  RVector values;
  CMatrix right;
};

inline int level(const CMatrix& a) { return static_cast<int>(a.rows()); }

/// Hölder conjugate exponent, with 1 <-> inf.
double conjugate_exponent(double p);

/// (sum s_k^p)^(1/p), max for p = inf. Rejects p < 1.
double lp_aggregate(std::span<const double> values, double p);

RVector singular_values(const CMatrix& a);
SingularForm singular_triples(const CMatrix& a);

/// Schatten p-norm, p in [1, inf].
double schatten_norm(const CMatrix& a, double p);
inline double operator_norm(const CMatrix& a) { return schatten_norm(a, kInf); }

/// Kronecker product under the index pairing (i1, i2) -> i1 * d2 + i2.
CMatrix diamond(const CMatrix& a, const CMatrix& b);

/// zeta -> <zeta, eta> xi, i.e. xi * eta^*.
CMatrix rank_one(const CVector& xi, const CVector& eta);

/// Permutation with flip * diamond(a, b) * flip^* = diamond(b, a) for a of
/// level d1 and b of level d2. Self-adjoint when d1 == d2.
CMatrix flip_unitary(int d1, int d2);

/// Zero-pads a into the top-left block of a d' x d' matrix.
CMatrix embed(const CMatrix& a, int new_level);

/// Both operands padded to the larger level.
std::pair<CMatrix, CMatrix> align(const CMatrix& a, const CMatrix& b);

/// (1/n) sum_m W'_m a W_m with W_m = sum_k zeta^{mk} P_k, zeta = exp(2 pi i / n).
/// The projections must be pairwise orthogonal rank-one projections.
CMatrix pinch_roots_of_unity(const CMatrix& a, std::span<const CMatrix> projections);

/// Orthogonal projection onto the column span of a, singular values below
/// rank_tol * max(s) treated as zero.
CMatrix range_projection(const CMatrix& a, double rank_tol = 1e-10);

int numerical_rank(const CMatrix& a, double rank_tol = 1e-10);

bool is_unitary(const CMatrix& a, double tol = 1e-10);

}  // namespace pqnorm
