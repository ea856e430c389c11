#pragma once

// Descriptors of finite-dimensional normed spaces and of the quantization
// rules that put a norm on their amplifications.
//
// Coordinate conventions (all row-major / atom-major):
//   tensor(E, F), pr_tensor, pop_tensor : index i * dim F + j
//   lp_sum / Lp(X, F)                   : index t * dim F + j, t the atom
//   cb_space(E, G)                      : index g * dim E + e, i.e. the
//                                          dim G x dim E matrix of the map

#include "pqnorm/matrix.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pqnorm {

struct BaseSpace;
struct PQSpace;
using BasePtr = std::shared_ptr<const BaseSpace>;
using SpacePtr = std::shared_ptr<const PQSpace>;

enum class BaseKind { lp, weighted_l1, lp_sum, tensor, dual };

/// A finite-dimensional normed space. `tensor` carries the classical
/// projective norm, `lp_sum` the weighted l_p-direct sum of copies of `left`.
struct BaseSpace {
  BaseKind kind = BaseKind::lp;
  int n = 0;
  double p = 1.0;
  std::vector<double> weights;
  BasePtr left;
  BasePtr right;

  int dimension() const;
  std::string describe() const;

  static BasePtr lp(int n, double p);
  static BasePtr weighted_l1(std::vector<double> weights);
  static BasePtr lp_sum(std::vector<double> weights, BasePtr inner, double p);
  static BasePtr tensor(BasePtr e, BasePtr f);
  static BasePtr dual(BasePtr e);
};

/// Finite atomic measure; integrals become weighted sums.
struct MeasureSpace {
  std::vector<double> atom_weights;

  MeasureSpace() = default;
  explicit MeasureSpace(std::vector<double> w);
  int size() const { return static_cast<int>(atom_weights.size()); }
  /// Cartesian product, atom (s, t) at index s * other.size() + t.
  MeasureSpace product(const MeasureSpace& other) const;
};

enum class QuantKind { schatten, min, lp, pr_tensor, pop_tensor, cb_space };

/// A base space together with a quantization rule.
///   schatten(p): amplification normed as K_p (x)_pr E; p = 1 is E_max.
///   min: K_inf (x)_inj E.
///   lp: L_p(X, first) over a finite atomic measure.
///   pr_tensor: pr_left (x)_pr first, quantized through the flip onto K first.
///   pop_tensor: first (x)_pop second.
///   cb_space: CB(first, second) with the evaluation-based quantization.
struct PQSpace {
  QuantKind kind = QuantKind::schatten;
  BasePtr base;
  double p = 1.0;
  MeasureSpace measure;
  SpacePtr first;
  SpacePtr second;
  BasePtr pr_left;

  int dimension() const { return base->dimension(); }
  std::string describe() const;

  static SpacePtr schatten(BasePtr e, double p);
  static SpacePtr max(BasePtr e) { return schatten(std::move(e), 1.0); }
  static SpacePtr min(BasePtr e);
  static SpacePtr lp(MeasureSpace x, SpacePtr inner, double p);
  static SpacePtr pr_tensor(BasePtr e, SpacePtr f);
  static SpacePtr pop_tensor(SpacePtr e, SpacePtr f);
  static SpacePtr cb_space(SpacePtr e, SpacePtr g);

  /// ^(p)C, the complex plane with amplification K_p.
  static SpacePtr scalars(double p) { return schatten(BaseSpace::lp(1, p), p); }
};

/// Weights w with ||x|| = sum_i w_i |x_i|, when the base norm has that form.
std::optional<std::vector<double>> l1_weights(const BaseSpace& e);

/// True for norms depending only on the moduli of coordinates (blockwise for
/// lp_sum with an absolute inner space).
bool is_absolute(const BaseSpace& e);

/// A guaranteed convexity exponent s: orthogonal-support sums satisfy
/// ||sum u_k|| <= (sum ||u_k||^s)^(1/s). Always >= 1.
double convexity_exponent(const PQSpace& e);

/// One-dimensional ^(p)C style space (1-dim base with schatten quantization).
bool is_scalar_line(const PQSpace& e);

/// Structural equality of descriptors.
bool same_space(const BaseSpace& a, const BaseSpace& b);
bool same_space(const PQSpace& a, const PQSpace& b);

}  // namespace pqnorm
