#include "pqnorm/matrix.hpp"

#include "pqnorm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pqnorm {

double conjugate_exponent(double p) {
  if (p < 1.0) throw std::invalid_argument("exponent must be >= 1");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_aggregate(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("exponent must be >= 1");
  if (values.empty()) return 0.0;
  if (std::isinf(p)) return *std::max_element(values.begin(), values.end());
  const double top = *std::max_element(values.begin(), values.end());
  if (top == 0.0) return 0.0;
  if (std::isinf(top)) return kInf;
  // scaled to avoid overflow for large p
  double acc = 0.0;
  for (double v : values) acc += std::pow(v / top, p);
  return top * std::pow(acc, 1.0 / p);
}

RVector singular_values(const CMatrix& a) {
  if (a.size() == 0) return RVector();
  if (a.rows() == 1 && a.cols() == 1) return RVector::Constant(1, std::abs(a(0, 0)));
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

SingularForm singular_triples(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV().adjoint()};
}

double schatten_norm(const CMatrix& a, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("Schatten exponent must be >= 1");
  if (a.size() == 0) return 0.0;
  const RVector s = singular_values(a);
  return lp_aggregate(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())), p);
}

CMatrix diamond(const CMatrix& a, const CMatrix& b) {
  if (a.rows() * b.rows() >= 64) return kernels::kron_parallel(a, b);
  return kernels::kron_serial(a, b);
}

CMatrix rank_one(const CVector& xi, const CVector& eta) {
  if (xi.size() != eta.size()) throw DimensionError("rank_one: vector lengths differ");
  return xi * eta.adjoint();
}

CMatrix flip_unitary(int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw DimensionError("flip_unitary: levels must be positive");
  const int n = d1 * d2;
  CMatrix f = CMatrix::Zero(n, n);
  // e_{i*d2 + j} -> e_{j*d1 + i}
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) f(j * d1 + i, i * d2 + j) = 1.0;
  return f;
}

CMatrix embed(const CMatrix& a, int new_level) {
  if (new_level < level(a)) throw DimensionError("embed: target level below current level");
  if (new_level == level(a)) return a;
  CMatrix out = CMatrix::Zero(new_level, new_level);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

std::pair<CMatrix, CMatrix> align(const CMatrix& a, const CMatrix& b) {
  const int d = std::max(level(a), level(b));
  return {embed(a, d), embed(b, d)};
}

namespace {

void check_rank_one_projections(std::span<const CMatrix> ps, double tol) {
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const CMatrix& p = ps[k];
    if (p.rows() != p.cols()) throw DimensionError("projection must be square");
    if ((p * p - p).norm() > tol || (p.adjoint() - p).norm() > tol)
      throw std::invalid_argument("pinch: input is not an orthogonal projection");
    if (std::abs(p.trace().real() - 1.0) > tol)
      throw std::invalid_argument("pinch: projection is not rank one");
    for (std::size_t l = 0; l < k; ++l) {
      auto [x, y] = align(p, ps[l]);
      if ((x * y).norm() > tol) throw std::invalid_argument("pinch: projections not orthogonal");
    }
  }
}

}  // namespace

CMatrix pinch_roots_of_unity(const CMatrix& a, std::span<const CMatrix> projections) {
  if (projections.empty()) throw std::invalid_argument("pinch: no projections");
  check_rank_one_projections(projections, 1e-9);
  const int n = static_cast<int>(projections.size());
  int d = level(a);
  for (const auto& p : projections) d = std::max(d, level(p));
  const CMatrix x = embed(a, d);
  std::vector<CMatrix> ps;
  ps.reserve(projections.size());
  for (const auto& p : projections) ps.push_back(embed(p, d));

  CMatrix acc = CMatrix::Zero(d, d);
  for (int m = 1; m <= n; ++m) {
    CMatrix w = CMatrix::Zero(d, d);
    CMatrix w_conj = CMatrix::Zero(d, d);
    for (int k = 1; k <= n; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((m * k) % n) / n;
      const Complex z = std::polar(1.0, angle);
      w += z * ps[static_cast<std::size_t>(k - 1)];
      w_conj += std::conj(z) * ps[static_cast<std::size_t>(k - 1)];
    }
    acc += w_conj * x * w;
  }
  return acc / static_cast<double>(n);
}

int numerical_rank(const CMatrix& a, double rank_tol) {
  if (a.size() == 0) return 0;
  const RVector s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

CMatrix range_projection(const CMatrix& a, double rank_tol) {
  const int n = static_cast<int>(a.rows());
  if (a.size() == 0) return CMatrix::Zero(n, n);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
  const RVector& s = svd.singularValues();
  CMatrix proj = CMatrix::Zero(n, n);
  if (s.size() == 0 || s(0) == 0.0) return proj;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= rank_tol * s(0)) break;
    const CVector col = svd.matrixU().col(i);
    proj += col * col.adjoint();
  }
  return proj;
}

bool is_unitary(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a.adjoint() * a - CMatrix::Identity(a.rows(), a.cols())).norm() <= tol;
}

}  // namespace pqnorm
