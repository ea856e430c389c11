#include "pqnorm/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pqnorm {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  // 53 random bits, independent of the library's distribution implementation
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int uniform_int(Rng& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller on our own uniforms keeps streams portable across standard libraries
  double u1 = uniform(rng);
  while (u1 <= 1e-300) u1 = uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Complex gaussian_complex(Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

CMatrix random_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = gaussian_complex(rng);
  return m;
}

CVector random_vector(Rng& rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = gaussian_complex(rng);
  return v;
}

CMatrix random_unitary(Rng& rng, int n) {
  const CMatrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

CMatrix random_near_identity(Rng& rng, int n, double spread) {
  for (;;) {
    CMatrix m = CMatrix::Identity(n, n) + (spread / std::sqrt(static_cast<double>(n))) * random_matrix(rng, n, n);
    if (Eigen::PartialPivLU<CMatrix>(m).rcond() > 0.05) return m;
  }
}

std::vector<CMatrix> random_orthogonal_projections(Rng& rng, int n, int d) {
  const CMatrix u = random_unitary(rng, d);
  std::vector<CMatrix> out;
  for (int k = 0; k < n; ++k) out.push_back(u.col(k) * u.col(k).adjoint());
  return out;
}

EngineOptions nested_options(const EngineOptions& o, std::uint64_t salt) {
  EngineOptions inner = o;
  inner.seed = o.seed * 1000003ULL + salt;
  inner.budget = 1;
  inner.iterations = std::min(o.iterations, 60);
  inner.level_cap = std::min(o.level_cap, 2);
  inner.exec = Execution::serial;
  return inner;
}

}  // namespace pqnorm
