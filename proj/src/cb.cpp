#include "pqnorm/cb.hpp"

#include "pqnorm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace pqnorm {

namespace {

/// One candidate of a sup search: one or two amplified factors.
using Point = std::vector<Coeffs>;
using RatioFn = std::function<double(const Point&)>;
using SeedFn = std::function<std::vector<Point>(int level, Rng& rng)>;

double safe_ratio(double num, double den) {
  if (!(den > 0.0) || std::isinf(den)) return 0.0;
  return num / den;
}

double domain_upper(const PQSpace& s, const Coeffs& u, const EngineOptions& opts) {
  return pq_bounds(s, u, opts).upper;
}

double image_lower(const PQSpace& s, const Coeffs& u, const EngineOptions& opts) {
  return pq_bounds(s, u, opts).lower;
}

Coeffs place(const CVector& x, const CMatrix& a) {
  Coeffs out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i) * a);
  return out;
}

CMatrix unit(int d, int k) {
  CMatrix m = CMatrix::Zero(d, d);
  m(k, k) = 1.0;
  return m;
}

/// E_11 (x) x, I_d (x) x and sum_k E_kk (x) x_k for the seed vectors.
std::vector<Coeffs> structured_seeds(const std::vector<CVector>& xs, int d) {
  std::vector<Coeffs> out;
  for (const auto& x : xs) {
    out.push_back(place(x, unit(d, 0)));
    if (d > 1) out.push_back(place(x, CMatrix::Identity(d, d)));
  }
  if (d > 1 && xs.size() > 1) {
    Coeffs mix = zero_coeffs(static_cast<int>(xs[0].size()), d);
    for (int k = 0; k < d; ++k) {
      const CVector& x = xs[static_cast<std::size_t>(k) % xs.size()];
      for (Eigen::Index i = 0; i < x.size(); ++i) mix[static_cast<std::size_t>(i)] += x(i) * unit(d, k);
    }
    out.push_back(mix);
  }
  return out;
}

Coeffs random_coeffs(Rng& rng, int n, int d) {
  Coeffs out;
  for (int i = 0; i < n; ++i) out.push_back(random_matrix(rng, d, d));
  return out;
}

double point_scale(const Coeffs& c) {
  double s = 0.0;
  for (const auto& m : c) s = std::max(s, m.cwiseAbs().maxCoeff());
  return s > 0.0 ? s : 1.0;
}

SupEstimate sup_search(int max_level, const SeedFn& seeds, const RatioFn& ratio, const EngineOptions& opts) {
  SupEstimate out;
  double best = 0.0;
  const int climbs = 3;
  const int iterations = std::max(10, opts.iterations / 4);
  for (int d = 1; d <= max_level; ++d) {
    Rng seed_rng = make_rng(opts.seed, 5000ULL + static_cast<std::uint64_t>(d));
    const std::vector<Point> cands = seeds(d, seed_rng);
    const auto values = map_indices<double>(static_cast<int>(cands.size()),
                                            [&](int i) { return ratio(cands[static_cast<std::size_t>(i)]); }, opts.exec);
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const int picks = std::min<int>(climbs, static_cast<int>(order.size()));
    struct Climbed {
      Point point;
      double value = 0.0;
    };
    const auto climbed = map_indices<Climbed>(
        picks,
        [&](int c) {
          Rng rng = make_rng(opts.seed, 9000ULL + 16ULL * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(c));
          Climbed cur{cands[order[static_cast<std::size_t>(c)]], values[order[static_cast<std::size_t>(c)]]};
          double step = 0.3;
          for (int it = 0; it < iterations; ++it) {
            Point next = cur.point;
            const int which = uniform_int(rng, 0, static_cast<int>(next.size()) - 1);
            Coeffs& factor = next[static_cast<std::size_t>(which)];
            const double scale = point_scale(factor);
            for (auto& m : factor) m += (step * scale) * random_matrix(rng, d, d);
            const double v = ratio(next);
            if (v > cur.value) {
              cur = {std::move(next), v};
              step = std::min(1.0, step * 1.3);
            } else {
              step = std::max(1e-4, step * 0.85);
            }
          }
          return cur;
        },
        opts.exec);
    for (std::size_t i = 0; i < order.size(); ++i)
      if (values[order[i]] > best) {
        best = values[order[i]];
        out.witness = cands[order[i]][0];
        out.witness_right = cands[order[i]].size() > 1 ? cands[order[i]][1] : Coeffs{};
        out.witness_level = d;
      }
    for (const auto& c : climbed)
      if (c.value > best) {
        best = c.value;
        out.witness = c.point[0];
        out.witness_right = c.point.size() > 1 ? c.point[1] : Coeffs{};
        out.witness_level = d;
      }
    out.profile.push_back(best);
  }
  out.lower = best;
  return out;
}

std::vector<CVector> basis_and_random(int n, Rng& rng, int extra) {
  std::vector<CVector> xs;
  for (int i = 0; i < n; ++i) xs.push_back(basis_vector(n, i));
  for (int r = 0; r < extra; ++r) xs.push_back(random_vector(rng, n));
  return xs;
}

}  // namespace

double operator_ratio(const OperatorDesc& phi, const Coeffs& u, const EngineOptions& opts) {
  const EngineOptions inner = nested_options(opts, 83);
  return safe_ratio(image_lower(*phi.codomain, amplify_operator(phi.matrix, u), inner),
                    domain_upper(*phi.domain, u, inner));
}

SupEstimate cb_norm_estimate(const OperatorDesc& phi, int max_level, const EngineOptions& opts) {
  if (max_level < 1) throw DimensionError("cb_norm_estimate: level cap must be at least 1");
  const int n = phi.domain->dimension();
  if (phi.matrix.cols() != n || phi.matrix.rows() != phi.codomain->dimension())
    throw DimensionError("cb_norm_estimate: operator shape mismatch");
  std::vector<CVector> xs;
  for (Eigen::Index k = 0; k < phi.matrix.rows(); ++k)
    if (phi.matrix.row(k).norm() > 0.0) xs.push_back(norming_vector(phi.matrix.row(k).transpose(), *phi.domain->base));
  {
    Rng rng = make_rng(opts.seed, 4999);
    for (auto& x : basis_and_random(n, rng, 1)) xs.push_back(x);
  }
  SeedFn seeds = [&](int d, Rng& rng) {
    std::vector<Point> pts;
    for (auto& c : structured_seeds(xs, d)) pts.push_back({c});
    for (int r = 0; r < std::max(1, opts.budget); ++r) pts.push_back({random_coeffs(rng, n, d)});
    return pts;
  };
  RatioFn ratio = [&](const Point& p) { return operator_ratio(phi, p[0], opts); };
  return sup_search(max_level, seeds, ratio, opts);
}

SupEstimate cb_bilinear_estimate(const BilinearDesc& rho, int max_level, const EngineOptions& opts) {
  if (max_level < 1) throw DimensionError("cb_bilinear_estimate: level cap must be at least 1");
  const int m = rho.left->dimension(), n = rho.right->dimension();
  std::vector<std::pair<CVector, CVector>> pairs;
  {
    Rng rng = make_rng(opts.seed, 4998);
    std::vector<CVector> y0 = basis_and_random(n, rng, 1);
    for (const auto& c : rho.components)
      for (const auto& y : y0) {
        const CVector cy = c * y;
        if (cy.norm() == 0.0) continue;
        const CVector x = norming_vector(cy, *rho.left->base);
        const CVector cx = c.transpose() * x;
        if (cx.norm() == 0.0) continue;
        pairs.emplace_back(x, norming_vector(cx, *rho.right->base));
      }
    if (pairs.empty()) pairs.emplace_back(basis_vector(m, 0), basis_vector(n, 0));
  }
  const EngineOptions inner = nested_options(opts, 89);
  SeedFn seeds = [&](int d, Rng& rng) {
    std::vector<Point> pts;
    for (const auto& [x, y] : pairs) {
      pts.push_back({place(x, unit(d, 0)), place(y, unit(d, 0))});
      if (d > 1) pts.push_back({place(x, CMatrix::Identity(d, d)), place(y, CMatrix::Identity(d, d))});
    }
    for (int r = 0; r < std::max(1, opts.budget); ++r) pts.push_back({random_coeffs(rng, m, d), random_coeffs(rng, n, d)});
    return pts;
  };
  RatioFn ratio = [&](const Point& p) {
    const double den = domain_upper(*rho.left, p[0], inner) * domain_upper(*rho.right, p[1], inner);
    return safe_ratio(image_lower(*rho.codomain, amplify_bioperator(rho.components, p[0], p[1]), inner), den);
  };
  return sup_search(max_level, seeds, ratio, opts);
}

double cbspace_ratio(const PQSpace& space, const Coeffs& phi, const Coeffs& u, const EngineOptions& opts) {
  const EngineOptions inner = nested_options(opts, 97);
  const int ne = space.first->dimension(), ng = space.second->dimension();
  return safe_ratio(image_lower(*space.second, evaluation(u, phi, ne, ng), inner), domain_upper(*space.first, u, inner));
}

SupEstimate cbspace_norm(const PQSpace& space, const Coeffs& phi_in, int max_level, const EngineOptions& opts) {
  if (space.kind != QuantKind::cb_space) throw DimensionError("cbspace_norm: ambient is not a CB space");
  if (static_cast<int>(phi_in.size()) != space.dimension()) throw DimensionError("cbspace_norm: shape mismatch");
  if (max_level < 1) throw DimensionError("cbspace_norm: level cap must be at least 1");
  const Coeffs phi = align_coeffs(phi_in, coeffs_level(phi_in));
  const int ne = space.first->dimension(), ng = space.second->dimension();
  bool zero = true;
  for (const auto& c : phi) zero = zero && c.norm() == 0.0;
  if (zero) {
    SupEstimate z;
    z.profile.assign(static_cast<std::size_t>(max_level), 0.0);
    z.witness = zero_coeffs(ne, 1);
    return z;
  }
  std::vector<CVector> xs;
  {
    std::size_t top = 0;
    for (std::size_t k = 1; k < phi.size(); ++k)
      if (phi[k].norm() > phi[top].norm()) top = k;
    const SingularForm sf = singular_triples(phi[top]);
    CMatrix reduced(ng, ne);
    for (int g = 0; g < ng; ++g)
      for (int e = 0; e < ne; ++e)
        reduced(g, e) = (sf.left.col(0).adjoint() * phi[static_cast<std::size_t>(g * ne + e)] * sf.right.row(0).adjoint())(0, 0);
    for (int g = 0; g < ng; ++g)
      if (reduced.row(g).norm() > 0.0) xs.push_back(norming_vector(reduced.row(g).transpose(), *space.first->base));
    Rng rng = make_rng(opts.seed, 4997);
    for (auto& x : basis_and_random(ne, rng, 1)) xs.push_back(x);
  }
  SeedFn seeds = [&](int d, Rng& rng) {
    std::vector<Point> pts;
    for (auto& c : structured_seeds(xs, d)) pts.push_back({c});
    for (int r = 0; r < std::max(1, opts.budget); ++r) pts.push_back({random_coeffs(rng, ne, d)});
    return pts;
  };
  RatioFn ratio = [&](const Point& p) { return cbspace_ratio(space, phi, p[0], opts); };
  return sup_search(max_level, seeds, ratio, opts);
}

SupEstimate cbspace_norm(const AmpElem& phi, int max_level, const EngineOptions& opts) {
  return cbspace_norm(*phi.ambient(), phi.coefficients(), max_level, opts);
}

}  // namespace pqnorm
