#include "pqnorm/verify.hpp"

#include "pqnorm/cb.hpp"
#include "pqnorm/pop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace pqnorm {

namespace {

constexpr double kTiny = 1e-300;

struct Outcome {
  double margin = 0.0;
  double violation = 0.0;
  int instances = 0;

  void bad(double v) {
    margin = std::max(margin, v);
    violation = std::max(violation, v);
  }
  void gap(double g) { margin = std::max(margin, g); }
};

struct Ctx {
  std::uint64_t seed;
  Sizes sizes;
  Rng rng;
  EngineOptions opts;
};

using CheckFn = std::function<Outcome(Ctx&)>;

struct Entry {
  std::string anchor;
  double tolerance;
  int max_d;
  int max_n;
  CheckFn fn;
};

std::uint64_t name_stream(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// ---- small builders ----

Coeffs rand_coeffs(Rng& rng, int dim, int d) {
  Coeffs out;
  for (int i = 0; i < dim; ++i) out.push_back(random_matrix(rng, d, d));
  return out;
}

Coeffs level_one(const CVector& x) {
  Coeffs out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(CMatrix::Constant(1, 1, x(i)));
  return out;
}

Coeffs times(const CVector& x, const CMatrix& a) {
  Coeffs out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i) * a);
  return out;
}

Coeffs act(const CMatrix& a, const Coeffs& u, const CMatrix& b) {
  Coeffs out;
  for (const auto& c : u) out.push_back(a * c * b);
  return out;
}

Coeffs left_diamond(const CMatrix& a, const Coeffs& u) {
  Coeffs out;
  for (const auto& c : u) out.push_back(diamond(a, c));
  return out;
}

Coeffs right_diamond(const Coeffs& u, const CMatrix& a) {
  Coeffs out;
  for (const auto& c : u) out.push_back(diamond(c, a));
  return out;
}

Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

/// u and v with supports W diag(I, 0) W^* and W diag(0, I) W^* at level 2d.
std::pair<Coeffs, Coeffs> orthogonal_pair(Rng& rng, int dim, int d) {
  const CMatrix w = random_unitary(rng, 2 * d);
  Coeffs u, v;
  for (int i = 0; i < dim; ++i) {
    CMatrix a = CMatrix::Zero(2 * d, 2 * d), b = CMatrix::Zero(2 * d, 2 * d);
    a.topLeftCorner(d, d) = random_matrix(rng, d, d);
    b.bottomRightCorner(d, d) = random_matrix(rng, d, d);
    u.push_back(w * a * w.adjoint());
    v.push_back(w * b * w.adjoint());
  }
  return {u, v};
}

CMatrix random_rank_one(Rng& rng, int d) { return rank_one(random_vector(rng, d), random_vector(rng, d)); }

double max_entry_diff(const Coeffs& a, const Coeffs& b) {
  double worst = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [x, y] = align(a[i], b[i]);
    worst = std::max(worst, (x - y).cwiseAbs().maxCoeff());
    scale = std::max(scale, x.cwiseAbs().maxCoeff());
  }
  return worst / scale;
}

Interval bounds(const PQSpace& s, const Coeffs& u, const EngineOptions& opts) { return pq_bounds(s, u, opts).interval(); }

Interval scaled(Interval i, double c) { return {i.lower * c, i.upper * c}; }

// ---- comparisons ----

/// Claim: value lies in `iv`, known reference `ref`.
void bracket(Outcome& o, Interval iv, double ref) {
  const double scale = std::max(std::abs(ref), kTiny);
  o.bad(std::max({0.0, iv.lower - ref, ref - iv.upper}) / scale);
  o.gap((iv.upper - iv.lower) / scale);
  ++o.instances;
}

/// Claim: the two quantities are equal.
void agree(Outcome& o, Interval a, Interval b) {
  const double scale = std::max({a.upper, b.upper, kTiny});
  if (std::isinf(scale)) {
    o.bad(1.0);
    return;
  }
  o.bad(std::max({0.0, a.lower - b.upper, b.lower - a.upper}) / scale);
  o.gap(std::max(a.upper - a.lower, b.upper - b.lower) / scale);
  ++o.instances;
}

/// Claim: lhs <= rhs, checked as lower(lhs) <= upper(rhs).
void at_most(Outcome& o, double lhs_lower, double rhs_upper) {
  const double scale = std::max(std::abs(rhs_upper), 1.0);
  o.bad(std::max(0.0, lhs_lower - rhs_upper) / scale);
  ++o.instances;
}

void close(Outcome& o, double value, double ref) {
  o.bad(std::abs(value - ref) / std::max(std::abs(ref), kTiny));
  ++o.instances;
}

// ---- space catalogue ----

MeasureSpace two_atoms() { return MeasureSpace({1.0, 0.5}); }

/// Spaces whose norms have closed forms.
std::vector<SpacePtr> exact_spaces(int n) {
  return {PQSpace::scalars(1.0),
          PQSpace::scalars(2.0),
          PQSpace::scalars(kInf),
          PQSpace::schatten(BaseSpace::lp(n, 1.0), 2.0),
          PQSpace::max(BaseSpace::weighted_l1(std::vector<double>{1.0, 2.5})),
          PQSpace::lp(two_atoms(), PQSpace::scalars(2.0), 2.0),
          PQSpace::lp(two_atoms(), PQSpace::scalars(kInf), 1.0),
          PQSpace::pr_tensor(BaseSpace::lp(2, 1.0), PQSpace::scalars(2.0))};
}

/// Spaces evaluated through the search engines.
std::vector<SpacePtr> engine_spaces(int n) {
  return {PQSpace::schatten(BaseSpace::lp(n, 2.0), 2.0), PQSpace::min(BaseSpace::lp(n, 1.0)),
          PQSpace::min(BaseSpace::lp(2, 2.0)),
          PQSpace::pop_tensor(PQSpace::scalars(1.0), PQSpace::scalars(2.0))};
}

std::vector<SpacePtr> all_spaces(int n) {
  auto out = exact_spaces(n);
  for (auto& s : engine_spaces(n)) out.push_back(s);
  return out;
}

/// L^p-spaces among the catalogue, with their exponent.
std::vector<std::pair<SpacePtr, double>> lp_type_spaces() {
  return {{PQSpace::scalars(1.0), 1.0},
          {PQSpace::scalars(2.0), 2.0},
          {PQSpace::scalars(kInf), kInf},
          {PQSpace::lp(two_atoms(), PQSpace::scalars(2.0), 2.0), 2.0},
          {PQSpace::lp(two_atoms(), PQSpace::scalars(1.0), 1.0), 1.0}};
}

Interval dual_interval(const CVector& f, const PQSpace& e, const EngineOptions& opts) {
  return dual_norm_bounds(f, *e.base, opts);
}

/// Two-part check for a bioperator claimed to be completely contractive.
void contractive_bioperator(Outcome& o, Ctx& c, const BilinearDesc& rho, int pairs) {
  const int d = std::min(c.sizes.d, 2);
  for (int k = 0; k < pairs; ++k) {
    const Coeffs u = rand_coeffs(c.rng, rho.left->dimension(), d);
    const Coeffs v = rand_coeffs(c.rng, rho.right->dimension(), d);
    const double lhs = pq_bounds(*rho.codomain, amplify_bioperator(rho.components, u, v), c.opts).lower;
    const double rhs = pq_bounds(*rho.left, u, c.opts).upper * pq_bounds(*rho.right, v, c.opts).upper;
    at_most(o, lhs, rhs);
  }
  const SupEstimate est = cb_bilinear_estimate(rho, std::min(c.sizes.d, 3), c.opts);
  at_most(o, est.lower, 1.0);
}

std::vector<double> exponents() { return {1.0, 1.5, 2.0, 4.0, kInf}; }

// ---- checks ----

Outcome bimodule_contractivity(Ctx& c) {
  Outcome o;
  const int d = c.sizes.d, n = c.sizes.n;
  for (const auto& s : all_spaces(n)) {
    const int dim = s->dimension();
    at_most(o, pq_bounds(*s, act(random_matrix(c.rng, d, d), zero_coeffs(dim, d), random_matrix(c.rng, d, d)), c.opts).lower,
            0.0);
    for (int k = 0; k < 2; ++k) {
      const Coeffs u = rand_coeffs(c.rng, dim, d);
      const CMatrix a = random_matrix(c.rng, d, d), b = random_matrix(c.rng, d, d);
      const double lhs = pq_bounds(*s, act(a, u, b), c.opts).lower;
      at_most(o, lhs, operator_norm(a) * pq_bounds(*s, u, c.opts).upper * operator_norm(b));
    }
  }
  return o;
}

Outcome max_quantization_l1_additivity(Ctx& c) {
  Outcome o;
  const int d = c.sizes.d;
  const int m = std::clamp(c.sizes.n, 2, 3);
  for (const auto& s : {PQSpace::max(BaseSpace::lp(m, 1.0)), PQSpace::max(BaseSpace::lp(2, 2.0))}) {
    const bool exact = s->base->p == 1.0;
    for (int k = 0; k < 5; ++k) {
      auto [u, v] = orthogonal_pair(c.rng, s->dimension(), d);
      const Interval su = bounds(*s, u, c.opts), sv = bounds(*s, v, c.opts), sw = bounds(*s, add(u, v), c.opts);
      if (exact) {
        agree(o, sw, {su.lower + sv.lower, su.upper + sv.upper});
      } else {
        // engine-backed base: only the certified direction of additivity
        at_most(o, su.lower + sv.lower, sw.upper * (1.0 + 1e-9));
        at_most(o, sw.lower, su.upper + sv.upper);
      }
    }
  }
  return o;
}

Outcome schatten_line_lp_additivity(Ctx& c) {
  Outcome o;
  const int d = c.sizes.d;
  for (double p : exponents()) {
    const SpacePtr s = PQSpace::scalars(p);
    for (int k = 0; k < 3; ++k) {
      auto [u, v] = orthogonal_pair(c.rng, 1, d);
      const double nu = pq_bounds(*s, u, c.opts).upper, nv = pq_bounds(*s, v, c.opts).upper;
      const std::vector<double> parts{nu, nv};
      bracket(o, bounds(*s, add(u, v), c.opts), lp_aggregate(parts, p));
    }
  }
  return o;
}

Outcome elementary_tensor_norms(Ctx& c) {
  Outcome o;
  const int d = c.sizes.d, n = c.sizes.n;
  for (const auto& [s, p] : lp_type_spaces()) {
    const CMatrix a = random_matrix(c.rng, d, d);
    const CVector x = random_vector(c.rng, s->dimension());
    agree(o, bounds(*s, times(x, a), c.opts), scaled(bounds(*s, level_one(x), c.opts), schatten_norm(a, p)));
  }
  for (double p : {1.0, 2.0, kInf})
    for (double q : {1.0, 2.0, kInf}) {
      const SpacePtr s = PQSpace::schatten(BaseSpace::lp(n, q), p);
      const CMatrix a = random_matrix(c.rng, d, d);
      const CVector x = random_vector(c.rng, n);
      bracket(o, bounds(*s, times(x, a), c.opts), schatten_norm(a, p) * base_norm(x, *s->base));
    }
  for (const auto& s : all_spaces(n)) {
    const CMatrix a = random_matrix(c.rng, d, d);
    const CVector x = random_vector(c.rng, s->dimension());
    at_most(o, pq_bounds(*s, times(x, a), c.opts).lower, schatten_norm(a, 1.0) * pq_bounds(*s, level_one(x), c.opts).upper);
  }
  return o;
}

Outcome rank_one_underlying_recovery(Ctx& c) {
  Outcome o;
  const int d = c.sizes.d, n = c.sizes.n;
  for (const auto& s : all_spaces(n)) {
    CVector xi = random_vector(c.rng, d), eta = random_vector(c.rng, d);
    xi.normalize();
    eta.normalize();
    const CVector x = random_vector(c.rng, s->dimension());
    agree(o, bounds(*s, times(x, rank_one(xi, eta)), c.opts), bounds(*s, level_one(x), c.opts));
  }
  return o;
}

Outcome scalar_functional_cb_norm(Ctx& c) {
  Outcome o;
  const int levels = c.sizes.d;
  auto check = [&](const OperatorDesc& phi, Interval ref) {
    const double est = cb_norm_estimate(phi, levels, c.opts).lower;
    o.bad(std::max(0.0, est - ref.upper) / ref.upper);
    o.bad(std::max(0.0, ref.lower - est) / ref.upper);
    ++o.instances;
  };
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 2}, {2, kInf}, {1, kInf}, {1.5, 3}}) {
    OperatorDesc id = OperatorDesc::identity(PQSpace::scalars(p));
    id.codomain = PQSpace::scalars(q);
    check(id, Interval::exact(1.0));
  }
  for (double p : {1.0, 2.0}) {
    const SpacePtr e = PQSpace::lp(two_atoms(), PQSpace::scalars(p), p);
    const CVector f = random_vector(c.rng, e->dimension());
    check(OperatorDesc::functional(e, f, PQSpace::scalars(std::max(p, 2.0))), dual_interval(f, *e, c.opts));
  }
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(c.sizes.n, 2.0), 2.0);
  const CVector f = random_vector(c.rng, e->dimension());
  check(OperatorDesc::functional(e, f, PQSpace::scalars(kInf)), dual_interval(f, *e, c.opts));
  return o;
}

Outcome identity_cb_growth(Ctx& c) {
  Outcome o;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{2, 1}, {kInf, 2}, {3, 1.5}}) {
    OperatorDesc id = OperatorDesc::identity(PQSpace::scalars(p));
    id.codomain = PQSpace::scalars(q);
    for (int m = 1; m <= std::max(2, c.sizes.n); ++m) {
      const auto ps = random_orthogonal_projections(c.rng, m, m);
      CMatrix sum = CMatrix::Zero(m, m);
      for (const auto& pk : ps) sum += pk;
      const double target = std::pow(static_cast<double>(m), 1.0 / q - (std::isinf(p) ? 0.0 : 1.0 / p));
      close(o, operator_ratio(id, Coeffs{sum}, c.opts), target);
    }
  }
  return o;
}

Outcome roots_of_unity_pinching(Ctx& c) {
  Outcome o;
  const int d = std::max(2, c.sizes.d);
  for (int k = 0; k < 20; ++k) {
    const CMatrix a = random_matrix(c.rng, d, d);
    for (int n = 1; n <= d; ++n) {
      const auto ps = random_orthogonal_projections(c.rng, n, d);
      CMatrix direct = CMatrix::Zero(d, d);
      for (const auto& p : ps) direct += p * a * p;
      o.bad(operator_norm(pinch_roots_of_unity(a, ps) - direct));
      ++o.instances;
    }
  }
  return o;
}

Outcome functional_product_cb(Ctx& c) {
  Outcome o;
  const std::vector<std::pair<SpacePtr, SpacePtr>> pairs{
      {PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), PQSpace::min(BaseSpace::lp(2, 2.0))},
      {PQSpace::scalars(1.0), PQSpace::lp(two_atoms(), PQSpace::scalars(2.0), 2.0)}};
  for (const auto& [e, f] : pairs) {
    const CVector fx = random_vector(c.rng, e->dimension()), gy = random_vector(c.rng, f->dimension());
    const Interval fe = dual_interval(fx, *e, c.opts), gf = dual_interval(gy, *f, c.opts);
    const double est = cb_bilinear_estimate(BilinearDesc::functional_product(e, fx, f, gy), std::min(c.sizes.d, 3), c.opts).lower;
    o.bad(std::max(0.0, est - fe.upper * gf.upper) / (fe.upper * gf.upper));
    o.bad(std::max(0.0, fe.lower * gf.lower - est) / (fe.upper * gf.upper));
    ++o.instances;
  }
  return o;
}

Outcome flip_diamond_symmetry(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 3);
  for (const auto& s : exact_spaces(c.sizes.n)) {
    const Coeffs u = rand_coeffs(c.rng, s->dimension(), d);
    const CMatrix a = random_matrix(c.rng, 2, 2);
    agree(o, bounds(*s, left_diamond(a, u), c.opts), bounds(*s, right_diamond(u, a), c.opts));
  }
  return o;
}

Outcome rank_one_diamond_scaling(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 3);
  for (const auto& s : exact_spaces(c.sizes.n)) {
    const Coeffs u = rand_coeffs(c.rng, s->dimension(), d);
    const CMatrix q = random_rank_one(c.rng, 2);
    agree(o, bounds(*s, left_diamond(q, u), c.opts), scaled(bounds(*s, u, c.opts), operator_norm(q)));
  }
  return o;
}

Outcome diamond_schatten_bound(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 3);
  for (const auto& [s, p] : lp_type_spaces()) {
    const Coeffs u = rand_coeffs(c.rng, s->dimension(), d);
    const CMatrix a = random_matrix(c.rng, 2, 2);
    agree(o, bounds(*s, left_diamond(a, u), c.opts), scaled(bounds(*s, u, c.opts), schatten_norm(a, p)));
  }
  for (const auto& s : all_spaces(c.sizes.n)) {
    const Coeffs u = rand_coeffs(c.rng, s->dimension(), 2);
    const CMatrix a = random_matrix(c.rng, 2, 2);
    at_most(o, pq_bounds(*s, left_diamond(a, u), c.opts).lower, schatten_norm(a, 1.0) * pq_bounds(*s, u, c.opts).upper);
  }
  return o;
}

Outcome lp_module_bioperator_contractive(Ctx& c) {
  Outcome o;
  for (double p : {1.0, 2.0}) {
    const SpacePtr left = PQSpace::lp(two_atoms(), PQSpace::scalars(p), p);
    for (const SpacePtr& f : {PQSpace::scalars(std::max(p, 2.0)), PQSpace::lp(MeasureSpace({0.7, 1.3}), PQSpace::scalars(p), p)}) {
      const SpacePtr target = PQSpace::lp(two_atoms(), f, p);
      contractive_bioperator(o, c, BilinearDesc::canonical(left, f, target), 3);
    }
  }
  return o;
}

Outcome canonical_bioperator_contractive(Ctx& c) {
  Outcome o;
  struct Case {
    double p;
    BasePtr e;
    SpacePtr f;
  };
  const std::vector<Case> cases{{1.0, BaseSpace::lp(2, 2.0), PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0)},
                                {2.0, BaseSpace::lp(2, 1.0), PQSpace::scalars(2.0)},
                                {2.0, BaseSpace::lp(2, 1.0), PQSpace::lp(two_atoms(), PQSpace::scalars(3.0), 2.0)},
                                {2.0, BaseSpace::lp(1, 1.0), PQSpace::scalars(kInf)}};
  for (const auto& cs : cases) {
    const SpacePtr left = PQSpace::schatten(cs.e, cs.p);
    const SpacePtr target = cs.e->dimension() == 1 ? cs.f : PQSpace::pr_tensor(cs.e, cs.f);
    contractive_bioperator(o, c, BilinearDesc::canonical(left, cs.f, target), 3);
  }
  return o;
}

Outcome schatten_diamond_multiplicativity(Ctx& c) {
  Outcome o;
  const int d = std::max(2, std::min(c.sizes.d, 3));
  for (int k = 0; k < 20; ++k) {
    const CMatrix a = random_matrix(c.rng, d, d), b = random_matrix(c.rng, d, d);
    for (double p : exponents()) close(o, schatten_norm(diamond(a, b), p), schatten_norm(a, p) * schatten_norm(b, p));
  }
  return o;
}

Outcome mixed_exponent_bioperator_contractive(Ctx& c) {
  Outcome o;
  const BasePtr e = BaseSpace::lp(2, 1.0), f = BaseSpace::lp(2, 1.0);
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 2}, {2, 1}, {2, kInf}, {1, 1}}) {
    const SpacePtr left = PQSpace::schatten(e, p), right = PQSpace::schatten(f, q);
    const SpacePtr target = PQSpace::schatten(BaseSpace::tensor(e, f), std::max(p, q));
    contractive_bioperator(o, c, BilinearDesc::canonical(left, right, target), 3);
  }
  return o;
}

Outcome diamond_module_compatibility(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 3);
  for (int k = 0; k < 5; ++k) {
    const Coeffs u = rand_coeffs(c.rng, 2, d), v = rand_coeffs(c.rng, 3, d);
    const CMatrix a = random_matrix(c.rng, d, d), b = random_matrix(c.rng, d, d);
    const CMatrix a2 = random_matrix(c.rng, d, d), b2 = random_matrix(c.rng, d, d);
    const Coeffs lhs = act(diamond(a, b), amp_diamond(u, v), diamond(a2, b2));
    const Coeffs rhs = amp_diamond(act(a, u, a2), act(b, v, b2));
    o.bad(max_entry_diff(lhs, rhs));
    ++o.instances;
  }
  return o;
}

Outcome linearization_compatibility(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 3);
  const SpacePtr g = PQSpace::schatten(BaseSpace::lp(2, 1.0), 1.0);
  const SpacePtr left = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), right = PQSpace::min(BaseSpace::lp(3, 2.0));
  for (int k = 0; k < 5; ++k) {
    BilinearDesc rho{left, right, g, {random_matrix(c.rng, 2, 3), random_matrix(c.rng, 2, 3)}, "random"};
    const Coeffs u = rand_coeffs(c.rng, 2, d), v = rand_coeffs(c.rng, 3, d);
    const OperatorDesc r = linearize(rho);
    o.bad(max_entry_diff(amplify_operator(r.matrix, amp_diamond(u, v)), amplify_bioperator(rho.components, u, v)));
    ++o.instances;
  }
  return o;
}

Outcome pop_diamond_cross_bound(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 2);
  const std::vector<SpacePtr> factors{PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0),
                                      PQSpace::lp(two_atoms(), PQSpace::scalars(3.0), 2.0), PQSpace::scalars(1.0),
                                      PQSpace::scalars(kInf)};
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i; j < factors.size(); j += 2) {
      const PQSpace& e = *factors[i];
      const PQSpace& f = *factors[j];
      const SpacePtr pop = PQSpace::pop_tensor(factors[i], factors[j]);
      const Coeffs u = rand_coeffs(c.rng, e.dimension(), d), v = rand_coeffs(c.rng, f.dimension(), d);
      at_most(o, pop_upper(*pop, amp_diamond(u, v), c.opts).upper, pq_bounds(e, u, c.opts).upper * pq_bounds(f, v, c.opts).upper);
      const CVector x = random_vector(c.rng, e.dimension()), y = random_vector(c.rng, f.dimension());
      at_most(o, pop_upper(*pop, level_one(tensor_vectors(x, y)), c.opts).upper,
              pq_bounds(e, level_one(x), c.opts).upper * pq_bounds(f, level_one(y), c.opts).upper);
    }
  return o;
}

/// pop certificate against an exact reference space on the same coordinates.
void pop_matches(Outcome& o, Ctx& c, const SpacePtr& pop, const SpacePtr& reference, int samples) {
  const int d = std::min(c.sizes.d, 3);
  for (int k = 0; k < samples; ++k) {
    const Coeffs u = rand_coeffs(c.rng, pop->dimension(), d);
    const NormCertificate up = pop_upper(*pop, u, c.opts), lo = pop_lower(*pop, u, c.opts);
    agree(o, {lo.lower, up.upper}, bounds(*reference, u, c.opts));
  }
}

Outcome pop_schatten_pr_identification(Ctx& c) {
  Outcome o;
  const BasePtr e = BaseSpace::lp(2, 1.0);
  for (double p : {1.0, 2.0})
    for (const SpacePtr& f : {PQSpace::scalars(std::max(p, 3.0)), PQSpace::lp(two_atoms(), PQSpace::scalars(p), p)})
      pop_matches(o, c, PQSpace::pop_tensor(PQSpace::schatten(e, p), f), PQSpace::pr_tensor(e, f), 2);
  return o;
}

Outcome scalar_pop_identification(Ctx& c) {
  Outcome o;
  const std::vector<std::pair<double, SpacePtr>> cases{
      {1.0, PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0)},
      {1.0, PQSpace::lp(two_atoms(), PQSpace::scalars(kInf), 1.0)},
      {1.0, PQSpace::pr_tensor(BaseSpace::lp(2, 1.0), PQSpace::scalars(2.0))},
      {2.0, PQSpace::scalars(2.0)},
      {2.0, PQSpace::lp(two_atoms(), PQSpace::scalars(2.0), 2.0)}};
  for (const auto& [p, f] : cases) pop_matches(o, c, PQSpace::pop_tensor(PQSpace::scalars(p), f), f, 2);
  return o;
}

Outcome scalar_pop_exponent_max(Ctx& c) {
  Outcome o;
  const int d = std::max(2, std::min(c.sizes.d, 3));
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 2}, {2, kInf}, {1, kInf}, {2, 2}, {kInf, 1.5}}) {
    const SpacePtr pop = PQSpace::pop_tensor(PQSpace::scalars(p), PQSpace::scalars(q));
    const Coeffs u{random_matrix(c.rng, d, d)};
    const NormCertificate up = pop_upper(*pop, u, c.opts), lo = pop_lower(*pop, u, c.opts);
    bracket(o, {lo.lower, up.upper}, schatten_norm(u[0], std::max(p, q)));
  }
  return o;
}

Outcome same_exponent_pop_tensoring(Ctx& c) {
  Outcome o;
  const BasePtr e = BaseSpace::lp(2, 1.0), f = BaseSpace::weighted_l1(std::vector<double>{0.5, 2.0});
  for (double p : {2.0, kInf})
    pop_matches(o, c, PQSpace::pop_tensor(PQSpace::schatten(e, p), PQSpace::schatten(f, p)),
                PQSpace::schatten(BaseSpace::tensor(e, f), p), 2);
  return o;
}

Outcome max_quantization_pop(Ctx& c) {
  Outcome o;
  const BasePtr e = BaseSpace::lp(2, 1.0), f = BaseSpace::lp(2, 1.0);
  pop_matches(o, c, PQSpace::pop_tensor(PQSpace::max(e), PQSpace::max(f)), PQSpace::max(BaseSpace::tensor(e, f)), 4);
  return o;
}

Outcome product_measure_bioperator_contractive(Ctx& c) {
  Outcome o;
  const MeasureSpace x = two_atoms(), y({0.8});
  for (double p : {1.0, 2.0, kInf}) {
    const SpacePtr e = PQSpace::scalars(kInf), f = PQSpace::scalars(2.0);
    const SpacePtr left = PQSpace::lp(x, e, p), right = PQSpace::lp(y, f, p);
    const SpacePtr target = PQSpace::lp(x.product(y), PQSpace::pop_tensor(e, f), p);
    const int m = e->dimension(), n = f->dimension(), ny = y.size();
    std::vector<CMatrix> comps;
    for (int s = 0; s < x.size(); ++s)
      for (int t = 0; t < ny; ++t)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            CMatrix cmp = CMatrix::Zero(left->dimension(), right->dimension());
            cmp(s * m + i, t * n + j) = 1.0;
            comps.push_back(cmp);
          }
    contractive_bioperator(o, c, BilinearDesc{left, right, target, comps, "product"}, 2);
  }
  return o;
}

Outcome l1_product_measure_isometry(Ctx& c) {
  Outcome o;
  const MeasureSpace x = two_atoms();
  for (const SpacePtr& inner : {PQSpace::scalars(kInf), PQSpace::scalars(2.0)}) {
    const SpacePtr lx = PQSpace::lp(x, inner, 1.0);
    const SpacePtr reference = PQSpace::lp(x.product(x), PQSpace::pop_tensor(inner, inner), 1.0);
    pop_matches(o, c, PQSpace::pop_tensor(lx, lx), reference, 5);
  }
  return o;
}

Outcome l1_scalar_pop_identification(Ctx& c) {
  Outcome o;
  const MeasureSpace x = two_atoms();
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 1}, {2, 2}, {2, kInf}, {1, 3}}) {
    const SpacePtr f = PQSpace::scalars(q);
    pop_matches(o, c, PQSpace::pop_tensor(PQSpace::lp(x, PQSpace::scalars(p), 1.0), f), PQSpace::lp(x, f, 1.0), 2);
  }
  return o;
}

Outcome cb_space_underlying_recovery(Ctx& c) {
  Outcome o;
  const int levels = std::min(c.sizes.d, 3);
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), g = PQSpace::scalars(kInf);
  const SpacePtr cbs = PQSpace::cb_space(e, g);
  for (int k = 0; k < 2; ++k) {
    const CVector f = random_vector(c.rng, 2);
    CVector xi = random_vector(c.rng, 2), eta = random_vector(c.rng, 2);
    xi.normalize();
    eta.normalize();
    const double direct = cb_norm_estimate(OperatorDesc::functional(e, f, g), levels, c.opts).lower;
    const double lifted = cbspace_norm(*cbs, times(f, rank_one(xi, eta)), levels, c.opts).lower;
    const Interval ref = dual_interval(f, *e, c.opts);
    close(o, lifted, direct);
    o.bad(std::max(0.0, std::max(direct, lifted) - ref.upper) / ref.upper);
  }
  return o;
}

Outcome cb_space_scalar_line(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 2);
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 2}, {1, kInf}, {2, 2}, {2, kInf}, {1, 1}}) {
    const SpacePtr cbs = PQSpace::cb_space(PQSpace::scalars(p), PQSpace::scalars(q));
    const CMatrix b = random_matrix(c.rng, d, d);
    const double est = cbspace_norm(*cbs, Coeffs{b}, std::min(c.sizes.d, 3), c.opts).lower;
    close(o, est, schatten_norm(b, q));
  }
  return o;
}

Outcome curry_isometry(Ctx& c) {
  Outcome o;
  const int levels = std::min(c.sizes.d, 3);
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), f = PQSpace::scalars(2.0), g = PQSpace::scalars(kInf);
  for (int k = 0; k < 3; ++k) {
    BilinearDesc rho{e, PQSpace::schatten(BaseSpace::lp(2, 1.0), 1.0), PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0),
                     {random_matrix(c.rng, 2, 2), random_matrix(c.rng, 2, 2)}, "random"};
    const BilinearDesc back = uncurry(curry(rho));
    double diff = 0.0;
    for (std::size_t i = 0; i < rho.components.size(); ++i)
      diff = std::max(diff, (back.components[i] - rho.components[i]).cwiseAbs().maxCoeff());
    o.bad(diff);
    ++o.instances;
  }
  const CVector fx = random_vector(c.rng, 2), gy = random_vector(c.rng, 1);
  const BilinearDesc rho = BilinearDesc::functional_product(e, fx, f, gy);
  const double a = cb_bilinear_estimate(rho, levels, c.opts).lower;
  const double b = cb_norm_estimate(curry(rho), levels, c.opts).lower;
  close(o, b, a);
  return o;
}

Outcome vn_pop_op_gap(Ctx& c) {
  Outcome o;
  for (int n = 1; n <= std::min(c.sizes.n, 3); ++n) {
    const AmpElem v = vn_family(n);
    const double nn = n;
    const double up = pop_upper(v, c.opts).upper, lo = pop_lower(v, c.opts).lower;
    o.bad(std::max(0.0, up - nn) / nn);
    o.bad(std::max(0.0, nn - lo) / nn);
    const double op = op_norm_upper(v, c.opts, {vn_witness(n)}).upper;
    o.bad(std::abs(op - nn * nn) / (nn * nn));
    double cheapest = kInf;
    for (int k = 0; k < 300; ++k) cheapest = std::min(cheapest, random_vn_representation(n, c.rng).cost());
    o.bad(std::max(0.0, nn * nn - cheapest) / (nn * nn));
    o.instances += 302;
  }
  return o;
}

Outcome op_triangle_failure(Ctx& c) {
  Outcome o;
  const int n = std::clamp(c.sizes.n, 2, 3);
  for (int m = 1; m < n; ++m) {
    const double ub_head = op_norm_upper(vn_part(n, 0, m), c.opts, {vn_witness(n, 0, m)}).upper;
    const double ub_tail = op_norm_upper(vn_part(n, m, n), c.opts, {vn_witness(n, m, n)}).upper;
    const double witness = op_norm_upper(vn_family(n), c.opts, {vn_witness(n)}).upper;
    const double ref_head = m * m, ref_tail = (n - m) * (n - m), ref = n * n;
    o.bad(std::abs(ub_head - ref_head) / ref_head);
    o.bad(std::abs(ub_tail - ref_tail) / ref_tail);
    o.bad(std::abs(witness - ref) / ref);
    if (!(ub_head + ub_tail < witness)) o.bad(1.0);
    o.instances += 3;
  }
  return o;
}

Outcome certificate_soundness(Ctx& c) {
  Outcome o;
  const int d = std::min(c.sizes.d, 3);
  auto spaces = all_spaces(c.sizes.n);
  spaces.push_back(PQSpace::pop_tensor(PQSpace::lp(two_atoms(), PQSpace::scalars(kInf), 1.0), PQSpace::scalars(2.0)));
  for (const auto& s : spaces) {
    const Coeffs u = rand_coeffs(c.rng, s->dimension(), d);
    const NormCertificate cert = pq_bounds(*s, u, c.opts);
    const double scale = std::max(1.0, cert.upper);
    o.bad(std::max(0.0, cert.lower - cert.upper - 1e-12 * scale) / scale);
    o.bad(witness_discrepancy(*s, u, cert, c.opts));
    if (to_json(cert).dump() != to_json(pq_bounds(*s, u, c.opts)).dump()) o.bad(1.0);
    ++o.instances;
  }
  return o;
}

Outcome orthogonal_support_pop_upper(Ctx& c) {
  Outcome o;
  const SpacePtr l2 = PQSpace::lp(MeasureSpace({1.0, 1.0}), PQSpace::scalars(2.0), 2.0);
  const SpacePtr pop = PQSpace::pop_tensor(l2, l2);
  for (int k = 0; k < 3; ++k) {
    const auto ps = random_orthogonal_projections(c.rng, 2, 2);
    Coeffs u = zero_coeffs(4, 2);
    u[0] = ps[0];
    u[3] = ps[1];
    at_most(o, pop_upper(*pop, u, c.opts).upper, 2.0);
  }
  return o;
}

Outcome inner_product_pairing_levels(Ctx& c) {
  Outcome o;
  const int n = 2;
  const BilinearDesc rho{PQSpace::max(BaseSpace::lp(n, 2.0)), PQSpace::max(BaseSpace::lp(n, 2.0)), PQSpace::scalars(kInf),
                         {CMatrix::Identity(n, n)}, "pairing"};
  const SupEstimate est = cb_bilinear_estimate(rho, std::min(c.sizes.d, 3), c.opts);
  at_most(o, est.lower, 1.0);
  BilinearDesc minimal = rho;
  minimal.left = PQSpace::min(BaseSpace::lp(n, 2.0));
  minimal.right = minimal.left;
  const SupEstimate grow = cb_bilinear_estimate(minimal, std::min(c.sizes.d, 3), c.opts);
  for (std::size_t k = 1; k < grow.profile.size(); ++k)
    if (grow.profile[k] < grow.profile[k - 1]) o.bad(1.0);
  if (grow.lower < 1.0 - 1e-9) o.bad(1.0 - grow.lower);
  ++o.instances;
  return o;
}

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"bimodule_contractivity", {"amplified norms are contractive for the two-sided matrix action", 1e-9, 4, 4, bimodule_contractivity}},
      {"max_quantization_l1_additivity", {"maximal quantization adds norms of orthogonally supported elements", 1e-9, 4, 3, max_quantization_l1_additivity}},
      {"schatten_line_lp_additivity", {"the Schatten-p line is an L^p-space", 1e-9, 4, 4, schatten_line_lp_additivity}},
      {"elementary_tensor_norms", {"norm of a x against ||a||_p ||x|| for L^p, cross-norm and trace-class cases", 1e-6, 4, 4, elementary_tensor_norms}},
      {"rank_one_underlying_recovery", {"a rank-one norm-one operator recovers the underlying norm", 1e-6, 4, 4, rank_one_underlying_recovery}},
      {"scalar_functional_cb_norm", {"functionals into the Schatten-q line over p-concave spaces with q >= p have cb-norm equal to norm", 5e-3, 3, 3, scalar_functional_cb_norm}},
      {"identity_cb_growth", {"the identity from a p-convex to a q-concave line with p > q grows as m^(1/q-1/p) on m orthogonal projections", 1e-9, 4, 4, identity_cb_growth}},
      {"roots_of_unity_pinching", {"averaging over roots-of-unity unitaries equals the diagonal pinching", 1e-10, 4, 4, roots_of_unity_pinching}},
      {"functional_product_cb", {"the product of two bounded functionals has cb-norm ||f|| ||g||", 5e-3, 3, 4, functional_product_cb}},
      {"flip_diamond_symmetry", {"a <> u and u <> a have equal norms", 1e-9, 3, 4, flip_diamond_symmetry}},
      {"rank_one_diamond_scaling", {"Q <> u has norm ||Q|| ||u|| for rank-one Q", 1e-9, 3, 4, rank_one_diamond_scaling}},
      {"diamond_schatten_bound", {"||a <> u|| <= ||a||_1 ||u||, with equality to ||a||_p ||u|| in L^p-spaces", 1e-9, 3, 4, diamond_schatten_bound}},
      {"lp_module_bioperator_contractive", {"scalar-function times vector into L_p(X, F) is completely contractive for p-convex F", 1e-9, 3, 4, lp_module_bioperator_contractive}},
      {"canonical_bioperator_contractive", {"(x, y) -> x (x) y from the Schatten-p quantization into the projective quantization is completely contractive", 1e-9, 3, 4, canonical_bioperator_contractive}},
      {"schatten_diamond_multiplicativity", {"||a <> b||_p = ||a||_p ||b||_p", 1e-9, 3, 4, schatten_diamond_multiplicativity}},
      {"mixed_exponent_bioperator_contractive", {"(x, y) -> x (x) y into the Schatten-max(p,q) quantization of the projective tensor product is completely contractive", 1e-9, 3, 4, mixed_exponent_bioperator_contractive}},
      {"diamond_module_compatibility", {"(a<>b)(u<>v)(c<>d) = (a u c) <> (b v d)", 1e-12, 3, 4, diamond_module_compatibility}},
      {"linearization_compatibility", {"the linearized operator applied to u <> v equals the amplified bioperator at (u, v)", 1e-12, 3, 4, linearization_compatibility}},
      {"pop_diamond_cross_bound", {"||u <> v||_pop <= ||u|| ||v|| and ||x (x) y|| <= ||x|| ||y||", 1e-6, 2, 4, pop_diamond_cross_bound}},
      {"pop_schatten_pr_identification", {"Schatten-p quantization pop-tensored with a p-convex space is the projective quantization", 1e-3, 3, 4, pop_schatten_pr_identification}},
      {"scalar_pop_identification", {"the Schatten-p line pop-tensored with a p-convex F is F", 1e-3, 3, 4, scalar_pop_identification}},
      {"scalar_pop_exponent_max", {"the pop tensor product of the p- and q-lines is the max(p,q)-line", 1e-6, 3, 4, scalar_pop_exponent_max}},
      {"same_exponent_pop_tensoring", {"Schatten-p quantizations tensor to the Schatten-p quantization of the projective tensor product", 1e-3, 3, 4, same_exponent_pop_tensoring}},
      {"max_quantization_pop", {"maximal quantizations tensor to the maximal quantization of the projective tensor product", 1e-3, 3, 4, max_quantization_pop}},
      {"product_measure_bioperator_contractive", {"(x, y) -> x(s) (x) y(t) into L_p(X x Y, E pop F) is completely contractive", 1e-9, 2, 4, product_measure_bioperator_contractive}},
      {"l1_product_measure_isometry", {"L_1(X, E) pop L_1(Y, F) is L_1(X x Y, E pop F) isometrically", 1e-3, 3, 4, l1_product_measure_isometry}},
      {"l1_scalar_pop_identification", {"L_1(X, Schatten-p line) pop-tensored with a p-convex F is L_1(X, F)", 1e-3, 3, 4, l1_scalar_pop_identification}},
      {"cb_space_underlying_recovery", {"the CB-space quantization has CB(E, G) as underlying space", 5e-3, 3, 4, cb_space_underlying_recovery}},
      {"cb_space_scalar_line", {"CB(p-line, q-line) with p <= q is the q-line", 5e-3, 3, 4, cb_space_scalar_line}},
      {"curry_isometry", {"currying a bioperator into CB(F, CB(E, G)) preserves cb-norms", 5e-3, 3, 4, curry_isometry}},
      {"vn_pop_op_gap", {"V_n has pop-norm n while its single-diamond norm is n^2", 1e-6, 4, 3, vn_pop_op_gap}},
      {"op_triangle_failure", {"the single-diamond norm violates the triangle inequality on V_n = V_m + (V_n - V_m)", 1e-6, 4, 3, op_triangle_failure}},
      {"certificate_soundness", {"certificates satisfy lower <= upper, witnesses re-evaluate and replays are identical", 1e-9, 3, 4, certificate_soundness}},
      {"orthogonal_support_pop_upper", {"Pe_1 (x) e_1 + Qe_2 (x) e_2 in the pop square of l_2 over the 2-line has norm at most 2", 1e-6, 2, 2, orthogonal_support_pop_upper}},
      {"inner_product_pairing_levels", {"the inner-product pairing is completely contractive on maximal quantizations; level profile on minimal ones", 1e-9, 3, 2, inner_product_pairing_levels}},
  };
  return r;
}

std::string verdict_for(const Outcome& o, double tol) {
  if (!std::isfinite(o.margin)) return "fail";
  if (o.margin <= tol) return "pass";
  return o.violation <= tol ? "inconclusive" : "fail";
}

}  // namespace

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed(); });
}

int Report::count(const std::string& verdict) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const CheckResult& r) { return r.verdict == verdict; }));
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, entry] : registry()) out.push_back(name);
  return out;
}

CheckResult run_check(const std::string& name, std::uint64_t seed, Sizes sizes, std::optional<double> tolerance) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw std::invalid_argument("unknown check '" + name + "'");
  const Entry& e = it->second;
  Sizes eff{std::clamp(sizes.d, 1, e.max_d), std::clamp(sizes.n, 1, e.max_n)};
  EngineOptions opts;
  opts.seed = seed;
  opts.level_cap = eff.d;
  opts.exec = Execution::serial;
  Ctx ctx{seed, eff, make_rng(seed, name_stream(name)), opts};
  const Outcome o = e.fn(ctx);
  CheckResult out;
  out.check = name;
  out.anchor = e.anchor;
  out.seed = seed;
  out.sizes = eff;
  out.instances = o.instances;
  out.margin = o.margin;
  out.tolerance = tolerance.value_or(e.tolerance);
  out.verdict = verdict_for(o, out.tolerance);
  return out;
}

Sizes profile_sizes(Profile profile) { return profile == Profile::quick ? Sizes{2, 2} : Sizes{4, 4}; }

Report run_all(std::uint64_t seed, Profile profile, std::optional<double> tolerance) {
  const std::vector<std::string> names = check_names();
  const Sizes sizes = profile_sizes(profile);
  Report rep;
  rep.seed = seed;
  rep.profile = profile;
  rep.checks = map_indices<CheckResult>(
      static_cast<int>(names.size()),
      [&](int i) { return run_check(names[static_cast<std::size_t>(i)], seed, sizes, tolerance); }, Execution::parallel);
  return rep;
}

Json to_json(const CheckResult& r) {
  Json j;
  j["check"] = r.check;
  j["anchor"] = r.anchor;
  j["seed"] = r.seed;
  j["sizes"] = {{"d", r.sizes.d}, {"n", r.sizes.n}};
  j["instances"] = r.instances;
  j["margin"] = std::isfinite(r.margin) ? Json(r.margin) : Json(nullptr);
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  return j;
}

Json to_json(const Report& r) {
  Json j;
  j["seed"] = r.seed;
  j["profile"] = r.profile == Profile::quick ? "quick" : "full";
  j["passed"] = r.count("pass");
  j["failed"] = r.count("fail");
  j["inconclusive"] = r.count("inconclusive");
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  return j;
}

}  // namespace pqnorm
