// Acceptance suite: one PASS/FAIL line per criterion, tolerances and time
// limits pinned below. Exit status is the number of failures.

#include "oracles.hpp"
#include "pqnorm/cb.hpp"
#include "pqnorm/pop.hpp"
#include "pqnorm/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace pqnorm;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;
  std::function<Result()> run;
};

Coeffs random_coeffs(Rng& rng, int dim, int d) {
  Coeffs u;
  for (int i = 0; i < dim; ++i) u.push_back(random_matrix(rng, d, d));
  return u;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Result diamond_multiplicativity() {
  Rng rng = make_rng(101, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const CMatrix a = random_matrix(rng, 3, 3), b = random_matrix(rng, 3, 3);
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
      const double ref = schatten_norm(a, p) * schatten_norm(b, p);
      worst = std::max(worst, std::abs(schatten_norm(diamond(a, b), p) - ref) / ref);
    }
  }
  return {worst <= 1e-9, fmt("max rel err %.2e <= 1e-9", worst)};
}

Result vn_gap() {
  Rng rng = make_rng(102, 0);
  Result r;
  std::ostringstream os;
  for (int n = 1; n <= 3; ++n) {
    const AmpElem v = vn_family(n);
    const double up = pop_upper(v).upper, lo = pop_lower(v).lower;
    const double op = op_norm_upper(v, {}, {vn_witness(n)}).upper;
    double cheapest = kInf;
    for (int k = 0; k < 10000; ++k) cheapest = std::min(cheapest, random_vn_representation(n, rng).cost());
    const double nn = n;
    r.ok = r.ok && up <= nn + 1e-6 && lo >= nn - 1e-9 && std::abs(op - nn * nn) <= 1e-9 && cheapest >= nn * nn - 1e-6;
    os << "n=" << n << ": pop [" << lo << ", " << up << "] op " << op << " min random " << cheapest << "; ";
  }
  r.detail = os.str();
  return r;
}

Result triangle_failure() {
  const int n = 3, m = 1;
  const double head = op_norm_upper(vn_part(n, 0, m), {}, {vn_witness(n, 0, m)}).upper;
  const double tail = op_norm_upper(vn_part(n, m, n), {}, {vn_witness(n, m, n)}).upper;
  const double whole = op_norm_upper(vn_family(n), {}, {vn_witness(n)}).upper;
  const bool ok = std::abs(head - 1.0) <= 1e-9 && std::abs(tail - 4.0) <= 1e-9 && std::abs(whole - 9.0) <= 1e-9 &&
                  head + tail < whole;
  return {ok, fmt("%g + %g < %g", head, tail, whole)};
}

Result scalar_pop() {
  Rng rng = make_rng(104, 0);
  const CMatrix a = random_matrix(rng, 3, 3);
  double worst_over = 0.0, worst_under = 0.0;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 2}, {2, kInf}, {1, kInf}, {2, 2}}) {
    const SpacePtr pop = PQSpace::pop_tensor(PQSpace::scalars(p), PQSpace::scalars(q));
    const double ub = pop_upper(*pop, Coeffs{a}).upper;
    const double ref = oracle::schatten(a, std::max(p, q));
    worst_over = std::max(worst_over, ub - ref);
    worst_under = std::max(worst_under, ref - ub);
  }
  return {worst_over <= 1e-6 && worst_under <= 1e-9,
          fmt("upper - ||a||_r max %.2e <= 1e-6, ||a||_r - upper max %.2e <= 1e-9", worst_over, worst_under)};
}

Result max_l1_additivity() {
  Rng rng = make_rng(105, 0);
  const SpacePtr e = PQSpace::max(BaseSpace::lp(2, 1.0));
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int d = 2;
    const CMatrix w = random_unitary(rng, 2 * d);
    Coeffs u, v;
    for (int i = 0; i < 2; ++i) {
      CMatrix a = CMatrix::Zero(2 * d, 2 * d), b = CMatrix::Zero(2 * d, 2 * d);
      a.topLeftCorner(d, d) = random_matrix(rng, d, d);
      b.bottomRightCorner(d, d) = random_matrix(rng, d, d);
      u.push_back(w * a * w.adjoint());
      v.push_back(w * b * w.adjoint());
    }
    Coeffs s;
    for (int i = 0; i < 2; ++i) s.push_back(u[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(i)]);
    const double nu = pq_bounds(*e, u).upper, nv = pq_bounds(*e, v).upper, ns = pq_bounds(*e, s).upper;
    worst = std::max(worst, std::abs(ns - (nu + nv)) / (nu + nv));
  }
  return {worst <= 1e-3, fmt("max rel defect %.2e <= 1e-3", worst)};
}

Result identity_cb() {
  double worst = 0.0;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 2}, {1, kInf}, {2, kInf}, {1.5, 3}}) {
    OperatorDesc id = OperatorDesc::identity(PQSpace::scalars(p));
    id.codomain = PQSpace::scalars(q);
    worst = std::max(worst, std::abs(cb_norm_estimate(id, 4).lower - 1.0));
  }
  OperatorDesc down = OperatorDesc::identity(PQSpace::scalars(2.0));
  down.codomain = PQSpace::scalars(1.0);
  Rng rng = make_rng(106, 0);
  double shortfall = -kInf;
  for (int m = 1; m <= 4; ++m) {
    const auto ps = random_orthogonal_projections(rng, m, m);
    CMatrix sum = CMatrix::Zero(m, m);
    for (const auto& p : ps) sum += p;
    shortfall = std::max(shortfall, std::sqrt(double(m)) - operator_ratio(down, Coeffs{sum}));
  }
  return {worst <= 1e-6 && shortfall <= 1e-6,
          fmt("|estimate - 1| max %.2e <= 1e-6, sqrt(m) - ratio max %.2e <= 1e-6", worst, shortfall)};
}

Result pinching() {
  Rng rng = make_rng(107, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const CMatrix a = random_matrix(rng, 4, 4);
    for (int n = 2; n <= 4; ++n) {
      const auto ps = random_orthogonal_projections(rng, n, 4);
      CMatrix direct = CMatrix::Zero(4, 4);
      for (const auto& p : ps) direct += p * a * p;
      worst = std::max(worst, operator_norm(pinch_roots_of_unity(a, ps) - direct));
    }
  }
  return {worst <= 1e-10, fmt("max err %.2e <= 1e-10", worst)};
}

Result l1_product() {
  Rng rng = make_rng(108, 0);
  const MeasureSpace x({1.0, 0.5}), y({1.0, 0.5});
  const SpacePtr inner = PQSpace::scalars(kInf);
  const SpacePtr pop = PQSpace::pop_tensor(PQSpace::lp(x, inner, 1.0), PQSpace::lp(y, inner, 1.0));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Coeffs u = random_coeffs(rng, 4, 2);
    double ref = 0.0;
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        ref += x.atom_weights[static_cast<std::size_t>(s)] * y.atom_weights[static_cast<std::size_t>(t)] *
               oracle::schatten(u[static_cast<std::size_t>(s * 2 + t)], kInf);
    const double lo = pop_lower(*pop, u).lower, up = pop_upper(*pop, u).upper;
    worst = std::max({worst, (ref - lo) / ref, (up - ref) / ref});
    if (lo > ref * (1 + 1e-9) || up < ref * (1 - 1e-9)) worst = kInf;
  }
  return {worst <= 1e-3, fmt("bracket width max %.2e <= 1e-3 relative", worst)};
}

Result cb_spaces() {
  Rng rng = make_rng(109, 0);
  const SpacePtr cbs = PQSpace::cb_space(PQSpace::scalars(1.0), PQSpace::scalars(2.0));
  double worst_line = 0.0;
  for (int k = 0; k < 5; ++k) {
    const CMatrix b = random_matrix(rng, 2, 2);
    const double ref = oracle::schatten(b, 2.0);
    worst_line = std::max(worst_line, std::abs(cbspace_norm(*cbs, Coeffs{b}, 3).lower - ref) / ref);
  }
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), f = PQSpace::scalars(2.0);
  BilinearDesc general{e, f, PQSpace::scalars(kInf), {random_matrix(rng, 2, 1)}, "general"};
  const BilinearDesc back = uncurry(curry(general));
  const bool exact = back.components[0] == general.components[0];
  const BilinearDesc rho = BilinearDesc::functional_product(e, random_vector(rng, 2), f, random_vector(rng, 1));
  const double direct = cb_bilinear_estimate(rho, 3).lower, curried = cb_norm_estimate(curry(rho), 3).lower;
  const double diff = std::abs(direct - curried) / direct;
  return {worst_line <= 5e-3 && exact && diff <= 5e-3,
          fmt("b.id rel err %.2e <= 5e-3, round trip exact %g, curry rel diff %.2e <= 5e-3", worst_line, exact, diff)};
}

Result soundness() {
  Rng rng = make_rng(110, 0);
  const std::vector<SpacePtr> spaces{
      PQSpace::scalars(1.5),
      PQSpace::schatten(BaseSpace::lp(3, 2.0), 2.0),
      PQSpace::min(BaseSpace::lp(2, 1.0)),
      PQSpace::max(BaseSpace::lp(2, 2.0)),
      PQSpace::lp(MeasureSpace({1.0, 0.5}), PQSpace::scalars(kInf), 1.0),
      PQSpace::pr_tensor(BaseSpace::lp(2, 2.0), PQSpace::scalars(2.0)),
      PQSpace::pop_tensor(PQSpace::scalars(1.0), PQSpace::scalars(2.0)),
      PQSpace::pop_tensor(PQSpace::lp(MeasureSpace({1.0, 0.5}), PQSpace::scalars(kInf), 1.0), PQSpace::scalars(2.0)),
      PQSpace::cb_space(PQSpace::scalars(1.0), PQSpace::scalars(2.0))};
  double order = 0.0, discrepancy = 0.0;
  int count = 0;
  for (int trial = 0; trial < 4; ++trial)
    for (const auto& s : spaces) {
      const Coeffs u = random_coeffs(rng, s->dimension(), 1 + trial % 3);
      const NormCertificate c = pq_bounds(*s, u);
      order = std::max(order, c.lower - c.upper);
      discrepancy = std::max(discrepancy, witness_discrepancy(*s, u, c));
      ++count;
    }
  const bool same = to_json(run_all(7, Profile::full)).dump() == to_json(run_all(7, Profile::full)).dump();
  return {order <= 1e-12 && discrepancy <= 1e-9 && same,
          fmt("%g certificates: lower - upper max %.2e <= 1e-12, witness discrepancy %.2e <= 1e-9", count, order,
              discrepancy) +
              (same ? ", full reports identical" : ", full reports differ")};
}

Result cross_bounds() {
  Rng rng = make_rng(111, 0);
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0);
  const SpacePtr f = PQSpace::lp(MeasureSpace({1.0, 0.5}), PQSpace::scalars(2.0), 2.0);
  const SpacePtr pop = PQSpace::pop_tensor(e, f);
  double worst = -kInf, worst_elem = -kInf;
  for (int k = 0; k < 50; ++k) {
    const Coeffs u = random_coeffs(rng, 2, 2), v = random_coeffs(rng, 2, 2);
    worst = std::max(worst, pop_upper(*pop, amp_diamond(u, v)).upper - pq_bounds(*e, u).upper * pq_bounds(*f, v).upper);
    const CVector x = random_vector(rng, 2), y = random_vector(rng, 2);
    Coeffs xy;
    const CVector t = tensor_vectors(x, y);
    for (Eigen::Index i = 0; i < t.size(); ++i) xy.push_back(CMatrix::Constant(1, 1, t(i)));
    Coeffs xs, ys;
    for (Eigen::Index i = 0; i < 2; ++i) {
      xs.push_back(CMatrix::Constant(1, 1, x(i)));
      ys.push_back(CMatrix::Constant(1, 1, y(i)));
    }
    worst_elem = std::max(worst_elem, pop_upper(*pop, xy).upper - pq_bounds(*e, xs).upper * pq_bounds(*f, ys).upper);
  }
  return {worst <= 1e-6 && worst_elem <= 1e-6,
          fmt("upper - ||u|| ||v|| max %.2e <= 1e-6, elementary max %.2e <= 1e-6", worst, worst_elem)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Schatten norms are multiplicative under the diamond product", 1.0, diamond_multiplicativity},
      {2, "V_n: pop-norm n, single-diamond norm n^2", 30.0, vn_gap},
      {3, "single-diamond norm violates the triangle inequality", 10.0, triangle_failure},
      {4, "pop tensor of two Schatten lines is the max-exponent line", 5.0, scalar_pop},
      {5, "maximal quantization of l1^2 is additive on orthogonal supports", 5.0, max_l1_additivity},
      {6, "identity between Schatten lines: cb-norm 1 upward, sqrt(m) growth downward", 10.0, identity_cb},
      {7, "roots-of-unity average equals the pinching", 1.0, pinching},
      {8, "L_1 product measure identification on two-atom spaces", 60.0, l1_product},
      {9, "CB-space of Schatten lines and currying", 30.0, cb_spaces},
      {10, "certificate soundness and report determinism", 120.0, soundness},
      {11, "pop cross-norm bounds for u <> v and x (x) y", 10.0, cross_bounds},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = r.ok && secs < c.time_limit;
    failures += pass ? 0 : 1;
    std::printf("%s  criterion %2d: %s | %s | %.3f s < %g s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                r.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
  }
  return failures;
}
