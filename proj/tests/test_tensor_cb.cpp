#include "oracles.hpp"
#include "pqnorm/cb.hpp"
#include "pqnorm/pop.hpp"

#include <gtest/gtest.h>

using namespace pqnorm;

namespace {

Coeffs random_coeffs(Rng& rng, int dim, int d) {
  Coeffs u;
  for (int i = 0; i < dim; ++i) u.push_back(random_matrix(rng, d, d));
  return u;
}

}  // namespace

TEST(Amplification, DiamondOfCoefficients) {
  Rng rng = make_rng(51, 0);
  const Coeffs u = random_coeffs(rng, 2, 2), v = random_coeffs(rng, 3, 3);
  const Coeffs w = amp_diamond(u, v);
  ASSERT_EQ(w.size(), 6u);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_LT((w[static_cast<std::size_t>(i * 3 + j)] - oracle::kron(u[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)])).norm(), 1e-14);
}

TEST(Amplification, OperatorActsOnCoordinates) {
  Rng rng = make_rng(52, 0);
  const CMatrix phi = random_matrix(rng, 2, 3);
  const Coeffs u = random_coeffs(rng, 3, 2);
  const Coeffs w = amplify_operator(phi, u);
  for (int k = 0; k < 2; ++k) {
    CMatrix ref = CMatrix::Zero(2, 2);
    for (int i = 0; i < 3; ++i) ref += phi(k, i) * u[static_cast<std::size_t>(i)];
    EXPECT_LT((w[static_cast<std::size_t>(k)] - ref).norm(), 1e-13);
  }
}

TEST(Amplification, BioperatorOnElementaryTensors) {
  Rng rng = make_rng(53, 0);
  const std::vector<CMatrix> comps{random_matrix(rng, 2, 3)};
  const CMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2);
  const CVector x = random_vector(rng, 2), y = random_vector(rng, 3);
  Coeffs u, v;
  for (int i = 0; i < 2; ++i) u.push_back(x(i) * a);
  for (int j = 0; j < 3; ++j) v.push_back(y(j) * b);
  const Coeffs w = amplify_bioperator(comps, u, v);
  const Complex value = (x.transpose() * comps[0] * y)(0, 0);
  EXPECT_LT((w[0] - value * oracle::kron(a, b)).norm(), 1e-12);
}

TEST(Amplification, CurryRoundTripIsExact) {
  Rng rng = make_rng(54, 0);
  const SpacePtr e = PQSpace::scalars(1.0), f = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0);
  const SpacePtr g = PQSpace::schatten(BaseSpace::lp(3, 1.0), 2.0);
  BilinearDesc rho{e, f, g, {random_matrix(rng, 1, 2), random_matrix(rng, 1, 2), random_matrix(rng, 1, 2)}, "r"};
  const BilinearDesc back = uncurry(curry(rho));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(back.components[k], rho.components[k]);
  EXPECT_EQ(curry(rho).codomain->kind, QuantKind::cb_space);
}

TEST(Amplification, ElementArithmetic) {
  Rng rng = make_rng(55, 0);
  const SpacePtr s = PQSpace::scalars(2.0);
  const AmpElem u = AmpElem::from_coefficients(s, random_coeffs(rng, 1, 2));
  EXPECT_TRUE((u - u).is_zero());
  EXPECT_LT(coeffs_distance((u + u).coefficients(), (u * Complex(2.0, 0.0)).coefficients()), 1e-14);
  EXPECT_EQ(u.embedded(4).level(), 4);
}

// ---- pop / op ----

TEST(Pop, ScalarLinesGiveLargerExponent) {
  Rng rng = make_rng(61, 0);
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1, 2}, {2, kInf}, {1, kInf}, {2, 2}}) {
    const SpacePtr pop = PQSpace::pop_tensor(PQSpace::scalars(p), PQSpace::scalars(q));
    const CMatrix a = random_matrix(rng, 3, 3);
    const double ref = oracle::schatten(a, std::max(p, q));
    EXPECT_LE(pop_upper(*pop, Coeffs{a}).upper, ref + 1e-6);
    EXPECT_GE(pop_upper(*pop, Coeffs{a}).upper, ref - 1e-9);
    EXPECT_LE(pop_lower(*pop, Coeffs{a}).lower, ref + 1e-9);
  }
}

TEST(Pop, VnHasPopNormN) {
  for (int n = 1; n <= 3; ++n) {
    const AmpElem v = vn_family(n);
    EXPECT_LE(pop_upper(v).upper, n + 1e-6);
    EXPECT_GE(pop_lower(v).lower, n - 1e-9);
  }
}

TEST(Pop, VnWitnessCostsNSquared) {
  for (int n = 1; n <= 3; ++n) {
    const PopRepresentation w = vn_witness(n);
    EXPECT_NEAR(w.cost(), n * n, 1e-12);
    EXPECT_LT(representation_error(w, vn_family(n).coefficients()), 1e-12);
    EXPECT_NEAR(op_norm_upper(vn_family(n), {}, {w}).upper, n * n, 1e-9);
  }
}

TEST(Pop, VnPartsSplitTheFamily) {
  const int n = 3;
  const AmpElem sum = vn_part(n, 0, 1) + vn_part(n, 1, n);
  EXPECT_LT(coeffs_distance(sum.coefficients(), vn_family(n).coefficients()), 1e-15);
  EXPECT_NEAR(vn_witness(n, 1, n).cost(), 4.0, 1e-12);
  EXPECT_LT(representation_error(vn_witness(n, 1, n), vn_part(n, 1, n).coefficients()), 1e-12);
  EXPECT_THROW(vn_part(n, 2, 1), DimensionError);
}

// Property: random single-diamond representations never undercut n^2.
TEST(Pop, RandomRepresentationsCostAtLeastNSquared) {
  Rng rng = make_rng(62, 0);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < 200; ++k) {
      const PopTerm t = random_vn_representation(n, rng);
      EXPECT_GE(t.cost(), n * n - 1e-6);
      EXPECT_LT(representation_error(PopRepresentation{{t}}, vn_family(n).coefficients()), 1e-9);
    }
}

// Property: u <> v has pop-norm at most ||u|| ||v||.
TEST(Pop, CrossBound) {
  Rng rng = make_rng(63, 0);
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), f = PQSpace::scalars(kInf);
  const SpacePtr pop = PQSpace::pop_tensor(e, f);
  for (int k = 0; k < 10; ++k) {
    const Coeffs u = random_coeffs(rng, 2, 2), v = random_coeffs(rng, 1, 2);
    EXPECT_LE(pop_upper(*pop, amp_diamond(u, v)).upper, pq_bounds(*e, u).upper * pq_bounds(*f, v).upper + 1e-6);
  }
}

TEST(Pop, L1ProductMeasureBracket) {
  Rng rng = make_rng(64, 0);
  const MeasureSpace x({1.0, 0.5});
  const SpacePtr lx = PQSpace::lp(x, PQSpace::scalars(kInf), 1.0);
  const SpacePtr pop = PQSpace::pop_tensor(lx, lx);
  const SpacePtr exact = PQSpace::lp(x.product(x), PQSpace::pop_tensor(PQSpace::scalars(kInf), PQSpace::scalars(kInf)), 1.0);
  for (int k = 0; k < 4; ++k) {
    const Coeffs u = random_coeffs(rng, 4, 2);
    // oracle: sum over atom pairs of w_s w_t ||u_st||_inf
    double ref = 0.0;
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        ref += x.atom_weights[static_cast<std::size_t>(s)] * x.atom_weights[static_cast<std::size_t>(t)] *
               oracle::schatten(u[static_cast<std::size_t>(s * 2 + t)], kInf);
    const double lo = pop_lower(*pop, u).lower, up = pop_upper(*pop, u).upper;
    EXPECT_LE(lo, ref * (1 + 1e-9));
    EXPECT_GE(up, ref * (1 - 1e-9));
    EXPECT_LE(up - lo, 1e-3 * ref);
    EXPECT_NEAR(pq_bounds(*exact, u).upper, ref, 1e-9 * ref);
  }
}

// ---- cb ----

TEST(Cb, IdentityIntoLargerExponentIsContractive) {
  OperatorDesc id = OperatorDesc::identity(PQSpace::scalars(1.0));
  id.codomain = PQSpace::scalars(2.0);
  const SupEstimate est = cb_norm_estimate(id, 3);
  EXPECT_NEAR(est.lower, 1.0, 1e-9);
  EXPECT_EQ(est.profile.size(), 3u);
}

TEST(Cb, IdentityIntoSmallerExponentGrows) {
  OperatorDesc id = OperatorDesc::identity(PQSpace::scalars(2.0));
  id.codomain = PQSpace::scalars(1.0);
  Rng rng = make_rng(71, 0);
  for (int m = 1; m <= 4; ++m) {
    const auto ps = random_orthogonal_projections(rng, m, m);
    CMatrix sum = CMatrix::Zero(m, m);
    for (const auto& p : ps) sum += p;
    EXPECT_NEAR(operator_ratio(id, Coeffs{sum}), std::sqrt(double(m)), 1e-9);
  }
}

TEST(Cb, CbSpaceScalarLineIsSchatten) {
  Rng rng = make_rng(72, 0);
  const SpacePtr cbs = PQSpace::cb_space(PQSpace::scalars(1.0), PQSpace::scalars(2.0));
  for (int k = 0; k < 3; ++k) {
    const CMatrix b = random_matrix(rng, 2, 2);
    EXPECT_NEAR(cbspace_norm(*cbs, Coeffs{b}, 2).lower, oracle::schatten(b, 2.0), 5e-3 * oracle::schatten(b, 2.0));
  }
}

TEST(Cb, FunctionalProductAndCurryAgree) {
  Rng rng = make_rng(73, 0);
  const SpacePtr e = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0), f = PQSpace::scalars(2.0);
  const CVector fx = random_vector(rng, 2), gy = random_vector(rng, 1);
  const BilinearDesc rho = BilinearDesc::functional_product(e, fx, f, gy);
  const double direct = cb_bilinear_estimate(rho, 2).lower;
  const double curried = cb_norm_estimate(curry(rho), 2).lower;
  const double ref = oracle::vec_lp(fx, kInf) * std::abs(gy(0));
  EXPECT_NEAR(direct, ref, 5e-3 * ref);
  EXPECT_NEAR(curried, direct, 5e-3 * direct);
}

TEST(Cb, RejectsBadLevel) {
  EXPECT_THROW(cb_norm_estimate(OperatorDesc::identity(PQSpace::scalars(1.0)), 0), DimensionError);
}
