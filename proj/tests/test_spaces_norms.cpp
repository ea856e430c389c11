#include "oracles.hpp"
#include "pqnorm/json_io.hpp"
#include "pqnorm/norms.hpp"

#include <gtest/gtest.h>

using namespace pqnorm;

namespace {

Coeffs random_coeffs(Rng& rng, int dim, int d) {
  Coeffs u;
  for (int i = 0; i < dim; ++i) u.push_back(random_matrix(rng, d, d));
  return u;
}

void expect_brackets(const NormCertificate& c, double ref, double rel) {
  EXPECT_LE(c.lower, ref * (1 + rel) + 1e-12) << c.method;
  EXPECT_GE(c.upper, ref * (1 - rel) - 1e-12) << c.method;
  EXPECT_LE(c.upper - c.lower, rel * std::max(1.0, ref)) << c.method;
}

}  // namespace

TEST(BaseNorms, LpMatchesOracle) {
  Rng rng = make_rng(31, 0);
  for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
    const CVector x = random_vector(rng, 4);
    EXPECT_NEAR(base_norm(x, *BaseSpace::lp(4, p)), oracle::vec_lp(x, p), 1e-12);
  }
}

TEST(BaseNorms, WeightedL1) {
  const CVector x = CVector::Constant(3, Complex(0.0, 2.0));
  EXPECT_NEAR(base_norm(x, *BaseSpace::weighted_l1(std::vector<double>{1.0, 0.5, 2.0})), 7.0, 1e-14);
}

TEST(BaseNorms, ProjectiveHilbertIsTraceNorm) {
  Rng rng = make_rng(32, 0);
  const BasePtr t = BaseSpace::tensor(BaseSpace::lp(3, 2.0), BaseSpace::lp(3, 2.0));
  for (int k = 0; k < 3; ++k) {
    const CVector x = random_vector(rng, 9);
    CMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = x(i * 3 + j);
    const Interval iv = base_norm_bounds(x, *t);
    const double ref = oracle::schatten(m, 1.0);
    EXPECT_LE(iv.lower, ref * (1 + 1e-9));
    EXPECT_GE(iv.upper, ref * (1 - 1e-9));
    EXPECT_LE(iv.upper - iv.lower, 1e-6 * ref);
  }
}

TEST(BaseNorms, TensorWithL1IsBlockSum) {
  Rng rng = make_rng(33, 0);
  const BasePtr t = BaseSpace::tensor(BaseSpace::lp(2, 1.0), BaseSpace::lp(3, 2.0));
  const CVector x = random_vector(rng, 6);
  const double ref = oracle::vec_lp(x.head(3), 2.0) + oracle::vec_lp(x.tail(3), 2.0);
  const Interval iv = base_norm_bounds(x, *t);
  EXPECT_NEAR(iv.lower, ref, 1e-10);
  EXPECT_NEAR(iv.upper, ref, 1e-10);
}

TEST(BaseNorms, DualOfLpIsConjugate) {
  Rng rng = make_rng(34, 0);
  for (double p : {1.0, 2.0, 3.0, kInf}) {
    const CVector f = random_vector(rng, 3);
    const Interval iv = dual_norm_bounds(f, *BaseSpace::lp(3, p));
    const double ref = oracle::vec_lp(f, conjugate_exponent(p));
    EXPECT_LE(iv.lower, ref * (1 + 1e-9));
    EXPECT_GE(iv.upper, ref * (1 - 1e-9));
  }
}

TEST(Spaces, DimensionsAndExponents) {
  EXPECT_EQ(PQSpace::scalars(2.0)->dimension(), 1);
  const SpacePtr lp = PQSpace::lp(MeasureSpace({1.0, 0.5}), PQSpace::scalars(3.0), 2.0);
  EXPECT_EQ(lp->dimension(), 2);
  EXPECT_DOUBLE_EQ(convexity_exponent(*lp), 2.0);
  EXPECT_DOUBLE_EQ(convexity_exponent(*PQSpace::scalars(1.5)), 1.5);
  EXPECT_TRUE(std::isinf(convexity_exponent(*PQSpace::min(BaseSpace::lp(2, 1.0)))));
  EXPECT_EQ(PQSpace::pop_tensor(lp, PQSpace::scalars(1.0))->dimension(), 2);
  EXPECT_EQ(PQSpace::cb_space(lp, PQSpace::scalars(1.0))->dimension(), 2);
  EXPECT_TRUE(is_scalar_line(*PQSpace::scalars(kInf)));
  EXPECT_EQ(MeasureSpace({1.0, 2.0}).product(MeasureSpace({3.0})).atom_weights, (std::vector<double>{3.0, 6.0}));
}

TEST(Spaces, RejectsBadParameters) {
  EXPECT_THROW(BaseSpace::lp(0, 2.0), DimensionError);
  EXPECT_THROW(BaseSpace::lp(2, 0.5), std::invalid_argument);
  EXPECT_THROW(MeasureSpace({1.0, -1.0}), std::invalid_argument);
}

TEST(QuantizedNorms, ScalarLineIsSchatten) {
  Rng rng = make_rng(35, 0);
  for (double p : {1.0, 1.5, 2.0, kInf}) {
    const CMatrix a = random_matrix(rng, 3, 3);
    expect_brackets(pq_bounds(*PQSpace::scalars(p), Coeffs{a}), oracle::schatten(a, p), 1e-10);
  }
}

TEST(QuantizedNorms, SchattenOverL1IsSumOfSchatten) {
  Rng rng = make_rng(36, 0);
  for (double p : {1.0, 2.0, kInf}) {
    const Coeffs u = random_coeffs(rng, 3, 2);
    double ref = 0.0;
    for (const auto& c : u) ref += oracle::schatten(c, p);
    expect_brackets(pq_bounds(*PQSpace::schatten(BaseSpace::lp(3, 1.0), p), u), ref, 1e-10);
  }
}

TEST(QuantizedNorms, LpOverAtoms) {
  Rng rng = make_rng(37, 0);
  const MeasureSpace x({1.0, 0.5, 2.0});
  for (double p : {1.0, 2.0, kInf}) {
    const Coeffs u = random_coeffs(rng, 3, 2);
    std::vector<double> parts;
    for (int s = 0; s < 3; ++s)
      parts.push_back((std::isinf(p) ? 1.0 : std::pow(x.atom_weights[static_cast<std::size_t>(s)], 1.0 / p)) *
                      oracle::schatten(u[static_cast<std::size_t>(s)], 2.0));
    expect_brackets(pq_bounds(*PQSpace::lp(x, PQSpace::scalars(2.0), p), u), oracle::lp(parts, p), 1e-10);
  }
}

TEST(QuantizedNorms, MinOverLinfIsMaxOperatorNorm) {
  Rng rng = make_rng(38, 0);
  const Coeffs u = random_coeffs(rng, 3, 2);
  double ref = 0.0;
  for (const auto& c : u) ref = std::max(ref, oracle::schatten(c, kInf));
  expect_brackets(pq_bounds(*PQSpace::min(BaseSpace::lp(3, kInf)), u), ref, 1e-6);
}

TEST(QuantizedNorms, LevelOneRecoversBase) {
  Rng rng = make_rng(39, 0);
  for (const SpacePtr& s : {PQSpace::min(BaseSpace::lp(3, 2.0)), PQSpace::max(BaseSpace::lp(3, 2.0)),
                            PQSpace::schatten(BaseSpace::lp(3, 1.5), 2.0)}) {
    const CVector x = random_vector(rng, 3);
    Coeffs u;
    for (int i = 0; i < 3; ++i) u.push_back(CMatrix::Constant(1, 1, x(i)));
    expect_brackets(pq_bounds(*s, u), base_norm(x, *s->base), 1e-6);
  }
}

TEST(QuantizedNorms, ZeroElement) {
  for (const SpacePtr& s : {PQSpace::scalars(2.0), PQSpace::min(BaseSpace::lp(2, 2.0)),
                            PQSpace::pop_tensor(PQSpace::scalars(1.0), PQSpace::scalars(2.0))}) {
    const NormCertificate c = pq_bounds(*s, zero_coeffs(s->dimension(), 2));
    EXPECT_EQ(c.lower, 0.0);
    EXPECT_EQ(c.upper, 0.0);
  }
}

TEST(QuantizedNorms, ShapeMismatchThrows) {
  EXPECT_THROW(pq_bounds(*PQSpace::scalars(2.0), zero_coeffs(2, 2)), DimensionError);
}

// Property: every certificate is ordered, re-evaluable and bimodule-contractive.
TEST(QuantizedNorms, CertificateProperties) {
  Rng rng = make_rng(40, 0);
  const std::vector<SpacePtr> spaces{
      PQSpace::scalars(1.0),
      PQSpace::schatten(BaseSpace::lp(2, 2.0), 2.0),
      PQSpace::min(BaseSpace::lp(2, 1.0)),
      PQSpace::max(BaseSpace::lp(2, 2.0)),
      PQSpace::lp(MeasureSpace({1.0, 0.5}), PQSpace::scalars(kInf), 1.0),
      PQSpace::pr_tensor(BaseSpace::lp(2, 2.0), PQSpace::scalars(2.0)),
      PQSpace::pop_tensor(PQSpace::scalars(2.0), PQSpace::lp(MeasureSpace({1.0, 2.0}), PQSpace::scalars(2.0), 2.0)),
      PQSpace::cb_space(PQSpace::scalars(1.0), PQSpace::scalars(2.0))};
  for (int trial = 0; trial < 3; ++trial)
    for (const auto& s : spaces) {
      const int d = uniform_int(rng, 1, 3);
      const Coeffs u = random_coeffs(rng, s->dimension(), d);
      const NormCertificate c = pq_bounds(*s, u);
      EXPECT_LE(c.lower, c.upper + 1e-12 * std::max(1.0, c.upper)) << s->describe();
      EXPECT_LE(witness_discrepancy(*s, u, c), 1e-9) << s->describe();
      const CMatrix a = random_matrix(rng, d, d), b = random_matrix(rng, d, d);
      const NormCertificate m = pq_bounds(*s, module_action(a, u, b));
      EXPECT_LE(m.lower, operator_norm(a) * c.upper * operator_norm(b) * (1 + 1e-9)) << s->describe();
    }
}

TEST(QuantizedNorms, SeedsAreDeterministic) {
  Rng rng = make_rng(41, 0);
  const SpacePtr s = PQSpace::min(BaseSpace::lp(3, 2.0));
  const Coeffs u = random_coeffs(rng, 3, 2);
  EngineOptions o;
  o.seed = 9;
  EXPECT_EQ(to_json(pq_bounds(*s, u, o)).dump(), to_json(pq_bounds(*s, u, o)).dump());
}

TEST(Json, SpaceRoundTrip) {
  const std::vector<SpacePtr> spaces{
      PQSpace::scalars(kInf), PQSpace::min(BaseSpace::dual(BaseSpace::lp(2, 3.0))),
      PQSpace::lp(MeasureSpace({1.0, 0.5}), PQSpace::scalars(2.0), 1.0),
      PQSpace::pr_tensor(BaseSpace::weighted_l1(std::vector<double>{1.0, 2.0}), PQSpace::scalars(2.0)),
      PQSpace::pop_tensor(PQSpace::scalars(1.0), PQSpace::max(BaseSpace::tensor(BaseSpace::lp(2, 1.0), BaseSpace::lp(2, 2.0)))),
      PQSpace::cb_space(PQSpace::scalars(1.0), PQSpace::scalars(2.0))};
  for (const auto& s : spaces) {
    const SpacePtr back = space_from_json(parse_json(to_json(*s).dump()));
    EXPECT_TRUE(same_space(*s, *back)) << s->describe();
  }
}

TEST(Json, ElementRoundTrip) {
  Rng rng = make_rng(42, 0);
  const SpacePtr s = PQSpace::schatten(BaseSpace::lp(2, 1.0), 2.0);
  const AmpElem u = AmpElem::from_coefficients(s, random_coeffs(rng, 2, 3));
  const AmpElem back = element_from_json(parse_json(to_json(u).dump()));
  EXPECT_LT(coeffs_distance(u.coefficients(), back.coefficients()), 1e-15);
}

TEST(Json, ErrorsAreTyped) {
  EXPECT_THROW(parse_json("{oops"), ParseError);
  EXPECT_THROW(space_from_json(parse_json(R"({"quantization":"nope"})")), ParseError);
  EXPECT_THROW(element_from_json(parse_json(
                   R"({"ambient":{"quantization":"schatten","p":2,"base":{"kind":"lp","n":1,"p":1}},"terms":[{"matrix":[[1]],"vector":[1,2]}]})")),
               DimensionError);
  EXPECT_EQ(exponent_from_json(Json("inf")), kInf);
  EXPECT_EQ(complex_from_json(Json::parse("[1, -2]")), Complex(1.0, -2.0));
}
