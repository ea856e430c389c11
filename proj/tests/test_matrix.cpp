#include "oracles.hpp"
#include "pqnorm/kernels.hpp"
#include "pqnorm/search.hpp"

#include <gtest/gtest.h>

using namespace pqnorm;

TEST(Schatten, MatchesEigenOracle) {
  Rng rng = make_rng(11, 0);
  for (int d = 1; d <= 5; ++d)
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
      const CMatrix a = random_matrix(rng, d, d);
      EXPECT_NEAR(schatten_norm(a, p), oracle::schatten(a, p), 1e-10 * oracle::schatten(a, 1.0)) << d << " " << p;
    }
}

TEST(Schatten, TwoIsFrobenius) {
  Rng rng = make_rng(12, 0);
  const CMatrix a = random_matrix(rng, 4, 4);
  EXPECT_NEAR(schatten_norm(a, 2.0), a.norm(), 1e-12 * a.norm());
}

TEST(Schatten, DiagonalValues) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = Complex(0.0, -4.0);
  EXPECT_DOUBLE_EQ(schatten_norm(a, 1.0), 7.0);
  EXPECT_NEAR(schatten_norm(a, 2.0), 5.0, 1e-14);
  EXPECT_DOUBLE_EQ(schatten_norm(a, kInf), 4.0);
}

TEST(Schatten, NonIncreasingInP) {
  Rng rng = make_rng(13, 0);
  for (int t = 0; t < 50; ++t) {
    const int d = uniform_int(rng, 1, 5);
    const CMatrix a = random_matrix(rng, d, d);
    double prev = kInf;
    for (double p : {1.0, 1.2, 2.0, 3.5, 8.0, kInf}) {
      const double v = schatten_norm(a, p);
      EXPECT_LE(v, prev * (1 + 1e-12));
      prev = v;
    }
  }
}

TEST(Schatten, RejectsExponentBelowOne) {
  EXPECT_THROW(schatten_norm(CMatrix::Identity(2, 2), 0.5), std::invalid_argument);
}

TEST(Singular, TriplesReconstruct) {
  Rng rng = make_rng(14, 0);
  for (int d = 1; d <= 5; ++d) {
    const CMatrix a = random_matrix(rng, d, d);
    const SingularForm sf = singular_triples(a);
    EXPECT_TRUE(is_unitary(sf.left));
    EXPECT_TRUE(is_unitary(sf.right));
    for (Eigen::Index k = 1; k < sf.values.size(); ++k) EXPECT_LE(sf.values(k), sf.values(k - 1));
    EXPECT_LT((sf.left * sf.values.cast<Complex>().asDiagonal() * sf.right - a).norm(), 1e-10 * a.norm());
  }
}

TEST(Diamond, MatchesHandKronecker) {
  Rng rng = make_rng(15, 0);
  for (int d1 = 1; d1 <= 3; ++d1)
    for (int d2 = 1; d2 <= 3; ++d2) {
      const CMatrix a = random_matrix(rng, d1, d1), b = random_matrix(rng, d2, d2);
      EXPECT_LT((diamond(a, b) - oracle::kron(a, b)).norm(), 1e-14);
    }
}

TEST(Diamond, FlipIntertwines) {
  Rng rng = make_rng(16, 0);
  const CMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 3, 3);
  const CMatrix f = flip_unitary(2, 3);
  EXPECT_TRUE(is_unitary(f));
  EXPECT_LT((f * diamond(a, b) * f.adjoint() - diamond(b, a)).norm(), 1e-13);
}

TEST(Diamond, MixedProduct) {
  Rng rng = make_rng(17, 0);
  const CMatrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 3, 3);
  const CMatrix c = random_matrix(rng, 2, 2), d = random_matrix(rng, 3, 3);
  EXPECT_LT((diamond(a, b) * diamond(c, d) - diamond(a * c, b * d)).norm(), 1e-12);
}

TEST(RankOne, NormIsProduct) {
  Rng rng = make_rng(18, 0);
  const CVector xi = random_vector(rng, 3), eta = random_vector(rng, 3);
  const CMatrix q = rank_one(xi, eta);
  EXPECT_EQ(numerical_rank(q), 1);
  EXPECT_NEAR(operator_norm(q), xi.norm() * eta.norm(), 1e-12);
  EXPECT_NEAR(schatten_norm(q, 1.0), xi.norm() * eta.norm(), 1e-12);
  const CVector z = random_vector(rng, 3);
  EXPECT_LT((q * z - eta.dot(z) * xi).norm(), 1e-12);
}

TEST(Embed, PadsAndPreservesNorms) {
  Rng rng = make_rng(19, 0);
  const CMatrix a = random_matrix(rng, 2, 2);
  const CMatrix e = embed(a, 4);
  EXPECT_EQ(level(e), 4);
  EXPECT_EQ(e.bottomRows(2).norm(), 0.0);
  for (double p : {1.0, 2.0, kInf}) EXPECT_NEAR(schatten_norm(e, p), schatten_norm(a, p), 1e-12);
  EXPECT_THROW(embed(a, 1), DimensionError);
}

TEST(Pinching, EqualsCompressionSum) {
  Rng rng = make_rng(20, 0);
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= d; ++n) {
      const CMatrix a = random_matrix(rng, d, d);
      const auto ps = random_orthogonal_projections(rng, n, d);
      CMatrix direct = CMatrix::Zero(d, d);
      for (const auto& p : ps) direct += p * a * p;
      EXPECT_LT(operator_norm(pinch_roots_of_unity(a, ps) - direct), 1e-12);
    }
}

TEST(Projections, OrthogonalRankOne) {
  Rng rng = make_rng(21, 0);
  const auto ps = random_orthogonal_projections(rng, 3, 4);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_LT((ps[i] * ps[i] - ps[i]).norm(), 1e-12);
    EXPECT_LT((ps[i].adjoint() - ps[i]).norm(), 1e-12);
    EXPECT_EQ(numerical_rank(ps[i]), 1);
    for (std::size_t j = i + 1; j < ps.size(); ++j) EXPECT_LT((ps[i] * ps[j]).norm(), 1e-12);
  }
}

TEST(Exponents, Conjugate) {
  EXPECT_EQ(conjugate_exponent(1.0), kInf);
  EXPECT_EQ(conjugate_exponent(kInf), 1.0);
  EXPECT_NEAR(conjugate_exponent(3.0), 1.5, 1e-15);
}

TEST(Kernels, ParallelMatchesSerial) {
  Rng rng = make_rng(22, 0);
  const CMatrix a = random_matrix(rng, 7, 7), b = random_matrix(rng, 9, 9);
  EXPECT_EQ(kernels::kron_parallel(a, b), kernels::kron_serial(a, b));
  std::vector<CMatrix> mats;
  for (int i = 0; i < 40; ++i) mats.push_back(random_matrix(rng, 1 + i % 5, 1 + i % 5));
  for (double p : {1.0, 2.0, kInf})
    EXPECT_EQ(kernels::schatten_batch_parallel(mats, p), kernels::schatten_batch_serial(mats, p));
}

TEST(Kernels, MapIndicesKeepsOrder) {
  const auto par = map_indices<int>(100, [](int i) { return i * i; }, Execution::parallel);
  const auto ser = map_indices<int>(100, [](int i) { return i * i; }, Execution::serial);
  EXPECT_EQ(par, ser);
}

TEST(Rng, StreamsAreReproducible) {
  Rng a = make_rng(5, 3), b = make_rng(5, 3), c = make_rng(5, 4);
  const CMatrix x = random_matrix(a, 3, 3), y = random_matrix(b, 3, 3), z = random_matrix(c, 3, 3);
  EXPECT_EQ(x, y);
  EXPECT_NE(x, z);
}

TEST(Rng, UnitaryIsUnitary) {
  Rng rng = make_rng(23, 0);
  for (int n = 1; n <= 6; ++n) EXPECT_TRUE(is_unitary(random_unitary(rng, n)));
}
