#pragma once

// Reference computations that do not go through the library's SVD or
// Kronecker code.

#include "pqnorm/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using pqnorm::CMatrix;
using pqnorm::CVector;

/// Singular values from the Hermitian eigenproblem of a^* a.
inline std::vector<double> singular_values(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.adjoint() * a);
  std::vector<double> s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
  std::sort(s.rbegin(), s.rend());
  return s;
}

inline double schatten(const CMatrix& a, double p) {
  const auto s = singular_values(a);
  if (std::isinf(p)) return s.empty() ? 0.0 : s.front();
  double acc = 0.0;
  for (double v : s) acc += std::pow(v, p);
  return std::pow(acc, 1.0 / p);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i1 = 0; i1 < a.rows(); ++i1)
    for (Eigen::Index j1 = 0; j1 < a.cols(); ++j1)
      for (Eigen::Index i2 = 0; i2 < b.rows(); ++i2)
        for (Eigen::Index j2 = 0; j2 < b.cols(); ++j2)
          k(i1 * b.rows() + i2, j1 * b.cols() + j2) = a(i1, j1) * b(i2, j2);
  return k;
}

inline double lp(const std::vector<double>& v, double p) {
  if (std::isinf(p)) return *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x), p);
  return std::pow(acc, 1.0 / p);
}

inline double vec_lp(const CVector& x, double p) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < x.size(); ++i) v.push_back(std::abs(x(i)));
  return lp(v, p);
}

}  // namespace oracle
