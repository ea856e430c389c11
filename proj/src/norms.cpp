#include "pqnorm/norms.hpp"

#include "pqnorm/cb.hpp"
#include "pqnorm/pop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pqnorm {

namespace {

constexpr double kRankOneTol = 1e-14;

Interval lp_interval(const std::vector<Interval>& parts, const std::vector<double>& scales, double p) {
  std::vector<double> lo, hi;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    lo.push_back(scales[t] * parts[t].lower);
    hi.push_back(scales[t] * parts[t].upper);
  }
  return {lp_aggregate(lo, p), lp_aggregate(hi, p)};
}

Interval product(const Interval& a, const Interval& b) {
  const double up = (a.upper == 0.0 || b.upper == 0.0) ? 0.0 : a.upper * b.upper;
  return {a.lower * b.lower, up};
}

Interval operator_plus(const Interval& a, const Interval& b) { return {a.lower + b.lower, a.upper + b.upper}; }

double atom_scale(double mu, double p) { return std::isinf(p) ? 1.0 : std::pow(mu, 1.0 / p); }

/// Row-major matrix view of a vector of length rows * cols.
CMatrix as_matrix(const CVector& x, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = x(i * cols + j);
  return m;
}

CVector from_matrix(const CMatrix& m) {
  CVector x(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) x(i * m.cols() + j) = m(i, j);
  return x;
}

Complex unit_phase(Complex z) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex(1.0, 0.0) : z / r;
}

double base_upper(const CVector& x, const BaseSpace& e, const EngineOptions& opts) {
  return base_norm_bounds(x, e, opts).upper;
}

double dual_upper(const CVector& f, const BaseSpace& e, const EngineOptions& opts) {
  return dual_norm_bounds(f, e, opts).upper;
}

CVector lp_saturate(const CVector& x, double p) {
  const Eigen::Index n = x.size();
  CVector f = CVector::Zero(n);
  if (x.norm() == 0.0) return f;
  if (std::isinf(p)) {
    Eigen::Index k = 0;
    x.cwiseAbs().maxCoeff(&k);
    f(k) = std::conj(unit_phase(x(k)));
    return f;
  }
  std::vector<double> mags(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) mags[static_cast<std::size_t>(i)] = std::abs(x(i));
  const double norm = lp_aggregate(mags, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x(i) == Complex(0.0, 0.0)) continue;
    const double mag = p == 1.0 ? 1.0 : std::pow(std::abs(x(i)) / norm, p - 1.0);
    f(i) = mag * std::conj(unit_phase(x(i)));
  }
  return f;
}

struct SvdRankOne {
  bool rank_one = false;
  CVector left;
  CVector right;
};

/// T = left * right^T when T has numerical rank one.
SvdRankOne rank_one_split(const CMatrix& t) {
  SvdRankOne out;
  if (t.size() == 0 || t.norm() == 0.0) return out;
  Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (s.size() > 1 && s(1) > kRankOneTol * s(0)) return out;
  out.rank_one = true;
  out.left = s(0) * svd.matrixU().col(0);
  out.right = svd.matrixV().col(0).conjugate();
  return out;
}

/// c with ||x||_2 <= c ||x||_E, when known.
std::optional<double> l2_comparison(const BaseSpace& e) {
  if (e.kind != BaseKind::lp) return std::nullopt;
  const double inv = std::isinf(e.p) ? 0.0 : 1.0 / e.p;
  return std::pow(static_cast<double>(e.n), std::max(0.0, 0.5 - inv));
}

Interval tensor_norm_bounds(const CMatrix& t, const BaseSpace& e, const BaseSpace& f, const EngineOptions& opts) {
  if (t.norm() == 0.0) return Interval::exact(0.0);
  if (auto w = l1_weights(e)) {
    Interval total = Interval::exact(0.0);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (t.row(i).norm() == 0.0) continue;
      const Interval r = base_norm_bounds(t.row(i).transpose(), f, opts);
      total = operator_plus(total, {(*w)[static_cast<std::size_t>(i)] * r.lower, (*w)[static_cast<std::size_t>(i)] * r.upper});
    }
    return total;
  }
  if (auto w = l1_weights(f)) {
    Interval total = Interval::exact(0.0);
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t.col(j).norm() == 0.0) continue;
      const Interval c = base_norm_bounds(t.col(j), e, opts);
      total = operator_plus(total, {(*w)[static_cast<std::size_t>(j)] * c.lower, (*w)[static_cast<std::size_t>(j)] * c.upper});
    }
    return total;
  }
  if (const auto r1 = rank_one_split(t); r1.rank_one)
    return product(base_norm_bounds(r1.left, e, opts), base_norm_bounds(r1.right, f, opts));

  const EngineOptions inner = nested_options(opts, 11);
  ProjectiveProblem prob{t, [&e, inner](const CVector& x) { return base_upper(x, e, inner); },
                         [&f, inner](const CVector& y) { return base_upper(y, f, inner); }};
  const TensorDecomposition dec = proj_norm_upper(prob, inner);
  const InjectiveWitness inj = proj_norm_lower(t, base_dual_side(e, inner), base_dual_side(f, inner), inner);
  double lower = inj.value;
  if (is_absolute(e)) {
    CVector z(t.rows());
    for (Eigen::Index i = 0; i < t.rows(); ++i) z(i) = base_norm_bounds(t.row(i).transpose(), f, inner).lower;
    lower = std::max(lower, base_norm_bounds(z, e, inner).lower);
  }
  if (is_absolute(f)) {
    CVector z(t.cols());
    for (Eigen::Index j = 0; j < t.cols(); ++j) z(j) = base_norm_bounds(t.col(j), e, inner).lower;
    lower = std::max(lower, base_norm_bounds(z, f, inner).lower);
  }
  // pairing with the trace-norm saturating functional
  if (const auto ce = l2_comparison(e), cf = l2_comparison(f); ce && cf)
    lower = std::max(lower, schatten_norm(t, 1.0) / (*ce * *cf));
  return {std::min(lower, dec.cost), dec.cost};
}

/// Alternating search for x, y maximizing |x^T T y| / (||x|| ||y||).
std::pair<CVector, CVector> bilinear_norming_pair(const CMatrix& t, const BaseSpace& e, const BaseSpace& f,
                                                  const EngineOptions& opts, double* value) {
  CVector best_x = CVector::Zero(t.rows()), best_y = CVector::Zero(t.cols());
  double best = 0.0;
  std::vector<CVector> starts;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    if (t.row(i).norm() > 0.0) starts.push_back(norming_vector(t.row(i).transpose(), f, opts));
  Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeThinV);
  starts.push_back(svd.matrixV().col(0).conjugate());
  for (CVector y : starts) {
    for (int it = 0; it < 30; ++it) {
      const CVector ty = t * y;
      if (ty.norm() == 0.0) break;
      const CVector x = norming_vector(ty, e, opts);
      const CVector tx = t.transpose() * x;
      if (tx.norm() == 0.0) break;
      y = norming_vector(tx, f, opts);
      const double den = base_upper(x, e, opts) * base_upper(y, f, opts);
      if (!(den > 0.0)) break;
      const double v = std::abs((x.transpose() * t * y)(0, 0)) / den;
      if (v > best * (1.0 + 1e-13)) {
        best = v;
        best_x = x;
        best_y = y;
      } else if (it > 0) {
        break;
      }
    }
  }
  if (value) *value = best;
  return {best_x, best_y};
}

Interval tensor_dual_bounds(const CMatrix& t, const BaseSpace& e, const BaseSpace& f, const EngineOptions& opts) {
  if (t.norm() == 0.0) return Interval::exact(0.0);
  if (auto w = l1_weights(e)) {
    Interval best = Interval::exact(0.0);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const Interval r = dual_norm_bounds(t.row(i).transpose(), f, opts);
      const double wi = (*w)[static_cast<std::size_t>(i)];
      best = {std::max(best.lower, r.lower / wi), std::max(best.upper, r.upper / wi)};
    }
    return best;
  }
  if (auto w = l1_weights(f)) {
    Interval best = Interval::exact(0.0);
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      const Interval c = dual_norm_bounds(t.col(j), e, opts);
      const double wj = (*w)[static_cast<std::size_t>(j)];
      best = {std::max(best.lower, c.lower / wj), std::max(best.upper, c.upper / wj)};
    }
    return best;
  }
  if (const auto r1 = rank_one_split(t); r1.rank_one)
    return product(dual_norm_bounds(r1.left, e, opts), dual_norm_bounds(r1.right, f, opts));
  double by_rows = 0.0, by_cols = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    if (t.row(i).norm() > 0.0)
      by_rows += dual_upper(basis_vector(static_cast<int>(t.rows()), static_cast<int>(i)), e, opts) *
                 dual_upper(t.row(i).transpose(), f, opts);
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    if (t.col(j).norm() > 0.0)
      by_cols += dual_upper(basis_vector(static_cast<int>(t.cols()), static_cast<int>(j)), f, opts) *
                 dual_upper(t.col(j), e, opts);
  double lower = 0.0;
  bilinear_norming_pair(t, e, f, opts, &lower);
  const double upper = std::min(by_rows, by_cols);
  return {std::min(lower, upper), upper};
}

}  // namespace

Interval base_norm_bounds(const CVector& x, const BaseSpace& e, const EngineOptions& opts) {
  if (x.size() != e.dimension()) throw DimensionError("base norm: vector length does not match dimension");
  switch (e.kind) {
    case BaseKind::lp: {
      std::vector<double> mags(static_cast<std::size_t>(x.size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(x(i));
      return Interval::exact(lp_aggregate(mags, e.p));
    }
    case BaseKind::weighted_l1: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += e.weights[static_cast<std::size_t>(i)] * std::abs(x(i));
      return Interval::exact(s);
    }
    case BaseKind::lp_sum: {
      const int m = e.left->dimension();
      std::vector<Interval> parts;
      std::vector<double> scales;
      for (std::size_t t = 0; t < e.weights.size(); ++t) {
        parts.push_back(base_norm_bounds(x.segment(static_cast<Eigen::Index>(t) * m, m), *e.left, opts));
        scales.push_back(atom_scale(e.weights[t], e.p));
      }
      return lp_interval(parts, scales, e.p);
    }
    case BaseKind::tensor:
      return tensor_norm_bounds(as_matrix(x, e.left->dimension(), e.right->dimension()), *e.left, *e.right, opts);
    case BaseKind::dual: return dual_norm_bounds(x, *e.left, opts);
  }
  throw DimensionError("base norm: unknown kind");
}

double base_norm(const CVector& x, const BaseSpace& e, const EngineOptions& opts) {
  const Interval iv = base_norm_bounds(x, e, opts);
  return std::isinf(iv.upper) ? iv.lower : iv.upper;
}

Interval dual_norm_bounds(const CVector& f, const BaseSpace& e, const EngineOptions& opts) {
  if (f.size() != e.dimension()) throw DimensionError("dual norm: vector length does not match dimension");
  switch (e.kind) {
    case BaseKind::lp: {
      std::vector<double> mags(static_cast<std::size_t>(f.size()));
      for (Eigen::Index i = 0; i < f.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(f(i));
      return Interval::exact(lp_aggregate(mags, conjugate_exponent(e.p)));
    }
    case BaseKind::weighted_l1: {
      double m = 0.0;
      for (Eigen::Index i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f(i)) / e.weights[static_cast<std::size_t>(i)]);
      return Interval::exact(m);
    }
    case BaseKind::lp_sum: {
      const int m = e.left->dimension();
      std::vector<Interval> parts;
      std::vector<double> scales;
      for (std::size_t t = 0; t < e.weights.size(); ++t) {
        parts.push_back(dual_norm_bounds(f.segment(static_cast<Eigen::Index>(t) * m, m), *e.left, opts));
        scales.push_back(1.0 / atom_scale(e.weights[t], e.p));
      }
      return lp_interval(parts, scales, conjugate_exponent(e.p));
    }
    case BaseKind::tensor:
      return tensor_dual_bounds(as_matrix(f, e.left->dimension(), e.right->dimension()), *e.left, *e.right, opts);
    case BaseKind::dual: return base_norm_bounds(f, *e.left, opts);
  }
  throw DimensionError("dual norm: unknown kind");
}

CVector saturating_functional(const CVector& x, const BaseSpace& e, const EngineOptions& opts) {
  if (x.size() != e.dimension()) throw DimensionError("saturating functional: length mismatch");
  const Eigen::Index n = x.size();
  if (x.norm() == 0.0) return CVector::Zero(n);
  switch (e.kind) {
    case BaseKind::lp: return lp_saturate(x, e.p);
    case BaseKind::weighted_l1: {
      CVector f(n);
      for (Eigen::Index i = 0; i < n; ++i) f(i) = e.weights[static_cast<std::size_t>(i)] * std::conj(unit_phase(x(i)));
      return f;
    }
    case BaseKind::lp_sum: {
      const int m = e.left->dimension();
      const auto atoms = static_cast<Eigen::Index>(e.weights.size());
      CVector z(atoms);
      for (Eigen::Index t = 0; t < atoms; ++t)
        z(t) = atom_scale(e.weights[static_cast<std::size_t>(t)], e.p) * base_norm(x.segment(t * m, m), *e.left, opts);
      const CVector s = lp_saturate(z, e.p);
      CVector f = CVector::Zero(n);
      for (Eigen::Index t = 0; t < atoms; ++t) {
        if (s(t) == Complex(0.0, 0.0)) continue;
        f.segment(t * m, m) = s(t) * atom_scale(e.weights[static_cast<std::size_t>(t)], e.p) *
                              saturating_functional(x.segment(t * m, m), *e.left, opts);
      }
      return f;
    }
    case BaseKind::tensor: {
      const BaseSpace& a = *e.left;
      const BaseSpace& b = *e.right;
      const CMatrix t = as_matrix(x, a.dimension(), b.dimension());
      if (auto w = l1_weights(a)) {
        CMatrix g = CMatrix::Zero(t.rows(), t.cols());
        for (Eigen::Index i = 0; i < t.rows(); ++i)
          g.row(i) = (*w)[static_cast<std::size_t>(i)] * saturating_functional(t.row(i).transpose(), b, opts).transpose();
        return from_matrix(g);
      }
      if (auto w = l1_weights(b)) {
        CMatrix g = CMatrix::Zero(t.rows(), t.cols());
        for (Eigen::Index j = 0; j < t.cols(); ++j)
          g.col(j) = (*w)[static_cast<std::size_t>(j)] * saturating_functional(t.col(j), a, opts);
        return from_matrix(g);
      }
      const EngineOptions inner = nested_options(opts, 13);
      const InjectiveWitness w = proj_norm_lower(t, base_dual_side(a, inner), base_dual_side(b, inner), inner);
      const double den = dual_upper(w.g, a, inner) * dual_upper(w.h, b, inner);
      if (!(den > 0.0)) return CVector::Zero(n);
      const Complex pairing = (w.g.transpose() * t * w.h)(0, 0);
      return tensor_vectors(w.g, w.h) * (std::conj(unit_phase(pairing)) / den);
    }
    case BaseKind::dual: return norming_vector(x, *e.left, opts);
  }
  throw DimensionError("saturating functional: unknown kind");
}

CVector norming_vector(const CVector& f, const BaseSpace& e, const EngineOptions& opts) {
  if (f.size() != e.dimension()) throw DimensionError("norming vector: length mismatch");
  const Eigen::Index n = f.size();
  if (f.norm() == 0.0) return CVector::Zero(n);
  switch (e.kind) {
    case BaseKind::lp: return lp_saturate(f, conjugate_exponent(e.p));
    case BaseKind::weighted_l1: {
      Eigen::Index k = 0;
      double best = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double v = std::abs(f(i)) / e.weights[static_cast<std::size_t>(i)];
        if (v > best) {
          best = v;
          k = i;
        }
      }
      CVector x = CVector::Zero(n);
      x(k) = std::conj(unit_phase(f(k))) / e.weights[static_cast<std::size_t>(k)];
      return x;
    }
    case BaseKind::lp_sum: {
      const int m = e.left->dimension();
      const auto atoms = static_cast<Eigen::Index>(e.weights.size());
      CVector y(atoms);
      for (Eigen::Index t = 0; t < atoms; ++t)
        y(t) = dual_upper(f.segment(t * m, m), *e.left, opts) / atom_scale(e.weights[static_cast<std::size_t>(t)], e.p);
      const CVector s = lp_saturate(y, conjugate_exponent(e.p));
      CVector x = CVector::Zero(n);
      for (Eigen::Index t = 0; t < atoms; ++t) {
        if (s(t) == Complex(0.0, 0.0)) continue;
        x.segment(t * m, m) = (s(t) / atom_scale(e.weights[static_cast<std::size_t>(t)], e.p)) *
                              norming_vector(f.segment(t * m, m), *e.left, opts);
      }
      return x;
    }
    case BaseKind::tensor: {
      const BaseSpace& a = *e.left;
      const BaseSpace& b = *e.right;
      const CMatrix t = as_matrix(f, a.dimension(), b.dimension());
      const auto wa = l1_weights(a);
      const auto wb = l1_weights(b);
      if (wa || wb) {
        const bool rows = wa.has_value();
        const auto& w = rows ? *wa : *wb;
        const Eigen::Index count = rows ? t.rows() : t.cols();
        Eigen::Index k = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < count; ++i) {
          const CVector line = rows ? CVector(t.row(i).transpose()) : CVector(t.col(i));
          const double v = dual_upper(line, rows ? b : a, opts) / w[static_cast<std::size_t>(i)];
          if (v > best) {
            best = v;
            k = i;
          }
        }
        const CVector line = rows ? CVector(t.row(k).transpose()) : CVector(t.col(k));
        const CVector y = norming_vector(line, rows ? b : a, opts) / w[static_cast<std::size_t>(k)];
        const CVector ek = basis_vector(static_cast<int>(count), static_cast<int>(k));
        return rows ? tensor_vectors(ek, y) : tensor_vectors(y, ek);
      }
      auto [x, y] = bilinear_norming_pair(t, a, b, opts, nullptr);
      const double den = base_upper(x, a, opts) * base_upper(y, b, opts);
      if (!(den > 0.0)) return CVector::Zero(n);
      const Complex pairing = (x.transpose() * t * y)(0, 0);
      return tensor_vectors(x, y) * (std::conj(unit_phase(pairing)) / den);
    }
    case BaseKind::dual: return saturating_functional(f, *e.left, opts);
  }
  throw DimensionError("norming vector: unknown kind");
}

DualSide base_dual_side(const BaseSpace& e, const EngineOptions& opts) {
  return {[&e, opts](const CVector& y) { return saturating_functional(y, e, opts); },
          [&e, opts](const CVector& f) { return dual_upper(f, e, opts); }};
}

// ---- underlying norms ----

double underlying_dual_upper(const CVector& f, const PQSpace& e, const EngineOptions& opts) {
  if (f.size() != e.dimension()) throw DimensionError("underlying dual: length mismatch");
  if (f.norm() == 0.0) return 0.0;
  switch (e.kind) {
    case QuantKind::schatten:
    case QuantKind::min: return dual_upper(f, *e.base, opts);
    case QuantKind::lp: {
      const int m = e.first->dimension();
      std::vector<double> parts;
      for (int t = 0; t < e.measure.size(); ++t)
        parts.push_back(underlying_dual_upper(f.segment(t * m, m), *e.first, opts) /
                        atom_scale(e.measure.atom_weights[static_cast<std::size_t>(t)], e.p));
      return lp_aggregate(parts, conjugate_exponent(e.p));
    }
    case QuantKind::pr_tensor: {
      const BaseSpace& a = *e.pr_left;
      const PQSpace& b = *e.first;
      const CMatrix t = as_matrix(f, a.dimension(), b.dimension());
      if (auto w = l1_weights(a)) {
        double best = 0.0;
        for (Eigen::Index i = 0; i < t.rows(); ++i)
          best = std::max(best, underlying_dual_upper(t.row(i).transpose(), b, opts) / (*w)[static_cast<std::size_t>(i)]);
        return best;
      }
      double by_rows = 0.0, by_cols = 0.0;
      for (Eigen::Index i = 0; i < t.rows(); ++i)
        if (t.row(i).norm() > 0.0)
          by_rows += dual_upper(basis_vector(static_cast<int>(t.rows()), static_cast<int>(i)), a, opts) *
                     underlying_dual_upper(t.row(i).transpose(), b, opts);
      for (Eigen::Index j = 0; j < t.cols(); ++j)
        if (t.col(j).norm() > 0.0)
          by_cols += underlying_dual_upper(basis_vector(static_cast<int>(t.cols()), static_cast<int>(j)), b, opts) *
                     dual_upper(t.col(j), a, opts);
      return std::min(by_rows, by_cols);
    }
    case QuantKind::pop_tensor: {
      // level-one pop norms dominate the injective norm
      const int na = e.first->dimension(), nb = e.second->dimension();
      std::vector<double> ea(static_cast<std::size_t>(na)), eb(static_cast<std::size_t>(nb));
      for (int i = 0; i < na; ++i) ea[static_cast<std::size_t>(i)] = underlying_dual_upper(basis_vector(na, i), *e.first, opts);
      for (int j = 0; j < nb; ++j) eb[static_cast<std::size_t>(j)] = underlying_dual_upper(basis_vector(nb, j), *e.second, opts);
      double s = 0.0;
      for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) s += std::abs(f(i * nb + j)) * ea[static_cast<std::size_t>(i)] * eb[static_cast<std::size_t>(j)];
      return s;
    }
    case QuantKind::cb_space: return kInf;
  }
  return kInf;
}

CVector underlying_saturate(const CVector& x, const PQSpace& e, const EngineOptions& opts) {
  if (x.norm() == 0.0) return CVector::Zero(x.size());
  switch (e.kind) {
    case QuantKind::schatten:
    case QuantKind::min: return saturating_functional(x, *e.base, opts);
    case QuantKind::lp: {
      const int m = e.first->dimension();
      const int atoms = e.measure.size();
      CVector z(atoms);
      for (int t = 0; t < atoms; ++t) {
        Coeffs level_one;
        for (int j = 0; j < m; ++j) level_one.push_back(CMatrix::Constant(1, 1, x(t * m + j)));
        const NormCertificate c = pq_bounds(*e.first, level_one, nested_options(opts, 17));
        z(t) = atom_scale(e.measure.atom_weights[static_cast<std::size_t>(t)], e.p) *
               (std::isinf(c.upper) ? c.lower : c.upper);
      }
      const CVector s = lp_saturate(z, e.p);
      CVector f = CVector::Zero(x.size());
      for (int t = 0; t < atoms; ++t) {
        if (s(t) == Complex(0.0, 0.0)) continue;
        f.segment(t * m, m) = s(t) * atom_scale(e.measure.atom_weights[static_cast<std::size_t>(t)], e.p) *
                              underlying_saturate(x.segment(t * m, m), *e.first, opts);
      }
      return f;
    }
    case QuantKind::pr_tensor:
      if (e.first->kind == QuantKind::schatten || e.first->kind == QuantKind::min)
        return saturating_functional(x, *e.base, opts);
      return x.conjugate() / x.norm();
    case QuantKind::pop_tensor:
    case QuantKind::cb_space: return x.conjugate() / x.norm();
  }
  return x.conjugate() / x.norm();
}

std::optional<std::vector<double>> underlying_l1_weights(const PQSpace& e) {
  switch (e.kind) {
    case QuantKind::schatten:
    case QuantKind::min: return l1_weights(*e.base);
    case QuantKind::lp: {
      if (e.p != 1.0 && e.measure.size() != 1) return std::nullopt;
      auto inner = underlying_l1_weights(*e.first);
      if (!inner) return std::nullopt;
      std::vector<double> w;
      for (double mu : e.measure.atom_weights)
        for (double v : *inner) w.push_back(atom_scale(mu, e.p) * v);
      return w;
    }
    case QuantKind::pr_tensor: {
      auto a = l1_weights(*e.pr_left);
      auto b = underlying_l1_weights(*e.first);
      if (!a || !b) return std::nullopt;
      std::vector<double> w;
      for (double x : *a)
        for (double y : *b) w.push_back(x * y);
      return w;
    }
    default: return std::nullopt;
  }
}

// ---- quantized norms ----

Coeffs coeff_block(const Coeffs& u, int inner, int s) {
  return Coeffs(u.begin() + static_cast<std::ptrdiff_t>(s) * inner, u.begin() + static_cast<std::ptrdiff_t>(s + 1) * inner);
}

namespace {

NormCertificate exact_cert(double v, const std::string& method, std::uint64_t seed) {
  NormCertificate c;
  c.lower = c.upper = v;
  c.method = method;
  c.seed = seed;
  c.upper_witness.kind = "bound";
  c.upper_witness.value = v;
  c.lower_witness.kind = "exact";
  c.lower_witness.value = v;
  return c;
}

NormCertificate interval_cert(const Interval& iv, const std::string& method, std::uint64_t seed) {
  NormCertificate c = exact_cert(iv.upper, method, seed);
  c.lower = iv.lower;
  c.lower_witness.value = iv.lower;
  c.heuristic = !iv.tight(1e-9);
  if (!iv.tight(1e-9)) c.lower_witness.kind = "bound";
  return c;
}

/// Flattened coefficients as columns: column i is flatten(u_i).
CMatrix coefficient_columns(const Coeffs& u) {
  const int d = coeffs_level(u);
  CMatrix m(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = flatten(embed(u[i], d));
  return m;
}

/// Row i is the concatenation of flatten(u[i * nf + j]) over j.
CMatrix pr_rows(const Coeffs& u, int ne, int nf) {
  const int d = coeffs_level(u);
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  CMatrix m(ne, nf * block);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nf; ++j)
      m.row(i).segment(j * block, block) = flatten(embed(u[static_cast<std::size_t>(i * nf + j)], d)).transpose();
  return m;
}

Coeffs unflatten_coeffs(const CVector& v, int count, int d) {
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  Coeffs out;
  for (int j = 0; j < count; ++j) out.push_back(unflatten(v.segment(j * block, block), d));
  return out;
}

CVector level_one_vector(const Coeffs& u) {
  CVector x(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) x(static_cast<Eigen::Index>(i)) = u[i](0, 0);
  return x;
}

NormCertificate schatten_bounds(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  const BaseSpace& e = *space.base;
  const double p = space.p;
  const int d = coeffs_level(u);
  if (d == 1) return interval_cert(base_norm_bounds(level_one_vector(u), e, opts), "level_one", opts.seed);
  if (auto w = l1_weights(e)) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += (*w)[i] * schatten_norm(u[i], p);
    return exact_cert(s, "l1_identity", opts.seed);
  }
  const CMatrix m = coefficient_columns(u);
  const ProjectiveProblem prob = *projective_problem(space, u, opts);
  if (const auto r1 = rank_one_split(m); r1.rank_one) {
    TensorDecomposition dec;
    dec.left = r1.left;
    dec.right = r1.right;
    dec.cost = decomposition_cost(prob, dec.left, dec.right, &dec.left_norms, &dec.right_norms);
    const Interval iv = product(Interval::exact(schatten_norm(unflatten(r1.left, d), p)), base_norm_bounds(r1.right, e, opts));
    NormCertificate c = interval_cert({iv.lower, dec.cost}, "cross_norm", opts.seed);
    c.upper_witness.kind = "decomposition";
    c.upper_witness.decomposition = dec;
    return c;
  }
  NormCertificate c;
  c.method = "projective_search";
  c.seed = opts.seed;
  const TensorDecomposition dec = proj_norm_upper(prob, opts);
  c.upper = dec.cost;
  c.upper_witness.kind = "decomposition";
  c.upper_witness.decomposition = dec;
  c.upper_witness.value = dec.cost;
  const EngineOptions inner = nested_options(opts, 19);
  const InjectiveWitness inj = proj_norm_lower(m, schatten_dual_side(p, d), base_dual_side(e, inner), opts);
  c.lower = inj.value;
  c.lower_witness = {"injective", "", {inj.g, inj.h}, {}, inj.value};
  if (is_absolute(e)) {
    CVector z(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) z(static_cast<Eigen::Index>(i)) = schatten_norm(u[i], p);
    const double abs_lower = base_norm_bounds(z, e, inner).lower;
    if (abs_lower > c.lower) {
      c.lower = abs_lower;
      c.lower_witness = {"absolute", "", {z}, {}, abs_lower};
    }
  }
  c.heuristic = !c.interval().tight(1e-9);
  return c;
}

double min_kappa(const BaseSpace& e) {
  if (e.kind == BaseKind::lp) {
    const double q = conjugate_exponent(e.p);
    const double expo = std::max(0.0, 0.5 - (std::isinf(q) ? 0.0 : 1.0 / q));
    return std::pow(static_cast<double>(e.n), expo);
  }
  if (auto w = l1_weights(e)) {
    double s = 0.0;
    for (double x : *w) s += x * x;
    return std::sqrt(s);
  }
  return kInf;
}

CMatrix combine(const Coeffs& u, const CVector& f) {
  CMatrix a = CMatrix::Zero(u[0].rows(), u[0].cols());
  for (std::size_t i = 0; i < u.size(); ++i) a += f(static_cast<Eigen::Index>(i)) * u[i];
  return a;
}

NormCertificate min_bounds(const PQSpace& space, const Coeffs& u_in, const EngineOptions& opts) {
  const BaseSpace& e = *space.base;
  const int d = coeffs_level(u_in);
  if (d == 1) return interval_cert(base_norm_bounds(level_one_vector(u_in), e, opts), "level_one", opts.seed);
  const Coeffs u = align_coeffs(u_in, d);
  const auto n = static_cast<Eigen::Index>(u.size());
  const EngineOptions inner = nested_options(opts, 23);

  double lower = 0.0;
  CVector best_f = CVector::Zero(n);
  auto consider = [&](const CVector& f) {
    const double den = dual_upper(f, e, inner);
    if (!(den > 0.0) || std::isinf(den)) return;
    const double v = operator_norm(combine(u, f)) / den;
    if (v > lower) {
      lower = v;
      best_f = f;
    }
  };
  auto climb = [&](CVector f) {
    for (int it = 0; it < 40; ++it) {
      const CMatrix a = combine(u, f);
      if (a.norm() == 0.0) return;
      const SingularForm sf = singular_triples(a);
      const CVector xi = sf.left.col(0);
      const CVector eta = sf.right.row(0).adjoint();
      CVector y(n);
      for (Eigen::Index i = 0; i < n; ++i) y(i) = (xi.adjoint() * u[static_cast<std::size_t>(i)] * eta)(0, 0);
      const double before = lower;
      f = saturating_functional(y, e, inner);
      consider(f);
      if (it > 0 && lower <= before * (1.0 + 1e-13)) return;
    }
  };
  std::vector<CVector> starts;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (u[static_cast<std::size_t>(i)].norm() == 0.0) continue;
    const SingularForm sf = singular_triples(u[static_cast<std::size_t>(i)]);
    const CVector xi = sf.left.col(0);
    const CVector eta = sf.right.row(0).adjoint();
    CVector y(n);
    for (Eigen::Index k = 0; k < n; ++k) y(k) = (xi.adjoint() * u[static_cast<std::size_t>(k)] * eta)(0, 0);
    starts.push_back(saturating_functional(y, e, inner));
  }
  for (int r = 0; r < std::max(1, opts.budget); ++r) {
    Rng rng = make_rng(opts.seed, 31ULL + static_cast<std::uint64_t>(r));
    starts.push_back(saturating_functional(random_vector(rng, static_cast<int>(n)), e, inner));
  }
  for (const auto& s : starts) {
    consider(s);
    climb(s);
  }

  double upper = 0.0;
  std::vector<double> norms(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) norms[static_cast<std::size_t>(i)] = operator_norm(u[static_cast<std::size_t>(i)]);
  for (Eigen::Index i = 0; i < n; ++i)
    upper += norms[static_cast<std::size_t>(i)] * base_upper(basis_vector(static_cast<int>(n), static_cast<int>(i)), e, inner);
  if (is_absolute(e)) {
    CVector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = norms[static_cast<std::size_t>(i)];
    upper = std::min(upper, base_upper(z, e, inner));
  }
  const double kappa = min_kappa(e);
  if (!std::isinf(kappa)) {
    CMatrix rows(d, d * n), cols(d * n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      rows.middleCols(i * d, d) = u[static_cast<std::size_t>(i)];
      cols.middleRows(i * d, d) = u[static_cast<std::size_t>(i)];
    }
    upper = std::min(upper, kappa * std::min(operator_norm(rows), operator_norm(cols)));
  }
  std::string method = "dual_ascent";
  const auto w = l1_weights(e);
  if (w && n <= 3 && lower < upper * (1.0 - 1e-9)) {
    // the dual ball is the polydisc; the sup sits on the torus f_i = w_i e^{i theta_i}
    const int grid = n == 1 ? 1 : (n == 2 ? 4096 : 256);
    const int cells = n == 3 ? grid * grid : grid;
    const auto wt = *w;
    auto torus = [&](int idx) {
      CVector f(n);
      f(0) = wt[0];
      int rest = idx;
      for (Eigen::Index i = 1; i < n; ++i) {
        const double theta = 2.0 * std::numbers::pi * (rest % grid) / grid;
        rest /= grid;
        f(i) = wt[static_cast<std::size_t>(i)] * std::polar(1.0, theta);
      }
      return f;
    };
    const auto values = map_indices<double>(cells, [&](int idx) { return operator_norm(combine(u, torus(idx))); }, opts.exec);
    int best = 0;
    for (int k = 1; k < cells; ++k)
      if (values[static_cast<std::size_t>(k)] > values[static_cast<std::size_t>(best)]) best = k;
    double slack = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) slack += wt[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(i)];
    slack *= std::numbers::pi / grid;
    consider(torus(best));
    upper = std::min(upper, values[static_cast<std::size_t>(best)] + slack);
    method = "phase_grid";
  }
  NormCertificate c;
  c.method = method;
  c.seed = opts.seed;
  c.lower = std::min(lower, upper);
  c.upper = upper;
  c.upper_witness.kind = "bound";
  c.upper_witness.value = upper;
  c.lower_witness = {"functional", "", {best_f}, {}, lower};
  c.heuristic = !c.interval().tight(1e-9);
  return c;
}

NormCertificate lp_bounds(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  const int m = space.first->dimension();
  std::vector<Interval> parts;
  std::vector<double> scales;
  NormCertificate c;
  c.method = "atomwise";
  c.seed = opts.seed;
  c.upper_witness.kind = "atoms";
  c.lower_witness.kind = "atoms";
  for (int t = 0; t < space.measure.size(); ++t) {
    const NormCertificate part = pq_bounds(*space.first, coeff_block(u, m, t), nested_options(opts, 100 + static_cast<std::uint64_t>(t)));
    parts.push_back(part.interval());
    scales.push_back(atom_scale(space.measure.atom_weights[static_cast<std::size_t>(t)], space.p));
    c.heuristic = c.heuristic || part.heuristic;
    c.upper_witness.parts.push_back(part);
  }
  const Interval iv = lp_interval(parts, scales, space.p);
  c.lower = iv.lower;
  c.upper = iv.upper;
  c.upper_witness.value = iv.upper;
  c.lower_witness.value = iv.lower;
  return c;
}

NormCertificate pr_bounds(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  const BaseSpace& e = *space.pr_left;
  const PQSpace& f = *space.first;
  const int ne = e.dimension(), nf = f.dimension();
  const EngineOptions inner = nested_options(opts, 29);
  std::vector<NormCertificate> rows;
  for (int i = 0; i < ne; ++i) rows.push_back(pq_bounds(f, coeff_block(u, nf, i), nested_options(inner, static_cast<std::uint64_t>(i))));
  if (auto w = l1_weights(e)) {
    Interval total = Interval::exact(0.0);
    bool heur = false;
    for (int i = 0; i < ne; ++i) {
      const double wi = (*w)[static_cast<std::size_t>(i)];
      total = operator_plus(total, {wi * rows[static_cast<std::size_t>(i)].lower, wi * rows[static_cast<std::size_t>(i)].upper});
      heur = heur || rows[static_cast<std::size_t>(i)].heuristic;
    }
    NormCertificate c = interval_cert(total, "l1_identity", opts.seed);
    c.heuristic = heur || c.heuristic;
    return c;
  }
  const int d = coeffs_level(u);
  const CMatrix m = pr_rows(u, ne, nf);
  const ProjectiveProblem prob = *projective_problem(space, u, opts);
  if (const auto r1 = rank_one_split(m); r1.rank_one) {
    TensorDecomposition dec;
    dec.left = r1.left;
    dec.right = r1.right;
    dec.cost = decomposition_cost(prob, dec.left, dec.right, &dec.left_norms, &dec.right_norms);
    const NormCertificate fr = pq_bounds(f, unflatten_coeffs(r1.right, nf, d), inner);
    const Interval iv = product(base_norm_bounds(r1.left, e, inner), fr.interval());
    NormCertificate c = interval_cert({iv.lower, dec.cost}, "cross_norm", opts.seed);
    c.upper_witness.kind = "decomposition";
    c.upper_witness.decomposition = dec;
    return c;
  }
  NormCertificate c;
  c.method = "projective_search";
  c.seed = opts.seed;
  const TensorDecomposition dec = proj_norm_upper(prob, opts);
  c.upper = dec.cost;
  c.upper_witness.kind = "decomposition";
  c.upper_witness.decomposition = dec;
  c.upper_witness.value = dec.cost;
  CVector z(ne), zu(ne);
  for (int i = 0; i < ne; ++i) {
    z(i) = rows[static_cast<std::size_t>(i)].lower;
    zu(i) = rows[static_cast<std::size_t>(i)].upper;
  }
  if (is_absolute(e)) {
    const double v = base_norm_bounds(z, e, inner).lower;
    c.lower = v;
    c.lower_witness = {"absolute", "", {z}, {}, v};
  }
  std::vector<CVector> fs;
  for (int i = 0; i < ne; ++i) fs.push_back(basis_vector(ne, i));
  fs.push_back(saturating_functional(zu, e, inner));
  for (const auto& fv : fs) {
    const double den = dual_upper(fv, e, inner);
    if (!(den > 0.0)) continue;
    Coeffs img = zero_coeffs(nf, d);
    for (int i = 0; i < ne; ++i)
      for (int j = 0; j < nf; ++j) img[static_cast<std::size_t>(j)] += fv(i) * embed(u[static_cast<std::size_t>(i * nf + j)], d);
    const double v = pq_bounds(f, img, inner).lower / den;
    if (v > c.lower) {
      c.lower = v;
      c.lower_witness = {"functional", "", {fv}, {}, v};
    }
  }
  c.lower = std::min(c.lower, c.upper);
  c.heuristic = !c.interval().tight(1e-9);
  return c;
}

NormCertificate pop_bounds(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  NormCertificate up = pop_upper(space, u, opts);
  const NormCertificate lo = pop_lower(space, u, opts);
  up.lower = std::min(lo.lower, up.upper);
  up.lower_witness = lo.lower_witness;
  up.method = "pop:" + up.method + "/" + lo.method;
  up.heuristic = !up.interval().tight(1e-9);
  return up;
}

NormCertificate cb_bounds(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  const SupEstimate est = cbspace_norm(space, u, std::max(1, opts.level_cap), opts);
  NormCertificate c;
  c.method = "cb_sup_search";
  c.seed = opts.seed;
  c.lower = est.lower;
  c.lower_witness = {"sup_element", "", {}, est.witness, est.lower};
  if (is_scalar_line(*space.first) && is_scalar_line(*space.second) && space.first->p <= space.second->p) {
    // E(u, b) = u <> b and ||u||_q <= ||u||_p
    const double scale = std::abs(base_norm(basis_vector(1, 0), *space.second->base)) /
                         std::abs(base_norm(basis_vector(1, 0), *space.first->base));
    c.upper = scale * schatten_norm(u[0], space.second->p);
    c.upper_witness.kind = "bound";
    c.upper_witness.value = c.upper;
    c.lower = std::min(c.lower, c.upper);
    c.method = "scalar_line_cb";
  }
  c.heuristic = !c.interval().tight(1e-9);
  return c;
}

}  // namespace

std::optional<ProjectiveProblem> projective_problem(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  const int d = coeffs_level(u);
  const EngineOptions inner = nested_options(opts, 37);
  if (space.kind == QuantKind::schatten) {
    const double p = space.p;
    BasePtr base = space.base;
    return ProjectiveProblem{coefficient_columns(align_coeffs(u, d)),
                             [p, d](const CVector& x) { return schatten_norm(unflatten(x, d), p); },
                             [base, inner](const CVector& y) { return base_upper(y, *base, inner); }};
  }
  if (space.kind == QuantKind::pr_tensor) {
    BasePtr e = space.pr_left;
    SpacePtr f = space.first;
    const int nf = f->dimension();
    return ProjectiveProblem{pr_rows(u, e->dimension(), nf),
                             [e, inner](const CVector& x) { return base_upper(x, *e, inner); },
                             [f, nf, d, inner](const CVector& y) { return pq_bounds(*f, unflatten_coeffs(y, nf, d), inner).upper; }};
  }
  return std::nullopt;
}

NormCertificate pq_bounds(const PQSpace& space, const Coeffs& u_in, const EngineOptions& opts) {
  if (static_cast<int>(u_in.size()) != space.dimension())
    throw DimensionError("pq_bounds: " + std::to_string(u_in.size()) + " coefficients for a space of dimension " +
                         std::to_string(space.dimension()));
  for (const auto& c : u_in)
    if (c.rows() != c.cols()) throw DimensionError("pq_bounds: coefficients must be square");
  const Coeffs u = align_coeffs(u_in, coeffs_level(u_in));
  bool zero = true;
  for (const auto& c : u) zero = zero && c.norm() == 0.0;
  if (zero) return exact_cert(0.0, "zero", opts.seed);
  NormCertificate c;
  switch (space.kind) {
    case QuantKind::schatten: c = schatten_bounds(space, u, opts); break;
    case QuantKind::min: c = min_bounds(space, u, opts); break;
    case QuantKind::lp: c = lp_bounds(space, u, opts); break;
    case QuantKind::pr_tensor: c = pr_bounds(space, u, opts); break;
    case QuantKind::pop_tensor: c = pop_bounds(space, u, opts); break;
    case QuantKind::cb_space: c = cb_bounds(space, u, opts); break;
  }
  // rounding between independent evaluations of the same closed form
  if (c.lower > c.upper && c.lower <= c.upper + 1e-12 * std::max(1.0, c.upper)) c.lower = c.upper;
  return c;
}

NormCertificate pq_norm(const AmpElem& u, const EngineOptions& opts) {
  return pq_bounds(*u.ambient(), u.coefficients(), opts);
}

NormCertificate norm_Lp(const AmpElem& u, const EngineOptions& opts) {
  if (u.ambient()->kind != QuantKind::lp) throw DimensionError("norm_Lp: ambient is not an L_p quantization");
  return pq_norm(u, opts);
}

NormCertificate norm_pr_quant(const AmpElem& u, const EngineOptions& opts) {
  if (u.ambient()->kind != QuantKind::pr_tensor) throw DimensionError("norm_pr_quant: ambient is not a pr tensor");
  return pq_norm(u, opts);
}

double witness_discrepancy(const PQSpace& space, const Coeffs& u_in, const NormCertificate& cert,
                           const EngineOptions& opts) {
  const Coeffs u = align_coeffs(u_in, coeffs_level(u_in));
  double worst = std::max(0.0, cert.lower - cert.upper);
  const double scale = std::max(1.0, std::isinf(cert.upper) ? cert.lower : cert.upper);
  const UpperWitness& uw = cert.upper_witness;
  if (uw.kind == "decomposition") {
    if (auto prob = projective_problem(space, u, opts)) {
      const TensorDecomposition& dec = uw.decomposition;
      const double cost = decomposition_cost(*prob, dec.left, dec.right);
      worst = std::max(worst, std::abs(cost - cert.upper) / scale);
      const CMatrix diff = dec.reconstruct() - prob->tensor;
      if (diff.size() > 0) worst = std::max(worst, diff.cwiseAbs().maxCoeff() / scale);
    }
  } else if (uw.kind == "pop_representation") {
    double cost = 0.0;
    for (const auto& t : uw.representation.terms) cost += with_factor_norms(space, t, opts).cost();
    worst = std::max(worst, std::abs(cost - cert.upper) / scale);
    worst = std::max(worst, representation_error(uw.representation, u));
  } else if (uw.kind == "atoms" && space.kind == QuantKind::lp) {
    const int m = space.first->dimension();
    for (std::size_t t = 0; t < uw.parts.size(); ++t)
      worst = std::max(worst, witness_discrepancy(*space.first, coeff_block(u, m, static_cast<int>(t)), uw.parts[t],
                                                  nested_options(opts, 100 + t)));
  }
  const LowerWitness& lw = cert.lower_witness;
  if (lw.kind == "injective") {
    if (auto prob = projective_problem(space, u, opts); prob && space.kind == QuantKind::schatten) {
      const double v = injective_value(prob->tensor, lw.vectors[0], lw.vectors[1],
                                       schatten_dual_side(space.p, coeffs_level(u)),
                                       base_dual_side(*space.base, nested_options(opts, 19)));
      worst = std::max(worst, std::abs(v - lw.value) / scale);
    }
  } else if (lw.kind == "functional" && space.kind == QuantKind::min) {
    const CVector& f = lw.vectors[0];
    const double den = dual_norm_bounds(f, *space.base, nested_options(opts, 23)).upper;
    const double v = den > 0.0 ? operator_norm(combine(u, f)) / den : 0.0;
    worst = std::max(worst, std::abs(v - lw.value) / scale);
  } else if (lw.kind == "functional_pair" && space.kind == QuantKind::pop_tensor) {
    const CVector& f = lw.vectors[0];
    const CVector& g = lw.vectors[1];
    const int nf = space.second->dimension();
    CMatrix a = CMatrix::Zero(u[0].rows(), u[0].cols());
    for (Eigen::Index i = 0; i < f.size(); ++i)
      for (Eigen::Index j = 0; j < g.size(); ++j) a += f(i) * g(j) * u[static_cast<std::size_t>(i * nf + j)];
    const EngineOptions inner = nested_options(opts, 41);
    const double den = underlying_dual_upper(f, *space.first, inner) * underlying_dual_upper(g, *space.second, inner);
    const double v = den > 0.0 ? operator_norm(a) / den : 0.0;
    worst = std::max(worst, std::abs(v - lw.value) / scale);
  }
  return worst;
}

}  // namespace pqnorm
