#include "pqnorm/projective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pqnorm {

CVector flatten(const CMatrix& a) {
  return Eigen::Map<const CVector>(a.data(), a.size());
}

CMatrix unflatten(const CVector& v, int lvl) {
  if (v.size() != static_cast<Eigen::Index>(lvl) * lvl) throw DimensionError("unflatten: length mismatch");
  return Eigen::Map<const CMatrix>(v.data(), lvl, lvl);
}

CVector schatten_saturate(const CMatrix& a, double p) {
  const int d = level(a);
  if (a.norm() == 0.0) return CVector::Zero(static_cast<Eigen::Index>(d) * d);
  const SingularForm sf = singular_triples(a);
  const RVector& s = sf.values;
  RVector c = RVector::Zero(s.size());
  if (p == 1.0) {
    c.setOnes();
  } else if (std::isinf(p)) {
    c(0) = 1.0;
  } else {
    const double norm = schatten_norm(a, p);
    for (Eigen::Index k = 0; k < s.size(); ++k) c(k) = std::pow(s(k) / norm, p - 1.0);
  }
  // a = U S V^*, D = conj(U) diag(c) V^T gives sum_rc a_rc D_rc = sum_k s_k c_k
  const CMatrix v = sf.right.adjoint();
  const CMatrix dmat = sf.left.conjugate() * c.cast<Complex>().asDiagonal() * v.transpose();
  return flatten(dmat);
}

DualSide schatten_dual_side(double p, int lvl) {
  const double q = conjugate_exponent(p);
  return {[p, lvl](const CVector& y) { return schatten_saturate(unflatten(y, lvl), p); },
          [q, lvl](const CVector& f) { return schatten_norm(unflatten(f, lvl), q); }};
}

double decomposition_cost(const ProjectiveProblem& prob, const CMatrix& left, const CMatrix& right,
                          std::vector<double>* left_norms, std::vector<double>* right_norms) {
  double cost = 0.0;
  if (left_norms) left_norms->assign(static_cast<std::size_t>(left.cols()), 0.0);
  if (right_norms) right_norms->assign(static_cast<std::size_t>(left.cols()), 0.0);
  for (Eigen::Index k = 0; k < left.cols(); ++k) {
    if (left.col(k).norm() == 0.0 || right.col(k).norm() == 0.0) continue;
    const double ln = prob.left_norm(left.col(k));
    const double rn = prob.right_norm(right.col(k));
    if (left_norms) (*left_norms)[static_cast<std::size_t>(k)] = ln;
    if (right_norms) (*right_norms)[static_cast<std::size_t>(k)] = rn;
    cost += ln * rn;
  }
  return cost;
}

namespace {

TensorDecomposition finalize(const ProjectiveProblem& prob, const CMatrix& left, const CMatrix& right) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < left.cols(); ++k)
    if (left.col(k).norm() > 0.0 && right.col(k).norm() > 0.0) keep.push_back(k);
  TensorDecomposition out;
  out.left = CMatrix(left.rows(), static_cast<Eigen::Index>(keep.size()));
  out.right = CMatrix(right.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.left.col(static_cast<Eigen::Index>(c)) = left.col(keep[c]);
    out.right.col(static_cast<Eigen::Index>(c)) = right.col(keep[c]);
  }
  out.cost = decomposition_cost(prob, out.left, out.right, &out.left_norms, &out.right_norms);
  return out;
}

struct SearchState {
  CMatrix x;
  CMatrix y;
  std::vector<double> ln;
  std::vector<double> rn;
  double cost = 0.0;
};

double column_norm(const VectorNorm& norm, const CVector& v) { return v.norm() == 0.0 ? 0.0 : norm(v); }

void recompute(const ProjectiveProblem& prob, SearchState& s) {
  const auto n = static_cast<std::size_t>(s.x.cols());
  s.ln.assign(n, 0.0);
  s.rn.assign(n, 0.0);
  s.cost = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    s.ln[k] = column_norm(prob.left_norm, s.x.col(static_cast<Eigen::Index>(k)));
    s.rn[k] = column_norm(prob.right_norm, s.y.col(static_cast<Eigen::Index>(k)));
    s.cost += s.ln[k] * s.rn[k];
  }
}

SearchState pad(const ProjectiveProblem& prob, const TensorDecomposition& seed, int length, Rng& rng) {
  SearchState s;
  const Eigen::Index m = prob.tensor.rows(), n = prob.tensor.cols();
  const Eigen::Index cols = std::max<Eigen::Index>(seed.length(), length);
  s.x = CMatrix::Zero(m, cols);
  s.y = CMatrix::Zero(n, cols);
  s.x.leftCols(seed.length()) = seed.left;
  s.y.leftCols(seed.length()) = seed.right;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < seed.length(); ++k) scale = std::max(scale, seed.right.col(k).norm());
  if (scale == 0.0) scale = 1.0;
  for (Eigen::Index k = seed.length(); k < cols; ++k) s.y.col(k) = scale * random_vector(rng, static_cast<int>(n)) / std::sqrt(static_cast<double>(n));
  recompute(prob, s);
  return s;
}

void apply_gauge(SearchState& s, const CMatrix& g) {
  s.x = s.x * g;
  s.y = s.y * g.inverse().transpose();
}

SearchState local_search(const ProjectiveProblem& prob, SearchState s, Rng& rng, int iterations) {
  const int len = static_cast<int>(s.x.cols());
  if (len == 0) return s;
  double step = 0.3;
  for (int it = 0; it < iterations; ++it) {
    const bool shear = len >= 2 && uniform(rng) < 0.75;
    if (shear) {
      const int k = uniform_int(rng, 0, len - 1);
      int l = uniform_int(rng, 0, len - 2);
      if (l >= k) ++l;
      double ref = s.x.col(l).norm();
      const double xk = s.x.col(k).norm();
      if (xk == 0.0) continue;
      if (ref == 0.0) ref = xk;
      const Complex eps = step * (ref / xk) * gaussian_complex(rng);
      const CVector new_xl = s.x.col(l) + eps * s.x.col(k);
      const CVector new_yk = s.y.col(k) - eps * s.y.col(l);
      const double lnl = column_norm(prob.left_norm, new_xl);
      const double rnk = column_norm(prob.right_norm, new_yk);
      const auto ku = static_cast<std::size_t>(k), lu = static_cast<std::size_t>(l);
      const double cost = s.cost - s.ln[lu] * s.rn[lu] - s.ln[ku] * s.rn[ku] + lnl * s.rn[lu] + s.ln[ku] * rnk;
      if (cost < s.cost * (1.0 - 1e-13)) {
        s.x.col(l) = new_xl;
        s.y.col(k) = new_yk;
        s.ln[lu] = lnl;
        s.rn[ku] = rnk;
        s.cost = cost;
        step = std::min(1.0, step * 1.25);
      } else {
        step = std::max(1e-7, step * 0.9);
      }
    } else {
      SearchState t = s;
      apply_gauge(t, random_near_identity(rng, len, step));
      recompute(prob, t);
      if (t.cost < s.cost * (1.0 - 1e-13)) {
        s = std::move(t);
        step = std::min(1.0, step * 1.25);
      } else {
        step = std::max(1e-7, step * 0.9);
      }
    }
    if (step <= 1e-7) step = 0.3;
  }
  // recompute from scratch so the reported norms match the stored columns exactly
  recompute(prob, s);
  return s;
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

TensorDecomposition standard_decomposition(const ProjectiveProblem& prob) {
  const Eigen::Index n = prob.tensor.cols();
  return finalize(prob, prob.tensor, CMatrix::Identity(n, n));
}

TensorDecomposition svd_decomposition(const ProjectiveProblem& prob) {
  if (prob.tensor.size() == 0 || prob.tensor.norm() == 0.0) return finalize(prob, CMatrix(prob.tensor.rows(), 0), CMatrix(prob.tensor.cols(), 0));
  Eigen::JacobiSVD<CMatrix> svd(prob.tensor, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-14 * s(0)) ++r;
  const CMatrix left = svd.matrixU().leftCols(r) * s.head(r).cast<Complex>().asDiagonal();
  const CMatrix right = svd.matrixV().leftCols(r).conjugate();
  return finalize(prob, left, right);
}

TensorDecomposition proj_norm_upper(const ProjectiveProblem& prob, const EngineOptions& opts,
                                    const std::vector<TensorDecomposition>& extra_seeds) {
  const double scale = max_abs(prob.tensor);
  if (scale == 0.0) return finalize(prob, CMatrix(prob.tensor.rows(), 0), CMatrix(prob.tensor.cols(), 0));

  std::vector<TensorDecomposition> seeds{standard_decomposition(prob), svd_decomposition(prob)};
  if (prob.tensor.rows() <= 16) {
    const Eigen::Index m = prob.tensor.rows();
    seeds.push_back(finalize(prob, CMatrix::Identity(m, m), prob.tensor.transpose()));
  }
  for (const auto& s : extra_seeds) seeds.push_back(s);
  std::size_t best_seed = 0;
  for (std::size_t i = 1; i < seeds.size(); ++i)
    if (seeds[i].cost < seeds[best_seed].cost) best_seed = i;
  int terms = seeds[0].length();
  for (const auto& s : seeds) terms = std::min(terms, s.length());
  terms = std::max(1, terms);
  const int length = opts.max_length > 0 ? opts.max_length : 2 * terms;
  const int restarts = std::max(1, opts.budget);
  const double tol = 1e-11 * std::max(1.0, scale);
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (seeds[i].length() <= length) usable.push_back(i);

  auto run = [&](int r) -> TensorDecomposition {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
    const TensorDecomposition& start = r == 0 ? seeds[best_seed] : seeds[usable[static_cast<std::size_t>(r) % usable.size()]];
    SearchState s = pad(prob, start, length, rng);
    if (r > 0) {
      apply_gauge(s, random_near_identity(rng, static_cast<int>(s.x.cols()), 0.5));
      recompute(prob, s);
    }
    s = local_search(prob, std::move(s), rng, opts.iterations);
    TensorDecomposition out = finalize(prob, s.x, s.y);
    if (max_abs(out.reconstruct() - prob.tensor) > tol) return start;
    return out;
  };
  const auto results = map_indices<TensorDecomposition>(restarts, run, opts.exec);
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].cost < results[best].cost) best = i;
  if (seeds[best_seed].cost <= results[best].cost) return seeds[best_seed];
  return results[best];
}

double injective_value(const CMatrix& tensor, const CVector& g, const CVector& h, const DualSide& left,
                       const DualSide& right) {
  if (g.norm() == 0.0 || h.norm() == 0.0) return 0.0;
  const double num = std::abs((g.transpose() * tensor * h)(0, 0));
  const double den = left.dual_upper(g) * right.dual_upper(h);
  if (!(den > 0.0) || std::isinf(den)) return 0.0;
  return num / den;
}

InjectiveWitness proj_norm_lower(const CMatrix& tensor, const DualSide& left, const DualSide& right,
                                 const EngineOptions& opts) {
  InjectiveWitness best;
  if (tensor.size() == 0 || tensor.norm() == 0.0) {
    best.g = CVector::Zero(tensor.rows());
    best.h = CVector::Zero(tensor.cols());
    return best;
  }
  std::vector<CVector> starts;
  {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(tensor.cols()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return tensor.col(a).norm() > tensor.col(b).norm(); });
    for (std::size_t k = 0; k < std::min<std::size_t>(3, order.size()); ++k)
      if (tensor.col(order[k]).norm() > 0.0) starts.push_back(left.saturate(tensor.col(order[k])));
    Eigen::JacobiSVD<CMatrix> svd(tensor, Eigen::ComputeThinU | Eigen::ComputeThinV);
    starts.push_back(left.saturate(svd.matrixU().col(0)));
  }
  const int restarts = std::max(1, opts.budget);
  for (int r = 1; r < restarts; ++r) {
    Rng rng = make_rng(opts.seed, 7919ULL + static_cast<std::uint64_t>(r));
    starts.push_back(left.saturate(tensor * random_vector(rng, static_cast<int>(tensor.cols()))));
  }

  auto climb = [&](int i) -> InjectiveWitness {
    InjectiveWitness w;
    CVector g = starts[static_cast<std::size_t>(i)];
    for (int it = 0; it < 40; ++it) {
      const CVector th = tensor.transpose() * g;
      if (th.norm() == 0.0) break;
      const CVector h = right.saturate(th);
      const CVector tg = tensor * h;
      if (tg.norm() == 0.0) break;
      const double v = injective_value(tensor, g, h, left, right);
      if (v > w.value * (1.0 + 1e-13)) {
        w = {g, h, v};
      } else if (it > 0) {
        break;
      }
      g = left.saturate(tg);
    }
    if (w.g.size() == 0) {
      w.g = CVector::Zero(tensor.rows());
      w.h = CVector::Zero(tensor.cols());
    }
    return w;
  };
  const auto results = map_indices<InjectiveWitness>(static_cast<int>(starts.size()), climb, opts.exec);
  for (const auto& w : results)
    if (w.value > best.value) best = w;
  if (best.g.size() == 0) {
    best.g = CVector::Zero(tensor.rows());
    best.h = CVector::Zero(tensor.cols());
  }
  return best;
}

}  // namespace pqnorm
