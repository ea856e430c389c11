#include "pqnorm/pop.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pqnorm {

namespace {

struct Candidate {
  std::string name;
  PopRepresentation rep;
  double cost = kInf;
};

double coeff_scale(const Coeffs& u) {
  double s = 0.0;
  for (const auto& c : u)
    if (c.size() > 0) s = std::max(s, c.cwiseAbs().maxCoeff());
  return s;
}

Coeffs level_one(const CVector& x) {
  Coeffs out;
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(CMatrix::Constant(1, 1, x(i)));
  return out;
}

Coeffs transpose_coeffs(const Coeffs& u, int ne, int nf) {
  Coeffs out(u.size());
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nf; ++j) out[static_cast<std::size_t>(j * ne + i)] = u[static_cast<std::size_t>(i * nf + j)];
  return out;
}

CMatrix row_blocks(const Coeffs& u, int ne, int nf) {
  const int d = coeffs_level(u);
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  CMatrix m(ne, nf * block);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nf; ++j)
      m.row(i).segment(j * block, block) = flatten(embed(u[static_cast<std::size_t>(i * nf + j)], d)).transpose();
  return m;
}

Coeffs split_blocks(const CVector& v, int count, int d) {
  const Eigen::Index block = static_cast<Eigen::Index>(d) * d;
  Coeffs out;
  for (int j = 0; j < count; ++j) out.push_back(unflatten(v.segment(j * block, block), d));
  return out;
}

double upper_of(const PQSpace& s, const Coeffs& c, const EngineOptions& opts) { return pq_bounds(s, c, opts).upper; }

/// u = sum_k x_k (x) w_k with x_k in the underlying space of E and w_k in K F.
TensorDecomposition e_side_decomposition(const PQSpace& space, const Coeffs& u, const EngineOptions& opts) {
  const PQSpace& e = *space.first;
  const PQSpace& f = *space.second;
  const int ne = e.dimension(), nf = f.dimension(), d = coeffs_level(u);
  const CMatrix m = row_blocks(u, ne, nf);
  const EngineOptions inner = nested_options(opts, 59);
  ProjectiveProblem prob{m, [&e, inner](const CVector& x) { return upper_of(e, level_one(x), inner); },
                         [&f, nf, d, inner](const CVector& y) { return upper_of(f, split_blocks(y, nf, d), inner); }};
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m.row(i).norm() > 0.0) rows.push_back(i);
  TensorDecomposition by_rows;
  by_rows.left = CMatrix::Zero(ne, static_cast<Eigen::Index>(rows.size()));
  by_rows.right = CMatrix::Zero(m.cols(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    by_rows.left(rows[k], static_cast<Eigen::Index>(k)) = 1.0;
    by_rows.right.col(static_cast<Eigen::Index>(k)) = m.row(rows[k]).transpose();
  }
  by_rows.cost = decomposition_cost(prob, by_rows.left, by_rows.right, &by_rows.left_norms, &by_rows.right_norms);
  if (underlying_l1_weights(e)) return by_rows;
  return proj_norm_upper(prob, inner, {by_rows});
}

PopRepresentation e_side_terms(const TensorDecomposition& dec, int nf, int d) {
  PopRepresentation rep;
  for (int k = 0; k < dec.length(); ++k) {
    PopTerm t;
    t.a = CMatrix::Identity(d, d);
    t.b = CMatrix::Identity(d, d);
    t.u = level_one(dec.left.col(k));
    t.v = split_blocks(dec.right.col(k), nf, d);
    rep.terms.push_back(std::move(t));
  }
  return rep;
}

PopRepresentation swap_sides(const PopRepresentation& rep) {
  PopRepresentation out;
  for (const auto& t : rep.terms) {
    PopTerm s;
    const int du = coeffs_level(t.u), dv = coeffs_level(t.v);
    const int d = std::max({level(t.a), du * dv, level(t.b)});
    CMatrix delta = CMatrix::Identity(d, d);
    delta.topLeftCorner(du * dv, du * dv) = flip_unitary(dv, du);
    s.a = embed(t.a, d) * delta;
    s.b = delta.adjoint() * embed(t.b, d);
    s.u = t.v;
    s.v = t.u;
    out.terms.push_back(std::move(s));
  }
  return out;
}

struct L1View {
  MeasureSpace measure;
  SpacePtr inner;
  bool genuine = false;
};

L1View l1_view(const SpacePtr& s) {
  if (s->kind == QuantKind::lp && s->p == 1.0) return {s->measure, s->first, true};
  return {MeasureSpace({1.0}), s, false};
}

Coeffs atom_block(const Coeffs& u, const L1View& x, const L1View& y, int s, int t) {
  const int m = x.inner->dimension(), n = y.inner->dimension();
  const int nf = y.measure.size() * n;
  Coeffs out;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out.push_back(u[static_cast<std::size_t>((s * m + i) * nf + (t * n + j))]);
  return out;
}

Coeffs lift_to_atom(const Coeffs& c, const L1View& x, int s) {
  const int m = x.inner->dimension();
  const int d = coeffs_level(c);
  Coeffs out = zero_coeffs(x.measure.size() * m, d);
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(s * m + i)] = embed(c[static_cast<std::size_t>(i)], d);
  return out;
}

PopRepresentation singular_split(const PQSpace& space, const Coeffs& u) {
  const int ne = space.first->dimension(), nf = space.second->dimension();
  const int d = coeffs_level(u);
  PopRepresentation rep;
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nf; ++j) {
      const CMatrix& c = u[static_cast<std::size_t>(i * nf + j)];
      if (c.norm() == 0.0) continue;
      const SingularForm sf = singular_triples(embed(c, d));
      for (Eigen::Index r = 0; r < sf.values.size(); ++r) {
        if (sf.values(r) <= 1e-15 * sf.values(0)) break;
        PopTerm t;
        t.a = CMatrix::Zero(d, d);
        t.a.col(0) = sf.values(r) * sf.left.col(r);
        t.b = CMatrix::Zero(d, d);
        t.b.row(0) = sf.right.row(r);
        t.u = level_one(basis_vector(ne, i));
        t.v = level_one(basis_vector(nf, j));
        rep.terms.push_back(std::move(t));
      }
    }
  return rep;
}

/// Nearest Kronecker-product sums for every factorization d = d1 * d2.
std::vector<PopRepresentation> kronecker_candidates(const PQSpace& space, const Coeffs& u, bool single_only) {
  const int ne = space.first->dimension(), nf = space.second->dimension();
  const int d = coeffs_level(u);
  std::vector<PopRepresentation> out;
  for (int d1 = 1; d1 <= d; ++d1) {
    if (d % d1 != 0) continue;
    const int d2 = d / d1;
    CMatrix r = CMatrix::Zero(static_cast<Eigen::Index>(ne) * d1 * d1, static_cast<Eigen::Index>(nf) * d2 * d2);
    for (int i = 0; i < ne; ++i)
      for (int j = 0; j < nf; ++j) {
        const CMatrix c = embed(u[static_cast<std::size_t>(i * nf + j)], d);
        for (int r1 = 0; r1 < d1; ++r1)
          for (int c1 = 0; c1 < d1; ++c1)
            for (int r2 = 0; r2 < d2; ++r2)
              for (int c2 = 0; c2 < d2; ++c2)
                r((i * d1 + r1) * d1 + c1, (j * d2 + r2) * d2 + c2) = c(r1 * d2 + r2, c1 * d2 + c2);
      }
    Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) continue;
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > 1e-15 * s(0)) ++rank;
    if (single_only && rank > 1) continue;
    PopRepresentation rep;
    for (Eigen::Index k = 0; k < rank; ++k) {
      const double root = std::sqrt(s(k));
      const CVector left = root * svd.matrixU().col(k);
      const CVector right = root * svd.matrixV().col(k).conjugate();
      PopTerm t;
      t.a = CMatrix::Identity(d, d);
      t.b = CMatrix::Identity(d, d);
      for (int i = 0; i < ne; ++i) {
        CMatrix m(d1, d1);
        for (int r1 = 0; r1 < d1; ++r1)
          for (int c1 = 0; c1 < d1; ++c1) m(r1, c1) = left((i * d1 + r1) * d1 + c1);
        t.u.push_back(m);
      }
      for (int j = 0; j < nf; ++j) {
        CMatrix m(d2, d2);
        for (int r2 = 0; r2 < d2; ++r2)
          for (int c2 = 0; c2 < d2; ++c2) m(r2, c2) = right((j * d2 + r2) * d2 + c2);
        t.v.push_back(m);
      }
      rep.terms.push_back(std::move(t));
    }
    out.push_back(std::move(rep));
  }
  return out;
}

PopRepresentation with_norms(const PQSpace& space, PopRepresentation rep, const EngineOptions& opts) {
  for (auto& t : rep.terms) t = with_factor_norms(space, std::move(t), opts);
  return rep;
}

CMatrix gauge_block(const CMatrix& g, int d) {
  CMatrix m = CMatrix::Identity(d, d);
  m.topLeftCorner(g.rows(), g.cols()) = g;
  return m;
}

/// Single-diamond representation of sum_k x_k (x) w_k by block embedding.
PopTerm block_embedding(const PQSpace& space, const TensorDecomposition& dec, int d, const EngineOptions& opts) {
  const int nf = space.second->dimension();
  const int ne = space.first->dimension();
  const int kk = dec.length();
  const int kd = kk * d;
  const int big = kk * kd;
  std::vector<Coeffs> w;
  std::vector<CMatrix> q, r;
  for (int k = 0; k < kk; ++k) {
    w.push_back(split_blocks(dec.right.col(k), nf, d));
    CMatrix stacked(d, d * nf);
    for (int j = 0; j < nf; ++j) stacked.middleCols(j * d, d) = w.back()[static_cast<std::size_t>(j)];
    q.push_back(range_projection(stacked));
    CMatrix stacked_adj(d, d * nf);
    for (int j = 0; j < nf; ++j) stacked_adj.middleCols(j * d, d) = w.back()[static_cast<std::size_t>(j)].adjoint();
    r.push_back(range_projection(stacked_adj));
  }
  PopTerm t;
  t.a = CMatrix::Zero(big, big);
  t.b = CMatrix::Zero(big, big);
  for (int k = 0; k < kk; ++k) {
    t.a.block(0, k * kd + k * d, d, d) = q[static_cast<std::size_t>(k)];
    t.b.block(k * kd + k * d, 0, d, d) = r[static_cast<std::size_t>(k)];
  }
  const EngineOptions inner = nested_options(opts, 61);
  auto build = [&](const std::vector<double>& lambda) {
    PopTerm s = t;
    s.u = zero_coeffs(ne, kk);
    s.v = zero_coeffs(nf, kd);
    for (int k = 0; k < kk; ++k) {
      const double lk = lambda[static_cast<std::size_t>(k)];
      for (int i = 0; i < ne; ++i) s.u[static_cast<std::size_t>(i)](k, k) = lk * dec.left(i, k);
      for (int j = 0; j < nf; ++j) s.v[static_cast<std::size_t>(j)].block(k * d, k * d, d, d) = w[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] / lk;
    }
    return with_factor_norms(space, std::move(s), inner);
  };
  std::vector<double> lambda(static_cast<std::size_t>(kk), 1.0);
  for (int k = 0; k < kk; ++k) {
    const double xn = upper_of(*space.first, level_one(dec.left.col(k)), inner);
    const double wn = upper_of(*space.second, w[static_cast<std::size_t>(k)], inner);
    if (xn > 0.0 && wn > 0.0 && std::isfinite(xn) && std::isfinite(wn)) lambda[static_cast<std::size_t>(k)] = std::sqrt(wn / xn);
  }
  PopTerm best = build(lambda);
  double best_cost = best.cost();
  if (kk > 1) {
    for (double step = 1.0; step > 1.0 / 64; step /= 2.0) {
      bool moved = true;
      for (int round = 0; moved && round < 4; ++round) {
        moved = false;
        for (int k = 0; k < kk; ++k)
          for (double dir : {1.0, -1.0}) {
            std::vector<double> trial = lambda;
            trial[static_cast<std::size_t>(k)] *= std::exp2(dir * step);
            PopTerm cand = build(trial);
            const double c = cand.cost();
            if (c < best_cost * (1.0 - 1e-12)) {
              best = std::move(cand);
              best_cost = c;
              lambda = trial;
              moved = true;
            }
          }
      }
    }
  }
  return best;
}

Candidate pick_best(const PQSpace& space, const Coeffs& u, std::vector<Candidate> cands) {
  Candidate best;
  for (auto& c : cands) {
    if (c.rep.terms.empty()) continue;
    if (representation_error(c.rep, u) > 1e-9) continue;
    c.cost = c.rep.cost();
    if (c.cost < best.cost) best = std::move(c);
  }
  (void)space;
  return best;
}

NormCertificate upper_cert(const Candidate& best, const EngineOptions& opts) {
  NormCertificate c;
  c.lower = 0.0;
  c.upper = best.cost;
  c.method = best.name;
  c.seed = opts.seed;
  c.heuristic = true;
  c.upper_witness.kind = "pop_representation";
  c.upper_witness.representation = best.rep;
  c.upper_witness.value = best.cost;
  return c;
}

NormCertificate zero_cert(const EngineOptions& opts) {
  NormCertificate c;
  c.lower = c.upper = 0.0;
  c.method = "zero";
  c.seed = opts.seed;
  c.upper_witness.kind = "bound";
  c.upper_witness.value = 0.0;
  c.lower_witness.kind = "exact";
  return c;
}

bool is_zero(const Coeffs& u) {
  for (const auto& c : u)
    if (c.norm() != 0.0) return false;
  return true;
}

void check_pop(const PQSpace& space, const Coeffs& u) {
  if (space.kind != QuantKind::pop_tensor) throw DimensionError("pop engines need a pop_tensor ambient");
  if (static_cast<int>(u.size()) != space.dimension()) throw DimensionError("pop engines: coefficient count mismatch");
}

Candidate op_search(const PQSpace& space, const Coeffs& u, const EngineOptions& opts,
                    const std::vector<PopRepresentation>& hints) {
  const int ne = space.first->dimension(), nf = space.second->dimension();
  const int d = coeffs_level(u);
  std::vector<Candidate> cands;
  for (std::size_t h = 0; h < hints.size(); ++h)
    if (hints[h].terms.size() == 1) cands.push_back({"hint", with_norms(space, hints[h], opts)});
  const TensorDecomposition es = e_side_decomposition(space, u, opts);
  if (es.length() > 0) cands.push_back({"block_embedding_left", {{block_embedding(space, es, d, opts)}}});
  const PQSpace swapped = *PQSpace::pop_tensor(space.second, space.first);
  const Coeffs ut = transpose_coeffs(u, ne, nf);
  const TensorDecomposition fs = e_side_decomposition(swapped, ut, opts);
  if (fs.length() > 0) {
    const PopRepresentation t{{block_embedding(swapped, fs, d, opts)}};
    cands.push_back({"block_embedding_right", with_norms(space, swap_sides(t), opts)});
  }
  for (auto& rep : kronecker_candidates(space, u, true)) cands.push_back({"kronecker", with_norms(space, rep, opts)});
  Candidate best = pick_best(space, u, std::move(cands));
  if (best.rep.terms.size() == 1) {
    PopRepresentation refined{{refine_term(space, best.rep.terms[0], opts)}};
    if (representation_error(refined, u) <= 1e-9 && refined.cost() < best.cost) {
      best.rep = std::move(refined);
      best.cost = best.rep.cost();
      best.name += "+refine";
    }
  }
  return best;
}

}  // namespace

PopTerm with_factor_norms(const PQSpace& space, PopTerm term, const EngineOptions& opts) {
  term.u_norm = upper_of(*space.first, term.u, nested_options(opts, 43));
  term.v_norm = upper_of(*space.second, term.v, nested_options(opts, 47));
  return term;
}

double representation_error(const PopRepresentation& rep, const Coeffs& u) {
  const Coeffs rec = rep.reconstruct(static_cast<int>(u.size()));
  return coeffs_distance(rec, u) / std::max(1.0, coeff_scale(u));
}

PopTerm refine_term(const PQSpace& space, const PopTerm& term, const EngineOptions& opts) {
  const EngineOptions inner = nested_options(opts, 67);
  PopTerm cur = with_factor_norms(space, term, opts);
  double cost = cur.cost();
  if (!std::isfinite(cost) || cost == 0.0) return cur;
  const int du = coeffs_level(cur.u), dv = coeffs_level(cur.v);
  Rng rng = make_rng(opts.seed, 71);
  double step = 0.3;
  const int iterations = std::max(8, opts.iterations / 4);
  for (int it = 0; it < iterations; ++it) {
    const int move = uniform_int(rng, 0, 3);
    const bool on_u = move < 2;
    const bool left = move % 2 == 0;
    const int lvl = on_u ? du : dv;
    const CMatrix g = random_near_identity(rng, lvl, step);
    const CMatrix id = CMatrix::Identity(on_u ? dv : du, on_u ? dv : du);
    const CMatrix kron = on_u ? diamond(g, id) : diamond(id, g);
    const int big = std::max({level(cur.a), du * dv, level(cur.b)});
    PopTerm next = cur;
    next.a = embed(cur.a, big);
    next.b = embed(cur.b, big);
    const CMatrix gb = gauge_block(kron, big);
    if (left) {
      Coeffs& side = on_u ? next.u : next.v;
      for (auto& c : side) c = g * c;
      next.a = next.a * gb.inverse();
    } else {
      Coeffs& side = on_u ? next.u : next.v;
      for (auto& c : side) c = c * g;
      next.b = gb.inverse() * next.b;
    }
    if (on_u) next.u_norm = upper_of(*space.first, next.u, nested_options(opts, 43));
    else next.v_norm = upper_of(*space.second, next.v, nested_options(opts, 47));
    const double c = next.cost();
    if (c < cost * (1.0 - 1e-12)) {
      cur = std::move(next);
      cost = c;
      step = std::min(1.0, step * 1.3);
    } else {
      step = std::max(1e-4, step * 0.85);
      if (step <= 1e-4) step = 0.3;
    }
  }
  (void)inner;
  return cur;
}

NormCertificate pop_upper(const PQSpace& space, const Coeffs& u_in, const EngineOptions& opts,
                          const std::vector<PopRepresentation>& hints) {
  check_pop(space, u_in);
  const Coeffs u = align_coeffs(u_in, coeffs_level(u_in));
  if (is_zero(u)) return zero_cert(opts);
  const int ne = space.first->dimension(), nf = space.second->dimension();
  const int d = coeffs_level(u);
  std::vector<Candidate> cands;

  const TensorDecomposition es = e_side_decomposition(space, u, opts);
  cands.push_back({"left_grouping", with_norms(space, e_side_terms(es, nf, d), opts)});
  const PQSpace swapped = *PQSpace::pop_tensor(space.second, space.first);
  const TensorDecomposition fs = e_side_decomposition(swapped, transpose_coeffs(u, ne, nf), opts);
  cands.push_back({"right_grouping", with_norms(space, swap_sides(e_side_terms(fs, ne, d)), opts)});

  const L1View x = l1_view(space.first), y = l1_view(space.second);
  if (x.genuine || y.genuine) {
    const PQSpace blocks = *PQSpace::pop_tensor(x.inner, y.inner);
    PopRepresentation rep;
    for (int s = 0; s < x.measure.size(); ++s)
      for (int t = 0; t < y.measure.size(); ++t) {
        const Coeffs blk = atom_block(u, x, y, s, t);
        if (is_zero(blk)) continue;
        const NormCertificate part =
            pop_upper(blocks, blk, nested_options(opts, 200 + static_cast<std::uint64_t>(s * y.measure.size() + t)));
        for (const auto& term : part.upper_witness.representation.terms) {
          PopTerm lifted = term;
          lifted.u = lift_to_atom(term.u, x, s);
          lifted.v = lift_to_atom(term.v, y, t);
          rep.terms.push_back(std::move(lifted));
        }
      }
    cands.push_back({"l1_regrouping", with_norms(space, rep, opts)});
  }
  cands.push_back({"singular_split", with_norms(space, singular_split(space, u), opts)});
  for (auto& rep : kronecker_candidates(space, u, false)) cands.push_back({"kronecker", with_norms(space, rep, opts)});
  for (const auto& h : hints) cands.push_back({"hint", with_norms(space, h, opts)});
  Candidate op = op_search(space, u, opts, hints);
  if (!op.rep.terms.empty()) cands.push_back({"single_diamond", op.rep});

  Candidate best = pick_best(space, u, std::move(cands));
  if (best.rep.terms.empty()) {
    NormCertificate c;
    c.method = "none";
    c.seed = opts.seed;
    c.heuristic = true;
    return c;
  }
  if (best.rep.terms.size() <= 4) {
    PopRepresentation refined;
    for (const auto& t : best.rep.terms) refined.terms.push_back(refine_term(space, t, opts));
    if (representation_error(refined, u) <= 1e-9 && refined.cost() < best.cost) {
      best.rep = std::move(refined);
      best.cost = best.rep.cost();
      best.name += "+refine";
    }
  }
  return upper_cert(best, opts);
}

NormCertificate pop_upper(const AmpElem& u, const EngineOptions& opts, const std::vector<PopRepresentation>& hints) {
  return pop_upper(*u.ambient(), u.coefficients(), opts, hints);
}

NormCertificate op_norm_upper(const PQSpace& space, const Coeffs& u_in, const EngineOptions& opts,
                              const std::vector<PopRepresentation>& hints) {
  check_pop(space, u_in);
  const Coeffs u = align_coeffs(u_in, coeffs_level(u_in));
  if (is_zero(u)) return zero_cert(opts);
  const Candidate best = op_search(space, u, opts, hints);
  if (best.rep.terms.empty()) {
    NormCertificate c;
    c.method = "none";
    c.seed = opts.seed;
    c.heuristic = true;
    return c;
  }
  return upper_cert(best, opts);
}

NormCertificate op_norm_upper(const AmpElem& u, const EngineOptions& opts, const std::vector<PopRepresentation>& hints) {
  return op_norm_upper(*u.ambient(), u.coefficients(), opts, hints);
}

namespace {

double pair_value(const PQSpace& space, const Coeffs& u, const CVector& f, const CVector& g, const EngineOptions& inner,
                  CMatrix* combined) {
  const int nf = space.second->dimension();
  CMatrix a = CMatrix::Zero(u[0].rows(), u[0].cols());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    for (Eigen::Index j = 0; j < g.size(); ++j)
      if (f(i) != Complex(0.0, 0.0) && g(j) != Complex(0.0, 0.0)) a += f(i) * g(j) * u[static_cast<std::size_t>(i * nf + j)];
  if (combined) *combined = a;
  const double den = underlying_dual_upper(f, *space.first, inner) * underlying_dual_upper(g, *space.second, inner);
  if (!(den > 0.0) || std::isinf(den)) return 0.0;
  return operator_norm(a) / den;
}

CMatrix pairing_matrix(const Coeffs& u, int ne, int nf, const CVector& xi, const CVector& eta) {
  CMatrix y(ne, nf);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < nf; ++j) y(i, j) = (xi.adjoint() * u[static_cast<std::size_t>(i * nf + j)] * eta)(0, 0);
  return y;
}

}  // namespace

NormCertificate pop_lower(const PQSpace& space, const Coeffs& u_in, const EngineOptions& opts) {
  check_pop(space, u_in);
  const Coeffs u = align_coeffs(u_in, coeffs_level(u_in));
  if (is_zero(u)) return zero_cert(opts);
  const int ne = space.first->dimension(), nf = space.second->dimension();
  const int d = coeffs_level(u);
  const EngineOptions inner = nested_options(opts, 41);
  NormCertificate c;
  c.seed = opts.seed;
  c.upper = kInf;
  c.upper_witness.kind = "none";
  c.method = "functional_pairs";
  c.lower_witness.kind = "functional_pair";
  c.lower_witness.vectors = {CVector::Zero(ne), CVector::Zero(nf)};

  std::vector<std::pair<CVector, CVector>> starts;
  {
    std::vector<std::size_t> order(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a].norm() > u[b].norm(); });
    for (std::size_t k = 0; k < std::min<std::size_t>(3, order.size()); ++k) {
      if (u[order[k]].norm() == 0.0) break;
      const SingularForm sf = singular_triples(u[order[k]]);
      starts.emplace_back(sf.left.col(0), sf.right.row(0).adjoint());
    }
    for (int r = 0; r < std::max(1, opts.budget); ++r) {
      Rng rng = make_rng(opts.seed, 73ULL + static_cast<std::uint64_t>(r));
      CVector xi = random_vector(rng, d), eta = random_vector(rng, d);
      starts.emplace_back(xi / xi.norm(), eta / eta.norm());
    }
  }
  for (auto [xi, eta] : starts) {
    CMatrix y = pairing_matrix(u, ne, nf, xi, eta);
    Eigen::Index jmax = 0;
    for (Eigen::Index j = 1; j < y.cols(); ++j)
      if (y.col(j).norm() > y.col(jmax).norm()) jmax = j;
    CVector f = underlying_saturate(y.col(jmax), *space.first, inner);
    double last = 0.0;
    for (int it = 0; it < 30; ++it) {
      const CVector yf = y.transpose() * f;
      if (yf.norm() == 0.0) break;
      const CVector g = underlying_saturate(yf, *space.second, inner);
      const CVector yg = y * g;
      if (yg.norm() == 0.0) break;
      f = underlying_saturate(yg, *space.first, inner);
      CMatrix a;
      const double v = pair_value(space, u, f, g, inner, &a);
      if (v > c.lower) {
        c.lower = v;
        c.lower_witness.vectors = {f, g};
        c.lower_witness.value = v;
      }
      if (it > 0 && v <= last * (1.0 + 1e-13)) break;
      last = v;
      if (a.norm() == 0.0) break;
      const SingularForm sf = singular_triples(a);
      y = pairing_matrix(u, ne, nf, sf.left.col(0), sf.right.row(0).adjoint());
    }
  }

  auto structural = [&](double v, const std::string& tag) {
    if (v > c.lower) {
      c.lower = v;
      c.lower_witness = {"structural", tag, {}, {}, v};
      c.method = tag;
    }
  };
  const PQSpace& e = *space.first;
  const PQSpace& f = *space.second;
  if (e.kind == QuantKind::schatten && convexity_exponent(f) >= e.p)
    structural(pq_bounds(*PQSpace::pr_tensor(e.base, space.second), u, inner).lower, "schatten_pr_identification");
  if (f.kind == QuantKind::schatten && convexity_exponent(e) >= f.p)
    structural(pq_bounds(*PQSpace::pr_tensor(f.base, space.first), transpose_coeffs(u, ne, nf), inner).lower,
               "schatten_pr_identification");
  if (e.kind == QuantKind::schatten && f.kind == QuantKind::schatten && e.p == f.p)
    structural(pq_bounds(*PQSpace::schatten(BaseSpace::tensor(e.base, f.base), e.p), u, inner).lower,
               "same_exponent_tensoring");
  const L1View x = l1_view(space.first), y = l1_view(space.second);
  if (x.genuine || y.genuine) {
    const PQSpace blocks = *PQSpace::pop_tensor(x.inner, y.inner);
    double total = 0.0;
    for (int s = 0; s < x.measure.size(); ++s)
      for (int t = 0; t < y.measure.size(); ++t) {
        const Coeffs blk = atom_block(u, x, y, s, t);
        if (is_zero(blk)) continue;
        total += x.measure.atom_weights[static_cast<std::size_t>(s)] * y.measure.atom_weights[static_cast<std::size_t>(t)] *
                 pop_lower(blocks, blk, nested_options(inner, 300 + static_cast<std::uint64_t>(s * y.measure.size() + t))).lower;
      }
    structural(total, "l1_regrouping");
  }
  return c;
}

NormCertificate pop_lower(const AmpElem& u, const EngineOptions& opts) {
  return pop_lower(*u.ambient(), u.coefficients(), opts);
}

SpacePtr l1_scalar_space(int n) {
  return PQSpace::lp(MeasureSpace(std::vector<double>(static_cast<std::size_t>(n), 1.0)), PQSpace::scalars(kInf), 1.0);
}

AmpElem vn_family(int n, const std::vector<CMatrix>& projections) {
  if (n < 1) throw DimensionError("vn_family: n must be positive");
  if (static_cast<int>(projections.size()) != n) throw DimensionError("vn_family: need n projections");
  const SpacePtr e = l1_scalar_space(n);
  const SpacePtr ambient = PQSpace::pop_tensor(e, e);
  int d = 1;
  for (const auto& p : projections) d = std::max(d, level(p));
  Coeffs u = zero_coeffs(n * n, d);
  for (int k = 0; k < n; ++k) u[static_cast<std::size_t>(k * n + k)] = embed(projections[static_cast<std::size_t>(k)], d);
  return AmpElem::from_coefficients(ambient, u);
}

AmpElem vn_family(int n) {
  std::vector<CMatrix> ps;
  for (int k = 0; k < n; ++k) {
    CMatrix p = CMatrix::Zero(n, n);
    p(k, k) = 1.0;
    ps.push_back(p);
  }
  return vn_family(n, ps);
}

AmpElem vn_part(int n, int first, int last) {
  if (first < 0 || last > n || first > last) throw DimensionError("vn_part: need 0 <= first <= last <= n");
  AmpElem full = vn_family(n);
  Coeffs u = full.coefficients();
  for (int k = 0; k < n; ++k)
    if (k < first || k >= last) u[static_cast<std::size_t>(k * n + k)].setZero();
  return AmpElem::from_coefficients(full.ambient(), u);
}

PopRepresentation vn_witness(int n, int first, int last) {
  if (first < 0 || last > n || first > last) throw DimensionError("vn_witness: need 0 <= first <= last <= n");
  PopTerm t;
  const int big = n * n;
  t.a = CMatrix::Zero(big, big);
  for (int k = first; k < last; ++k) t.a(k, k * n + k) = 1.0;
  t.b = t.a.transpose();
  t.u = zero_coeffs(n, n);
  for (int k = first; k < last; ++k) t.u[static_cast<std::size_t>(k)](k, k) = 1.0;
  t.v = t.u;
  const PQSpace space = *vn_family(n).ambient();
  return {{with_factor_norms(space, t)}};
}

PopRepresentation vn_witness(int n) { return vn_witness(n, 0, n); }

PopTerm random_vn_representation(int n, Rng& rng) {
  const int m = n + 1;
  const int big = m * m;
  PopTerm t;
  t.a = CMatrix::Zero(big, big);
  for (int k = 0; k < n; ++k) t.a(k, k * m + k) = 1.0;
  t.b = t.a.transpose();
  t.u = zero_coeffs(n, m);
  t.v = zero_coeffs(n, m);
  for (int k = 0; k < n; ++k) {
    t.u[static_cast<std::size_t>(k)](k, k) = 1.0;
    t.v[static_cast<std::size_t>(k)](k, k) = 1.0;
    t.u[static_cast<std::size_t>(k)](n, n) = gaussian_complex(rng);
    t.v[static_cast<std::size_t>(k)](n, n) = gaussian_complex(rng);
  }
  auto gauge = [&]() {
    const double spread = uniform(rng, 0.05, 1.5);
    CMatrix g = random_near_identity(rng, m, spread);
    if (uniform(rng) < 0.5) g = random_unitary(rng, m) * g;
    return g;
  };
  const CMatrix g1 = gauge(), h1 = gauge(), g2 = gauge(), h2 = gauge();
  for (auto& c : t.u) c = g1 * c * h1;
  for (auto& c : t.v) c = g2 * c * h2;
  t.a = t.a * diamond(g1, g2).inverse();
  t.b = diamond(h1, h2).inverse() * t.b;
  const PQSpace space = *vn_family(n).ambient();
  return with_factor_norms(space, t);
}

}  // namespace pqnorm
