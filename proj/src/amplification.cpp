#include "pqnorm/amplification.hpp"

#include <algorithm>

namespace pqnorm {

namespace {

void check_vec(const SpacePtr& ambient, const CVector& v) {
  if (!ambient) throw DimensionError("element has no ambient space");
  if (v.size() != ambient->dimension())
    throw DimensionError("vector length " + std::to_string(v.size()) + " does not match dimension " +
                         std::to_string(ambient->dimension()));
}

void check_coeff(const CMatrix& c) {
  if (c.rows() != c.cols() || c.rows() < 1) throw DimensionError("coefficient must be a non-empty square matrix");
}

}  // namespace

AmpElem::AmpElem(SpacePtr ambient) : ambient_(std::move(ambient)) {
  if (!ambient_) throw DimensionError("element has no ambient space");
}

AmpElem::AmpElem(SpacePtr ambient, std::vector<AmpTerm> terms)
    : ambient_(std::move(ambient)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    check_vec(ambient_, t.vec);
    check_coeff(t.coeff);
  }
}

AmpElem AmpElem::from_coefficients(SpacePtr ambient, const Coeffs& coeffs) {
  if (static_cast<int>(coeffs.size()) != ambient->dimension())
    throw DimensionError("coefficient count does not match dimension");
  const int n = ambient->dimension();
  std::vector<AmpTerm> terms;
  for (int i = 0; i < n; ++i) {
    if (coeffs[static_cast<std::size_t>(i)].norm() == 0.0) continue;
    terms.push_back({coeffs[static_cast<std::size_t>(i)], basis_vector(n, i)});
  }
  AmpElem out(std::move(ambient), std::move(terms));
  if (out.terms_.empty() && !coeffs.empty()) {
    // keep the level of an all-zero input
    out.terms_.push_back({CMatrix::Zero(coeffs_level(coeffs), coeffs_level(coeffs)), basis_vector(n, 0)});
  }
  return out;
}

AmpElem AmpElem::elementary(SpacePtr ambient, CMatrix a, CVector x) {
  std::vector<AmpTerm> terms{{std::move(a), std::move(x)}};
  return AmpElem(std::move(ambient), std::move(terms));
}

int AmpElem::level() const {
  int d = 1;
  for (const auto& t : terms_) d = std::max(d, pqnorm::level(t.coeff));
  return d;
}

Coeffs AmpElem::coefficients(int lvl) const {
  if (lvl < level()) throw DimensionError("coefficients: level below element level");
  const int n = dimension();
  Coeffs out = zero_coeffs(n, lvl);
  for (const auto& t : terms_) {
    const CMatrix c = embed(t.coeff, lvl);
    for (int i = 0; i < n; ++i) {
      const Complex w = t.vec(i);
      if (w != Complex(0.0, 0.0)) out[static_cast<std::size_t>(i)] += w * c;
    }
  }
  return out;
}

AmpElem AmpElem::compress(double tol) const {
  std::vector<AmpTerm> merged;
  for (const auto& t : terms_) {
    bool done = false;
    for (auto& m : merged) {
      if ((m.vec - t.vec).norm() == 0.0) {
        auto [x, y] = align(m.coeff, t.coeff);
        m.coeff = x + y;
        done = true;
        break;
      }
    }
    if (!done) merged.push_back(t);
  }
  std::vector<AmpTerm> kept;
  for (auto& m : merged)
    if (m.coeff.norm() * m.vec.norm() > tol) kept.push_back(std::move(m));
  return AmpElem(ambient_, std::move(kept));
}

AmpElem AmpElem::embedded(int new_level) const {
  if (new_level < level()) throw DimensionError("embedded: level below element level");
  std::vector<AmpTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({embed(t.coeff, new_level), t.vec});
  if (out.empty()) out.push_back({CMatrix::Zero(new_level, new_level), basis_vector(dimension(), 0)});
  return AmpElem(ambient_, std::move(out));
}

AmpElem AmpElem::with_ambient(SpacePtr ambient) const {
  return AmpElem(std::move(ambient), terms_);
}

bool AmpElem::is_zero(double tol) const {
  for (const auto& c : coefficients())
    if (c.norm() > tol) return false;
  return true;
}

AmpElem AmpElem::operator+(const AmpElem& other) const {
  if (dimension() != other.dimension()) throw DimensionError("sum of elements of different dimension");
  std::vector<AmpTerm> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return AmpElem(ambient_, std::move(terms));
}

AmpElem AmpElem::operator-(const AmpElem& other) const { return *this + other * Complex(-1.0, 0.0); }

AmpElem AmpElem::operator*(Complex s) const {
  std::vector<AmpTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= s;
  return AmpElem(ambient_, std::move(terms));
}

Coeffs zero_coeffs(int dim, int lvl) {
  return Coeffs(static_cast<std::size_t>(dim), CMatrix::Zero(lvl, lvl));
}

int coeffs_level(const Coeffs& u) {
  int d = 1;
  for (const auto& c : u) d = std::max(d, level(c));
  return d;
}

Coeffs align_coeffs(const Coeffs& u, int lvl) {
  Coeffs out;
  out.reserve(u.size());
  for (const auto& c : u) out.push_back(embed(c, lvl));
  return out;
}

double coeffs_distance(const Coeffs& a, const Coeffs& b) {
  if (a.size() != b.size()) throw DimensionError("coeffs_distance: dimension mismatch");
  const int d = std::max(coeffs_level(a), coeffs_level(b));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, (embed(a[i], d) - embed(b[i], d)).cwiseAbs().maxCoeff());
  return worst;
}

CVector basis_vector(int dim, int i) {
  CVector e = CVector::Zero(dim);
  e(i) = 1.0;
  return e;
}

CVector tensor_vectors(const CVector& x, const CVector& y) {
  CVector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return out;
}

AmpElem module_action(const CMatrix& a, const AmpElem& u, const CMatrix& b) {
  std::vector<AmpTerm> terms;
  terms.reserve(u.terms().size());
  for (const auto& t : u.terms()) {
    const int d = std::max({level(a), level(b), level(t.coeff)});
    terms.push_back({embed(a, d) * embed(t.coeff, d) * embed(b, d), t.vec});
  }
  return AmpElem(u.ambient(), std::move(terms));
}

Coeffs module_action(const CMatrix& a, const Coeffs& u, const CMatrix& b) {
  const int d = std::max({level(a), level(b), coeffs_level(u)});
  const CMatrix aa = embed(a, d), bb = embed(b, d);
  Coeffs out;
  out.reserve(u.size());
  for (const auto& c : u) out.push_back(aa * embed(c, d) * bb);
  return out;
}

AmpElem amp_diamond(const AmpElem& u, const AmpElem& v, SpacePtr ambient) {
  if (!ambient) throw DimensionError("amp_diamond: missing ambient");
  if (ambient->dimension() != u.dimension() * v.dimension())
    throw DimensionError("amp_diamond: ambient dimension is not the product of factor dimensions");
  std::vector<AmpTerm> terms;
  terms.reserve(u.terms().size() * v.terms().size());
  for (const auto& s : u.terms())
    for (const auto& t : v.terms()) terms.push_back({diamond(s.coeff, t.coeff), tensor_vectors(s.vec, t.vec)});
  if (terms.empty()) return AmpElem(std::move(ambient));
  return AmpElem(std::move(ambient), std::move(terms));
}

Coeffs amp_diamond(const Coeffs& u, const Coeffs& v) {
  Coeffs out;
  out.reserve(u.size() * v.size());
  for (const auto& a : u)
    for (const auto& b : v) out.push_back(diamond(a, b));
  return out;
}

AmpElem scalar_diamond(const CMatrix& a, const AmpElem& u, Side side) {
  std::vector<AmpTerm> terms;
  terms.reserve(u.terms().size());
  for (const auto& t : u.terms())
    terms.push_back({side == Side::left ? diamond(a, t.coeff) : diamond(t.coeff, a), t.vec});
  return AmpElem(u.ambient(), std::move(terms));
}

OperatorDesc OperatorDesc::identity(SpacePtr space) {
  const int n = space->dimension();
  return {space, space, CMatrix::Identity(n, n), "identity"};
}

OperatorDesc OperatorDesc::functional(SpacePtr space, const CVector& f, SpacePtr codomain) {
  if (f.size() != space->dimension()) throw DimensionError("functional: length mismatch");
  if (codomain->dimension() != 1) throw DimensionError("functional: codomain must be one-dimensional");
  return {std::move(space), std::move(codomain), f.transpose(), "functional"};
}

OperatorDesc OperatorDesc::zero(SpacePtr domain, SpacePtr codomain) {
  const int m = codomain->dimension(), n = domain->dimension();
  return {std::move(domain), std::move(codomain), CMatrix::Zero(m, n), "zero"};
}

BilinearDesc BilinearDesc::canonical(SpacePtr left, SpacePtr right, SpacePtr codomain) {
  const int m = left->dimension(), n = right->dimension();
  if (codomain->dimension() != m * n) throw DimensionError("canonical: codomain is not the tensor product");
  std::vector<CMatrix> comps;
  comps.reserve(static_cast<std::size_t>(m * n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      CMatrix c = CMatrix::Zero(m, n);
      c(i, j) = 1.0;
      comps.push_back(c);
    }
  return {std::move(left), std::move(right), std::move(codomain), std::move(comps), "canonical"};
}

BilinearDesc BilinearDesc::functional_product(SpacePtr left, const CVector& f, SpacePtr right,
                                              const CVector& g) {
  if (f.size() != left->dimension() || g.size() != right->dimension())
    throw DimensionError("functional_product: length mismatch");
  std::vector<CMatrix> comps{f * g.transpose()};
  return {std::move(left), std::move(right), PQSpace::scalars(kInf), std::move(comps), "f x g"};
}

AmpElem amplify_operator(const OperatorDesc& phi, const AmpElem& u) {
  if (u.dimension() != phi.matrix.cols()) throw DimensionError("amplify_operator: domain mismatch");
  std::vector<AmpTerm> terms;
  terms.reserve(u.terms().size());
  for (const auto& t : u.terms()) terms.push_back({t.coeff, phi.matrix * t.vec});
  if (terms.empty()) return AmpElem(phi.codomain);
  return AmpElem(phi.codomain, std::move(terms));
}

Coeffs amplify_operator(const CMatrix& phi, const Coeffs& u) {
  if (static_cast<Eigen::Index>(u.size()) != phi.cols()) throw DimensionError("amplify_operator: domain mismatch");
  const int d = coeffs_level(u);
  Coeffs out = zero_coeffs(static_cast<int>(phi.rows()), d);
  for (Eigen::Index i = 0; i < phi.cols(); ++i) {
    const CMatrix c = embed(u[static_cast<std::size_t>(i)], d);
    for (Eigen::Index k = 0; k < phi.rows(); ++k)
      if (phi(k, i) != Complex(0.0, 0.0)) out[static_cast<std::size_t>(k)] += phi(k, i) * c;
  }
  return out;
}

AmpElem amplify_bioperator(const BilinearDesc& rho, const AmpElem& u, const AmpElem& v) {
  if (u.dimension() != rho.left->dimension() || v.dimension() != rho.right->dimension())
    throw DimensionError("amplify_bioperator: domain mismatch");
  const int m = rho.codomain->dimension();
  std::vector<AmpTerm> terms;
  for (const auto& s : u.terms())
    for (const auto& t : v.terms()) {
      CVector z(m);
      for (int k = 0; k < m; ++k) z(k) = (s.vec.transpose() * rho.components[static_cast<std::size_t>(k)] * t.vec)(0, 0);
      terms.push_back({diamond(s.coeff, t.coeff), z});
    }
  if (terms.empty()) return AmpElem(rho.codomain);
  return AmpElem(rho.codomain, std::move(terms));
}

Coeffs amplify_bioperator(const std::vector<CMatrix>& components, const Coeffs& u, const Coeffs& v) {
  const Coeffs uv = amp_diamond(u, v);
  const int d = coeffs_level(uv);
  const std::size_t nf = v.size();
  Coeffs out = zero_coeffs(static_cast<int>(components.size()), d);
  for (std::size_t k = 0; k < components.size(); ++k) {
    const CMatrix& c = components[k];
    if (static_cast<std::size_t>(c.rows()) != u.size() || static_cast<std::size_t>(c.cols()) != nf)
      throw DimensionError("amplify_bioperator: component shape mismatch");
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < nf; ++j)
        if (c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != Complex(0.0, 0.0))
          out[k] += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * uv[i * nf + j];
  }
  return out;
}

OperatorDesc linearize(const BilinearDesc& rho) {
  const int m = rho.left->dimension(), n = rho.right->dimension();
  const int g = static_cast<int>(rho.components.size());
  CMatrix a(g, m * n);
  for (int k = 0; k < g; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(k, i * n + j) = rho.components[static_cast<std::size_t>(k)](i, j);
  return {PQSpace::pop_tensor(rho.left, rho.right), rho.codomain, a, "linearize(" + rho.label + ")"};
}

OperatorDesc curry(const BilinearDesc& rho) {
  const int m = rho.left->dimension(), n = rho.right->dimension();
  const int g = static_cast<int>(rho.components.size());
  CMatrix a(g * m, n);
  for (int k = 0; k < g; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(k * m + i, j) = rho.components[static_cast<std::size_t>(k)](i, j);
  return {rho.right, PQSpace::cb_space(rho.left, rho.codomain), a, "curry(" + rho.label + ")"};
}

BilinearDesc uncurry(const OperatorDesc& s) {
  if (!s.codomain || s.codomain->kind != QuantKind::cb_space)
    throw DimensionError("uncurry: codomain must be a CB space");
  const SpacePtr& left = s.codomain->first;
  const SpacePtr& target = s.codomain->second;
  const int m = left->dimension(), n = s.domain->dimension(), g = target->dimension();
  if (s.matrix.rows() != g * m || s.matrix.cols() != n) throw DimensionError("uncurry: shape mismatch");
  std::vector<CMatrix> comps(static_cast<std::size_t>(g), CMatrix::Zero(m, n));
  for (int k = 0; k < g; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) comps[static_cast<std::size_t>(k)](i, j) = s.matrix(k * m + i, j);
  return {left, s.domain, target, std::move(comps), "uncurry(" + s.label + ")"};
}

AmpElem evaluation(const AmpElem& u, const AmpElem& phi) {
  const SpacePtr& cb = phi.ambient();
  if (cb->kind != QuantKind::cb_space) throw DimensionError("evaluation: second argument must live in a CB space");
  if (cb->first->dimension() != u.dimension())
    throw DimensionError("evaluation: domain mismatch");
  const int m = cb->first->dimension(), g = cb->second->dimension();
  std::vector<AmpTerm> terms;
  for (const auto& s : u.terms())
    for (const auto& t : phi.terms()) {
      CVector z = CVector::Zero(g);
      for (int k = 0; k < g; ++k)
        for (int i = 0; i < m; ++i) z(k) += t.vec(k * m + i) * s.vec(i);
      terms.push_back({diamond(s.coeff, t.coeff), z});
    }
  if (terms.empty()) return AmpElem(cb->second);
  return AmpElem(cb->second, std::move(terms));
}

Coeffs evaluation(const Coeffs& u, const Coeffs& phi, int dim_e, int dim_g) {
  if (static_cast<int>(u.size()) != dim_e || static_cast<int>(phi.size()) != dim_e * dim_g)
    throw DimensionError("evaluation: shape mismatch");
  const int d = coeffs_level(u) * coeffs_level(phi);
  Coeffs out = zero_coeffs(dim_g, d);
  for (int k = 0; k < dim_g; ++k)
    for (int i = 0; i < dim_e; ++i) {
      const CMatrix& b = phi[static_cast<std::size_t>(k * dim_e + i)];
      if (b.norm() == 0.0) continue;
      out[static_cast<std::size_t>(k)] += diamond(u[static_cast<std::size_t>(i)], b);
    }
  return out;
}

CMatrix support_projection(const Coeffs& u) {
  const int d = coeffs_level(u);
  CMatrix stacked(d, 2 * d * static_cast<int>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const CMatrix c = embed(u[i], d);
    stacked.middleCols(static_cast<Eigen::Index>(2 * i) * d, d) = c;
    stacked.middleCols(static_cast<Eigen::Index>(2 * i + 1) * d, d) = c.adjoint();
  }
  return range_projection(stacked, 1e-10);
}

CMatrix support_projection(const AmpElem& u) { return support_projection(u.coefficients()); }

}  // namespace pqnorm
