#pragma once

// Elements of the amplification K(x)E and the maps acting on them.
//
// An element is a list of terms c_k (x) x_k. Its dense form is one coefficient
// matrix per base coordinate, U_i = sum_k x_k[i] c_k, at the common level.

#include "pqnorm/matrix.hpp"
#include "pqnorm/spaces.hpp"

#include <string>
#include <vector>

namespace pqnorm {

/// One coefficient matrix per base coordinate, all at one level.
using Coeffs = std::vector<CMatrix>;

struct AmpTerm {
  CMatrix coeff;
  CVector vec;
};

class AmpElem {
 public:
  AmpElem() = default;
  explicit AmpElem(SpacePtr ambient);
  AmpElem(SpacePtr ambient, std::vector<AmpTerm> terms);

  static AmpElem from_coefficients(SpacePtr ambient, const Coeffs& coeffs);
  static AmpElem elementary(SpacePtr ambient, CMatrix a, CVector x);

  const SpacePtr& ambient() const { return ambient_; }
  const std::vector<AmpTerm>& terms() const { return terms_; }
  int dimension() const { return ambient_->dimension(); }

  /// Largest coefficient level; 1 for the empty element.
  int level() const;
  Coeffs coefficients() const { return coefficients(level()); }
  Coeffs coefficients(int level) const;

  /// Merges terms with equal vectors and drops coefficients with Frobenius
  /// norm below tol.
  AmpElem compress(double tol = 1e-14) const;
  AmpElem embedded(int new_level) const;
  AmpElem with_ambient(SpacePtr ambient) const;
  bool is_zero(double tol = 1e-14) const;

  AmpElem operator+(const AmpElem& other) const;
  AmpElem operator-(const AmpElem& other) const;
  AmpElem operator*(Complex s) const;

 private:
  SpacePtr ambient_;
  std::vector<AmpTerm> terms_;
};

/// Dense coefficients -> element with terms (U_i, e_i).
Coeffs zero_coeffs(int dim, int level);
int coeffs_level(const Coeffs& u);
Coeffs align_coeffs(const Coeffs& u, int level);
double coeffs_distance(const Coeffs& a, const Coeffs& b);
CVector basis_vector(int dim, int i);
/// Kronecker product of vectors, index i * y.size() + j.
CVector tensor_vectors(const CVector& x, const CVector& y);

/// a . u . b, term-wise.
AmpElem module_action(const CMatrix& a, const AmpElem& u, const CMatrix& b);
Coeffs module_action(const CMatrix& a, const Coeffs& u, const CMatrix& b);

/// u <> v in the tensor ambient (pr_tensor or pop_tensor over E and F).
AmpElem amp_diamond(const AmpElem& u, const AmpElem& v, SpacePtr ambient);
Coeffs amp_diamond(const Coeffs& u, const Coeffs& v);

enum class Side { left, right };
/// a <> u (left) or u <> a (right).
AmpElem scalar_diamond(const CMatrix& a, const AmpElem& u, Side side);

/// Linear map between PQ-spaces given by its matrix over the base coordinates
/// (codomain dim x domain dim).
struct OperatorDesc {
  SpacePtr domain;
  SpacePtr codomain;
  CMatrix matrix;
  std::string label;

  static OperatorDesc identity(SpacePtr space);
  /// f as a map into a one-dimensional codomain.
  static OperatorDesc functional(SpacePtr space, const CVector& f, SpacePtr codomain);
  static OperatorDesc zero(SpacePtr domain, SpacePtr codomain);
};

/// rho(x, y)_k = x^T C_k y.
struct BilinearDesc {
  SpacePtr left;
  SpacePtr right;
  SpacePtr codomain;
  std::vector<CMatrix> components;
  std::string label;

  /// (x, y) -> x (x) y into a tensor codomain over left and right.
  static BilinearDesc canonical(SpacePtr left, SpacePtr right, SpacePtr codomain);
  /// (x, y) -> f(x) g(y) into ^(inf)C.
  static BilinearDesc functional_product(SpacePtr left, const CVector& f, SpacePtr right,
                                         const CVector& g);
};

AmpElem amplify_operator(const OperatorDesc& phi, const AmpElem& u);
Coeffs amplify_operator(const CMatrix& phi, const Coeffs& u);
AmpElem amplify_bioperator(const BilinearDesc& rho, const AmpElem& u, const AmpElem& v);
Coeffs amplify_bioperator(const std::vector<CMatrix>& components, const Coeffs& u, const Coeffs& v);

/// R on left (x)pop right with R(x (x) y) = rho(x, y).
OperatorDesc linearize(const BilinearDesc& rho);
/// y -> (x -> rho(x, y)), as a map right -> CB(left, codomain).
OperatorDesc curry(const BilinearDesc& rho);
BilinearDesc uncurry(const OperatorDesc& s);

/// E_inf(u, Phi) for Phi in K CB(E, G): (a x, b phi) -> (a <> b) phi(x).
AmpElem evaluation(const AmpElem& u, const AmpElem& phi);
Coeffs evaluation(const Coeffs& u, const Coeffs& phi, int dim_e, int dim_g);

/// Smallest orthogonal projection P with P . u . P = u.
CMatrix support_projection(const AmpElem& u);
CMatrix support_projection(const Coeffs& u);

}  // namespace pqnorm
