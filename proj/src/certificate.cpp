#include "pqnorm/certificate.hpp"

#include <algorithm>

namespace pqnorm {

double PopTerm::cost() const { return operator_norm(a) * u_norm * v_norm * operator_norm(b); }

Coeffs PopTerm::reconstruct() const {
  const Coeffs uv = amp_diamond(u, v);
  const int d = std::max({level(a), coeffs_level(uv), level(b)});
  const CMatrix aa = embed(a, d), bb = embed(b, d);
  Coeffs out;
  out.reserve(uv.size());
  for (const auto& c : uv) out.push_back(aa * embed(c, d) * bb);
  return out;
}

double PopRepresentation::cost() const {
  double total = 0.0;
  for (const auto& t : terms) total += t.cost();
  return total;
}

Coeffs PopRepresentation::reconstruct(int dim) const {
  Coeffs total = zero_coeffs(dim, 1);
  for (const auto& t : terms) {
    const Coeffs c = t.reconstruct();
    if (static_cast<int>(c.size()) != dim) throw DimensionError("representation term has wrong dimension");
    const int d = std::max(coeffs_level(total), coeffs_level(c));
    total = align_coeffs(total, d);
    for (std::size_t i = 0; i < c.size(); ++i) total[i] += embed(c[i], d);
  }
  return total;
}

}  // namespace pqnorm
