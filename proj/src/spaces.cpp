#include "pqnorm/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pqnorm {

namespace {

std::string exponent_str(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

void check_exponent(double p) {
  if (!(p >= 1.0)) throw DimensionError("exponent must be in [1, inf]");
}

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw DimensionError("weights must be non-empty");
  for (double x : w)
    if (!(x > 0.0) || std::isinf(x)) throw DimensionError("weights must be positive and finite");
}

}  // namespace

int BaseSpace::dimension() const {
  switch (kind) {
    case BaseKind::lp: return n;
    case BaseKind::weighted_l1: return static_cast<int>(weights.size());
    case BaseKind::lp_sum: return static_cast<int>(weights.size()) * left->dimension();
    case BaseKind::tensor: return left->dimension() * right->dimension();
    case BaseKind::dual: return left->dimension();
  }
  return 0;
}

std::string BaseSpace::describe() const {
  std::ostringstream os;
  switch (kind) {
    case BaseKind::lp: os << "l" << exponent_str(p) << "^" << n; break;
    case BaseKind::weighted_l1: os << "weighted_l1(" << weights.size() << ")"; break;
    case BaseKind::lp_sum:
      os << "l" << exponent_str(p) << "_sum(" << weights.size() << ", " << left->describe() << ")";
      break;
    case BaseKind::tensor: os << "(" << left->describe() << " (x)pr " << right->describe() << ")"; break;
    case BaseKind::dual: os << left->describe() << "*"; break;
  }
  return os.str();
}

BasePtr BaseSpace::lp(int n, double p) {
  if (n < 1) throw DimensionError("lp: dimension must be positive");
  check_exponent(p);
  auto s = std::make_shared<BaseSpace>();
  s->kind = BaseKind::lp;
  s->n = n;
  s->p = p;
  return s;
}

BasePtr BaseSpace::weighted_l1(std::vector<double> weights) {
  check_weights(weights);
  auto s = std::make_shared<BaseSpace>();
  s->kind = BaseKind::weighted_l1;
  s->weights = std::move(weights);
  s->p = 1.0;
  return s;
}

BasePtr BaseSpace::lp_sum(std::vector<double> weights, BasePtr inner, double p) {
  check_weights(weights);
  check_exponent(p);
  if (!inner) throw DimensionError("lp_sum: missing inner space");
  auto s = std::make_shared<BaseSpace>();
  s->kind = BaseKind::lp_sum;
  s->weights = std::move(weights);
  s->left = std::move(inner);
  s->p = p;
  return s;
}

BasePtr BaseSpace::tensor(BasePtr e, BasePtr f) {
  if (!e || !f) throw DimensionError("tensor: missing factor");
  auto s = std::make_shared<BaseSpace>();
  s->kind = BaseKind::tensor;
  s->left = std::move(e);
  s->right = std::move(f);
  return s;
}

BasePtr BaseSpace::dual(BasePtr e) {
  if (!e) throw DimensionError("dual: missing space");
  auto s = std::make_shared<BaseSpace>();
  s->kind = BaseKind::dual;
  s->left = std::move(e);
  return s;
}

MeasureSpace::MeasureSpace(std::vector<double> w) : atom_weights(std::move(w)) {
  check_weights(atom_weights);
}

MeasureSpace MeasureSpace::product(const MeasureSpace& other) const {
  std::vector<double> w;
  w.reserve(atom_weights.size() * other.atom_weights.size());
  for (double a : atom_weights)
    for (double b : other.atom_weights) w.push_back(a * b);
  return MeasureSpace(std::move(w));
}

std::string PQSpace::describe() const {
  std::ostringstream os;
  switch (kind) {
    case QuantKind::schatten:
      if (p == 1.0) os << base->describe() << "_max";
      else os << "^(" << exponent_str(p) << ")" << base->describe();
      break;
    case QuantKind::min: os << base->describe() << "_min"; break;
    case QuantKind::lp:
      os << "L" << exponent_str(p) << "(" << measure.size() << " atoms, " << first->describe() << ")";
      break;
    case QuantKind::pr_tensor: os << "(" << pr_left->describe() << " (x)pr " << first->describe() << ")"; break;
    case QuantKind::pop_tensor: os << "(" << first->describe() << " (x)pop " << second->describe() << ")"; break;
    case QuantKind::cb_space: os << "CB(" << first->describe() << ", " << second->describe() << ")"; break;
  }
  return os.str();
}

SpacePtr PQSpace::schatten(BasePtr e, double p) {
  if (!e) throw DimensionError("schatten: missing base");
  check_exponent(p);
  auto s = std::make_shared<PQSpace>();
  s->kind = QuantKind::schatten;
  s->base = std::move(e);
  s->p = p;
  return s;
}

SpacePtr PQSpace::min(BasePtr e) {
  if (!e) throw DimensionError("min: missing base");
  auto s = std::make_shared<PQSpace>();
  s->kind = QuantKind::min;
  s->base = std::move(e);
  s->p = kInf;
  return s;
}

SpacePtr PQSpace::lp(MeasureSpace x, SpacePtr inner, double p) {
  if (!inner) throw DimensionError("Lp: missing inner space");
  check_exponent(p);
  if (x.size() == 0) throw DimensionError("Lp: measure has no atoms");
  auto s = std::make_shared<PQSpace>();
  s->kind = QuantKind::lp;
  s->base = BaseSpace::lp_sum(x.atom_weights, inner->base, p);
  s->measure = std::move(x);
  s->first = std::move(inner);
  s->p = p;
  return s;
}

SpacePtr PQSpace::pr_tensor(BasePtr e, SpacePtr f) {
  if (!e || !f) throw DimensionError("pr_tensor: missing factor");
  auto s = std::make_shared<PQSpace>();
  s->kind = QuantKind::pr_tensor;
  s->base = BaseSpace::tensor(e, f->base);
  s->pr_left = std::move(e);
  s->first = std::move(f);
  return s;
}

SpacePtr PQSpace::pop_tensor(SpacePtr e, SpacePtr f) {
  if (!e || !f) throw DimensionError("pop_tensor: missing factor");
  auto s = std::make_shared<PQSpace>();
  s->kind = QuantKind::pop_tensor;
  s->base = BaseSpace::tensor(e->base, f->base);
  s->first = std::move(e);
  s->second = std::move(f);
  return s;
}

SpacePtr PQSpace::cb_space(SpacePtr e, SpacePtr g) {
  if (!e || !g) throw DimensionError("cb_space: missing space");
  auto s = std::make_shared<PQSpace>();
  s->kind = QuantKind::cb_space;
  // dimension bookkeeping only; the underlying norm is the cb-norm
  s->base = BaseSpace::tensor(g->base, BaseSpace::dual(e->base));
  s->first = std::move(e);
  s->second = std::move(g);
  return s;
}

std::optional<std::vector<double>> l1_weights(const BaseSpace& e) {
  switch (e.kind) {
    case BaseKind::lp:
      if (e.p == 1.0 || e.n == 1) return std::vector<double>(static_cast<std::size_t>(e.n), 1.0);
      return std::nullopt;
    case BaseKind::weighted_l1: return e.weights;
    case BaseKind::lp_sum: {
      if (e.p != 1.0 && e.weights.size() != 1) return std::nullopt;
      auto inner = l1_weights(*e.left);
      if (!inner) return std::nullopt;
      std::vector<double> w;
      for (double mu : e.weights) {
        // a single atom carries mu^(1/p)
        const double scale = e.p == 1.0 ? mu : (std::isinf(e.p) ? 1.0 : std::pow(mu, 1.0 / e.p));
        for (double v : *inner) w.push_back(scale * v);
      }
      return w;
    }
    case BaseKind::tensor: {
      auto a = l1_weights(*e.left);
      auto b = l1_weights(*e.right);
      if (!a || !b) return std::nullopt;
      std::vector<double> w;
      for (double x : *a)
        for (double y : *b) w.push_back(x * y);
      return w;
    }
    case BaseKind::dual: {
      // dual of a one-dimensional space
      if (e.dimension() != 1) return std::nullopt;
      auto inner = l1_weights(*e.left);
      if (!inner) return std::nullopt;
      return std::vector<double>{1.0 / (*inner)[0]};
    }
  }
  return std::nullopt;
}

bool is_absolute(const BaseSpace& e) {
  switch (e.kind) {
    case BaseKind::lp:
    case BaseKind::weighted_l1: return true;
    case BaseKind::lp_sum: return is_absolute(*e.left);
    case BaseKind::tensor: return l1_weights(e).has_value();
    case BaseKind::dual: return e.left->kind != BaseKind::tensor && is_absolute(*e.left);
  }
  return false;
}

bool is_scalar_line(const PQSpace& e) {
  return e.kind == QuantKind::schatten && e.dimension() == 1;
}

double convexity_exponent(const PQSpace& e) {
  switch (e.kind) {
    case QuantKind::schatten:
      // ^(p)C is an L^p space; for larger bases only 1-convexity is generic
      return e.dimension() == 1 ? e.p : 1.0;
    case QuantKind::min: return kInf;
    case QuantKind::lp: return std::min(e.p, convexity_exponent(*e.first));
    default: return 1.0;
  }
}

bool same_space(const BaseSpace& a, const BaseSpace& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BaseKind::lp: return a.n == b.n && a.p == b.p;
    case BaseKind::weighted_l1: return a.weights == b.weights;
    case BaseKind::lp_sum: return a.p == b.p && a.weights == b.weights && same_space(*a.left, *b.left);
    case BaseKind::tensor: return same_space(*a.left, *b.left) && same_space(*a.right, *b.right);
    case BaseKind::dual: return same_space(*a.left, *b.left);
  }
  return false;
}

bool same_space(const PQSpace& a, const PQSpace& b) {
  if (a.kind != b.kind || !same_space(*a.base, *b.base)) return false;
  switch (a.kind) {
    case QuantKind::schatten: return a.p == b.p;
    case QuantKind::min: return true;
    case QuantKind::lp:
      return a.p == b.p && a.measure.atom_weights == b.measure.atom_weights && same_space(*a.first, *b.first);
    case QuantKind::pr_tensor: return same_space(*a.pr_left, *b.pr_left) && same_space(*a.first, *b.first);
    case QuantKind::pop_tensor:
    case QuantKind::cb_space: return same_space(*a.first, *b.first) && same_space(*a.second, *b.second);
  }
  return false;
}

}  // namespace pqnorm
