#include "isscert/kfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace isscert {

const char* to_string(FunClass c) {
  switch (c) {
    case FunClass::PD: return "PD";
    case FunClass::K: return "K";
    case FunClass::KInf: return "Kinf";
  }
  return "?";
}

struct KFun::Node {
  Kind kind;
  FunClass cls;
  std::vector<double> p;
  std::vector<KFun> kids;
};

namespace {

double bisect_inverse(const KFun& f, double y) {
  if (y == 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, y);
  while (f(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) {
      throw RangeError("inverse: value " + std::to_string(y) + " is above the range of " +
                       f.describe());
    }
  }
  // Bisect to adjacent doubles, which is at least as tight as 1e-12 absolute.
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw DomainError(std::string(what) + " must be finite and positive");
  }
}

}  // namespace

KFun KFun::linear(double a) {
  require_positive(a, "linear: slope");
  return KFun(std::make_shared<Node>(Node{Kind::Linear, FunClass::KInf, {a}, {}}));
}

KFun KFun::power(double a, double p) {
  require_positive(a, "power: coefficient");
  require_positive(p, "power: exponent");
  return KFun(std::make_shared<Node>(Node{Kind::Power, FunClass::KInf, {a, p}, {}}));
}

KFun KFun::saturation(double a) {
  require_positive(a, "saturation: coefficient");
  return KFun(std::make_shared<Node>(Node{Kind::Saturation, FunClass::K, {a}, {}}));
}

KFun KFun::log1p(double a) {
  require_positive(a, "log1p: coefficient");
  return KFun(std::make_shared<Node>(Node{Kind::Log1p, FunClass::KInf, {a}, {}}));
}

KFun KFun::affine_cap(double slope, double knot, double tail) {
  require_positive(slope, "affine_cap: slope");
  require_positive(knot, "affine_cap: knot");
  if (!std::isfinite(tail) || tail < 0.0) throw DomainError("affine_cap: tail must be >= 0");
  const FunClass c = tail > 0.0 ? FunClass::KInf : FunClass::PD;
  return KFun(std::make_shared<Node>(Node{Kind::AffineCap, c, {slope, knot, tail}, {}}));
}

KFun::Kind KFun::kind() const { return node_->kind; }
FunClass KFun::fun_class() const { return node_->cls; }
const std::vector<double>& KFun::params() const { return node_->p; }
const std::vector<KFun>& KFun::children() const { return node_->kids; }

std::optional<double> KFun::linear_slope() const {
  if (node_->kind == Kind::Linear) return node_->p[0];
  return std::nullopt;
}

double KFun::operator()(double r) const {
  require_level(r, "KFun evaluation");
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Linear: return n.p[0] * r;
    case Kind::Power: return n.p[0] * std::pow(r, n.p[1]);
    case Kind::Saturation: return n.p[0] * r / (1.0 + r);
    case Kind::Log1p: return n.p[0] * std::log1p(r);
    case Kind::AffineCap:
      return n.p[0] * std::min(r, n.p[1]) + n.p[2] * std::max(r - n.p[1], 0.0);
    case Kind::Compose: return n.kids[0](n.kids[1](r));
    case Kind::Max: {
      double v = 0.0;
      for (const auto& k : n.kids) v = std::max(v, k(r));
      return v;
    }
    case Kind::Min: {
      double v = std::numeric_limits<double>::infinity();
      for (const auto& k : n.kids) v = std::min(v, k(r));
      return v;
    }
    case Kind::Sum: {
      double v = 0.0;
      for (const auto& k : n.kids) v += k(r);
      return v;
    }
    case Kind::GeoMean: return std::sqrt(n.kids[0](r) * n.kids[1](r));
    case Kind::Inverse: {
      const KFun& f = n.kids[0];
      if (f.kind() == Kind::Linear) return r / f.params()[0];
      if (f.kind() == Kind::Power) return std::pow(r / f.params()[0], 1.0 / f.params()[1]);
      return bisect_inverse(f, r);
    }
  }
  return 0.0;
}

std::string KFun::describe() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(17);
  auto list = [&](const char* name) {
    os << name << "(";
    for (size_t i = 0; i < n.kids.size(); ++i) os << (i ? ", " : "") << n.kids[i].describe();
    os << ")";
  };
  switch (n.kind) {
    case Kind::Linear: os << "linear(" << n.p[0] << ")"; break;
    case Kind::Power: os << "power(" << n.p[0] << ", " << n.p[1] << ")"; break;
    case Kind::Saturation: os << "saturation(" << n.p[0] << ")"; break;
    case Kind::Log1p: os << "log1p(" << n.p[0] << ")"; break;
    case Kind::AffineCap:
      os << "affine_cap(" << n.p[0] << ", " << n.p[1] << ", " << n.p[2] << ")";
      break;
    case Kind::Compose: list("compose"); break;
    case Kind::Max: list("max"); break;
    case Kind::Min: list("min"); break;
    case Kind::Sum: list("sum"); break;
    case Kind::GeoMean: list("geomean"); break;
    case Kind::Inverse: list("inverse"); break;
  }
  return os.str();
}

KFun compose(const KFun& outer, const KFun& inner) {
  FunClass c;
  if (outer.fun_class() == FunClass::PD || inner.fun_class() == FunClass::PD) {
    c = FunClass::PD;
  } else if (outer.is_kinf() && inner.is_kinf()) {
    c = FunClass::KInf;
  } else {
    c = FunClass::K;
  }
  return KFun(std::make_shared<KFun::Node>(
      KFun::Node{KFun::Kind::Compose, c, {}, {outer, inner}}));
}

KFun inverse(const KFun& f) {
  if (!f.is_kinf()) {
    throw ClassError("inverse: " + f.describe() + " is tagged " + to_string(f.fun_class()) +
                     ", only K-infinity functions are invertible");
  }
  return KFun(std::make_shared<KFun::Node>(
      KFun::Node{KFun::Kind::Inverse, FunClass::KInf, {}, {f}}));
}

KFun pointwise_max(const std::vector<KFun>& fs) {
  if (fs.empty()) throw DomainError("pointwise_max: no operands");
  if (fs.size() == 1) return fs[0];
  bool any_pd = false, any_inf = false;
  for (const auto& f : fs) {
    any_pd |= f.fun_class() == FunClass::PD;
    any_inf |= f.is_kinf();
  }
  const FunClass c = any_pd ? FunClass::PD : (any_inf ? FunClass::KInf : FunClass::K);
  return KFun(std::make_shared<KFun::Node>(KFun::Node{KFun::Kind::Max, c, {}, fs}));
}

KFun pointwise_min(const std::vector<KFun>& fs) {
  if (fs.empty()) throw DomainError("pointwise_min: no operands");
  if (fs.size() == 1) return fs[0];
  bool any_pd = false, all_inf = true;
  for (const auto& f : fs) {
    any_pd |= f.fun_class() == FunClass::PD;
    all_inf &= f.is_kinf();
  }
  const FunClass c = any_pd ? FunClass::PD : (all_inf ? FunClass::KInf : FunClass::K);
  return KFun(std::make_shared<KFun::Node>(KFun::Node{KFun::Kind::Min, c, {}, fs}));
}

KFun sum(const std::vector<KFun>& fs) {
  if (fs.empty()) throw DomainError("sum: no operands");
  if (fs.size() == 1) return fs[0];
  bool strict = false, unbounded = false;
  for (const auto& f : fs) {
    strict |= f.fun_class() != FunClass::PD;
    unbounded |= f.is_kinf();
  }
  const FunClass c = !strict ? FunClass::PD : (unbounded ? FunClass::KInf : FunClass::K);
  return KFun(std::make_shared<KFun::Node>(KFun::Node{KFun::Kind::Sum, c, {}, fs}));
}

KFun geometric_mean(const KFun& f, const KFun& g) {
  const bool strict = f.is_k() || g.is_k();
  const FunClass c =
      !strict ? FunClass::PD : (f.is_kinf() && g.is_kinf() ? FunClass::KInf : FunClass::K);
  return KFun(std::make_shared<KFun::Node>(KFun::Node{KFun::Kind::GeoMean, c, {}, {f, g}}));
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("geometric_grid: need 0 < lo < hi, n >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

ClassProbe probe_class(const KFun& f, int points) {
  ClassProbe out;
  if (f(0.0) != 0.0) {
    out.zero_at_zero = false;
    out.witness = 0.0;
    return out;
  }
  const auto grid = geometric_grid(1e-9, 1e12, points);
  const bool strict = f.is_k();
  double prev = 0.0;
  for (double r : grid) {
    const double v = f(r);
    if (!(v > 0.0)) {
      out.positive = false;
      out.witness = r;
      return out;
    }
    if (strict ? !(v > prev) : !(v >= prev)) {
      out.increasing = false;
      out.witness = r;
      return out;
    }
    prev = v;
  }
  if (f.is_kinf()) {
    // Unbounded growth shows up as the last decade still adding value.
    if (!(f(1e12) > f(1e11))) {
      out.unbounded = false;
      out.witness = 1e12;
    }
  }
  return out;
}

bool below_identity(const KFun& f, double lo, double hi, int points, double* witness) {
  for (double r : geometric_grid(lo, hi, points)) {
    if (!(f(r) < r)) {
      if (witness) *witness = r;
      return false;
    }
  }
  return true;
}

}  // namespace isscert
