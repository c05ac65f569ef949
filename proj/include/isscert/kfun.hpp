#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isscert/errors.hpp"

namespace isscert {

// PD: zero at zero, positive elsewhere, nondecreasing.
// K: additionally strictly increasing. KInf: K and unbounded.
enum class FunClass { PD, K, KInf };

const char* to_string(FunClass c);

/// Comparison function r -> f(r) on [0, inf), stored as an immutable
/// expression tree. Copies share the tree.
class KFun {
 public:
  enum class Kind {
    Linear,      // a*r
    Power,       // a*r^p
    Saturation,  // a*r/(1+r)
    Log1p,       // a*ln(1+r)
    AffineCap,   // slope*min(r,knot) + tail*max(r-knot,0)
    Compose,
    Max,
    Min,
    Sum,
    GeoMean,     // sqrt(f*g)
    Inverse,
  };

  static KFun identity() { return linear(1.0); }
  static KFun linear(double a);
  static KFun power(double a, double p);
  static KFun saturation(double a);
  static KFun log1p(double a);
  static KFun affine_cap(double slope, double knot, double tail);

  double operator()(double r) const;

  Kind kind() const;
  FunClass fun_class() const;
  bool is_kinf() const { return fun_class() == FunClass::KInf; }
  bool is_k() const { return fun_class() != FunClass::PD; }

  // Primitive parameters, in declaration order of the factory.
  const std::vector<double>& params() const;
  // Children: compose -> {outer, inner}; max/min/sum/geomean -> operands;
  // inverse -> {of}.
  const std::vector<KFun>& children() const;

  // Slope if the tree is a Linear leaf.
  std::optional<double> linear_slope() const;

  std::string describe() const;

  struct Node;

 private:
  explicit KFun(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend KFun compose(const KFun&, const KFun&);
  friend KFun inverse(const KFun&);
  friend KFun pointwise_max(const std::vector<KFun>&);
  friend KFun pointwise_min(const std::vector<KFun>&);
  friend KFun sum(const std::vector<KFun>&);
  friend KFun geometric_mean(const KFun&, const KFun&);
};

KFun compose(const KFun& outer, const KFun& inner);
// Throws ClassError unless f is K-infinity.
KFun inverse(const KFun& f);
KFun pointwise_max(const std::vector<KFun>& fs);
KFun pointwise_min(const std::vector<KFun>& fs);
KFun sum(const std::vector<KFun>& fs);
KFun geometric_mean(const KFun& f, const KFun& g);

inline KFun pointwise_max(const KFun& f, const KFun& g) { return pointwise_max(std::vector<KFun>{f, g}); }
inline KFun pointwise_min(const KFun& f, const KFun& g) { return pointwise_min(std::vector<KFun>{f, g}); }
inline KFun operator+(const KFun& f, const KFun& g) { return sum(std::vector<KFun>{f, g}); }

inline double eval(const KFun& f, double r) { return f(r); }

// n points, geometrically spaced on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int n);

struct ClassProbe {
  bool zero_at_zero = true;
  bool increasing = true;  // strict for K tags, non-strict for PD
  bool positive = true;
  bool unbounded = true;   // only meaningful for KInf tags
  std::optional<double> witness;  // first offending grid point
  bool ok() const { return zero_at_zero && increasing && positive && unbounded; }
};

// Checks the class tag of f on a geometric grid reaching 1e12.
ClassProbe probe_class(const KFun& f, int points = 128);

// True if f(r) < r on a geometric grid in [lo, hi]. Sets *witness to the
// first failing r.
bool below_identity(const KFun& f, double lo = 1e-9, double hi = 1e9, int points = 64,
                    double* witness = nullptr);

}  // namespace isscert
