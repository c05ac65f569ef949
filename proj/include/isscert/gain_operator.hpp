#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isscert/kfun.hpp"

namespace isscert {

using Vec = Eigen::VectorXd;

/// Monotone aggregation of one row: max, sum, or a p-norm (p >= 1).
class Maf {
 public:
  enum class Kind { Max, Sum, PNorm };

  static Maf max() { return Maf(Kind::Max, 0.0); }
  static Maf sum() { return Maf(Kind::Sum, 1.0); }
  // Custom aggregation (sum s_i^p)^(1/p); construction probes the MAF axioms
  // and throws ConfigError when they fail (p < 1 is not subadditive).
  static Maf pnorm(double p, std::uint64_t seed = 7);

  double operator()(const Eigen::Ref<const Vec>& s) const;

  Kind kind() const { return kind_; }
  double p() const { return p_; }

 private:
  Maf(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

struct MafProbe {
  bool positive = true;
  bool strictly_monotone = true;
  bool unbounded = true;
  bool subadditive = true;
  bool ok() const { return positive && strictly_monotone && unbounded && subadditive; }
};

// Randomized check of the MAF axioms in dimension n.
MafProbe probe_maf(const Maf& mu, int n, std::uint64_t seed, int trials = 512);

/// Gains gamma_ij (effect of s_j on row i); missing entries are zero.
class GainMatrix {
 public:
  explicit GainMatrix(int n, bool allow_diagonal = false);

  // Zero entries of `a` become missing gains.
  static GainMatrix from_linear(const Eigen::MatrixXd& a, bool allow_diagonal = false);
  // Truncation of a spatially invariant network: row i has gain row.at(d) on
  // column i + d, wrapped modulo n when periodic.
  static GainMatrix spatially_invariant(int n, const std::map<int, KFun>& row, bool periodic);

  void set(int i, int j, KFun g);
  const std::optional<KFun>& operator()(int i, int j) const;
  int size() const { return n_; }
  bool allow_diagonal() const { return allow_diagonal_; }

  bool is_linear() const;
  // Slopes of linear gains, 0 where missing. Throws UnsupportedError otherwise.
  Eigen::MatrixXd linear_matrix() const;

  const std::optional<std::map<int, KFun>>& invariant_row() const { return invariant_row_; }
  bool periodic() const { return periodic_; }

 private:
  int n_;
  bool allow_diagonal_;
  bool periodic_ = false;
  std::vector<std::optional<KFun>> entries_;
  std::optional<std::map<int, KFun>> invariant_row_;
};

/// s -> (mu_i(gamma_i1(s_1), ..., gamma_in(s_n)))_i on the nonnegative orthant.
class GainOperator {
 public:
  GainOperator(GainMatrix gains, std::vector<Maf> mafs);
  GainOperator(GainMatrix gains, Maf maf);

  static GainOperator max_form(GainMatrix g) { return GainOperator(std::move(g), Maf::max()); }
  static GainOperator sum_form(GainMatrix g) { return GainOperator(std::move(g), Maf::sum()); }

  Vec apply(const Eigen::Ref<const Vec>& s) const;
  Vec operator()(const Eigen::Ref<const Vec>& s) const { return apply(s); }

  int size() const { return gains_.size(); }
  const GainMatrix& gains() const { return gains_; }
  const std::vector<Maf>& mafs() const { return mafs_; }
  bool is_max_form() const { return all_rows_ == Maf::Kind::Max; }
  bool is_sum_form() const { return all_rows_ == Maf::Kind::Sum; }
  bool is_linear() const { return linear_.has_value(); }
  // Slope matrix for linear gains; throws UnsupportedError otherwise.
  const Eigen::MatrixXd& linear_matrix() const;

  // Gamma^k(1), cached. Thread safe.
  Vec ones_orbit(int k) const;

 private:
  struct OrbitCache;
  GainMatrix gains_;
  std::vector<Maf> mafs_;
  std::optional<Maf::Kind> all_rows_;
  std::optional<Eigen::MatrixXd> linear_;
  std::shared_ptr<OrbitCache> cache_;
};

// Gamma^k(s), k >= 1.
Vec power_apply(const GainOperator& op, int k, const Eigen::Ref<const Vec>& s);

struct CycleEntry {
  std::vector<int> cycle;  // i1 -> i2 -> ... -> ik -> i1
  KFun composed;           // gamma_{i1 i2} o gamma_{i2 i3} o ... o gamma_{ik i1}
  bool contraction;        // composed(r) < r on the probe grid
  std::optional<double> witness;
};

// All simple cycles of the gain graph. Throws SizeError when n > cap.
std::vector<CycleEntry> cycle_report(const GainMatrix& g, int cap = 12);

struct SpectralRadius {
  double radius = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Gelfand iteration on the all-ones vector for homogeneous (linear-gain)
// operators with max or sum rows. Converged once the ratio bracket
// min_i/max_i (Gamma^p y)_i / y_i over some lag p <= 12 pins r to within
// tol * max(1, r). Throws UnsupportedError otherwise.
SpectralRadius spectral_radius(const GainOperator& op, int max_iter = 2000, double tol = 1e-9);

struct KleeneResult {
  Vec q;
  int iterations = 0;
  bool exact = true;  // running maximum reached a fixed point exactly
};

// Q(s) = sup_k Gamma^k(s) for max-form operators. Throws DivergenceError when
// the supremum is infinite or, for linear gains, when a cycle product is >= 1.
KleeneResult kleene_star(const GainOperator& op, const Eigen::Ref<const Vec>& s);

// For max-form linear gains, the nodes of a cycle with product >= 1 - 1e-12,
// empty when none exists.
std::vector<int> nonexpanding_cycle(const Eigen::MatrixXd& a);

}  // namespace isscert
