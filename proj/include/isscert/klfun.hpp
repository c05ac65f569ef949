#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isscert/kfun.hpp"

namespace isscert {

/// Two-argument envelope beta(r, t): increasing in r, decreasing in t.
/// Either q(r) * exp(-c t) or a table on (level grid) x (time grid).
class KLFun {
 public:
  static KLFun exponential(KFun q, double rate);
  // values(i, j) = beta(r_grid[i], t_grid[j]). Grids strictly increasing,
  // r_grid[0] > 0, t_grid[0] == 0.
  static KLFun tabulated(std::vector<double> r_grid, std::vector<double> t_grid,
                         Eigen::MatrixXd values);

  double operator()(double r, double t) const;

  bool is_closed_form() const { return q_.has_value(); }
  const KFun& q() const;
  double rate() const { return rate_; }

  const std::vector<double>& r_grid() const { return r_grid_; }
  const std::vector<double>& t_grid() const { return t_grid_; }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  KLFun() = default;
  std::optional<KFun> q_;
  double rate_ = 0.0;
  std::vector<double> r_grid_, t_grid_;
  Eigen::MatrixXd values_;
};

// Flow of y' = -alpha(y) from each level in r_grid, sampled on t_grid.
// t_grid must start at 0. Refines the RK4 step until successive refinements
// agree to 1e-8 relative.
KLFun kl_envelope(const KFun& alpha, std::span<const double> r_grid,
                  std::span<const double> t_grid);

struct ComparisonAudit {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> bound;
  double worst_margin = 0.0;  // min over samples of bound - y
  bool pass = true;
};

// Integrates y' = -alpha(max(y,0)) + v(t), v piecewise linear through the
// samples v[k] at t_k = k*T/(m-1), and checks
// y(t_k) <= beta(y0, t_k) + 2 * int_0^{t_k} v.
ComparisonAudit comparison_with_inputs(const KFun& alpha, double y0, std::span<const double> v,
                                       double horizon);

struct SontagFactors {
  KFun alpha1;
  KFun alpha2;
  double worst_margin;  // min over the check grid of alpha2(r)e^{-lambda t} - alpha1(beta(r,t))
};

// Exponential envelopes only: alpha1 = id, alpha2 = q.
SontagFactors sontag_factor(const KLFun& beta, double lambda);

}  // namespace isscert
