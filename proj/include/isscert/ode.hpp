#pragma once

#include <functional>

#include <Eigen/Dense>

namespace isscert {

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;
// Called after every accepted step; return false to stop early.
using OdeObserver = std::function<bool(double t, const Eigen::VectorXd& y)>;

struct Dp45Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h0 = 1e-3;
  double h_max = 0.0;  // 0: no cap
  double h_min = 1e-14;
  double blowup = 1e10;  // stop when any |y_i| exceeds this
  long max_steps = 20'000'000;
};

struct OdeResult {
  double t_end = 0.0;
  bool blew_up = false;
  long accepted = 0;
  long rejected = 0;
};

// Adaptive Dormand-Prince 5(4) with FSAL. Throws NumericalError when the step
// collapses below h_min or the state turns NaN; last_valid_time is set.
OdeResult integrate_dp45(const OdeRhs& f, Eigen::VectorXd& y, double t0, double t1,
                         const Dp45Options& opt = {}, const OdeObserver& observe = {});

// One classical RK4 step of size h, in place.
void rk4_step(const OdeRhs& f, double t, double h, Eigen::VectorXd& y);

}  // namespace isscert
