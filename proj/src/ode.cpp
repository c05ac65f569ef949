#include "isscert/ode.hpp"

#include <algorithm>
#include <cmath>

#include "isscert/errors.hpp"

namespace isscert {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeResult integrate_dp45(const OdeRhs& f, Eigen::VectorXd& y, double t0, double t1,
                         const Dp45Options& opt, const OdeObserver& observe) {
  if (!(t1 >= t0)) throw DomainError("integrate_dp45: need t1 >= t0");
  OdeResult res;
  res.t_end = t0;
  if (t1 == t0) return res;
  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  double t = t0;
  double h = std::min(opt.h0, t1 - t0);
  f(t, y, k1);
  for (long step = 0; t < t1; ++step) {
    if (step >= opt.max_steps) throw NumericalError("integrate_dp45: step budget exhausted", t);
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    ytmp = y + h * a21 * k1;
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      en = std::max(en, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(en)) {
      // Overflow inside the stages: shrink and retry before giving up.
      h *= 0.1;
      ++res.rejected;
      if (h < opt.h_min) throw NumericalError("integrate_dp45: non-finite stage values", t);
      continue;
    }
    if (en <= 1.0) {
      t = last ? t1 : t + h;
      y = ynew;
      k1 = k7;
      ++res.accepted;
      res.t_end = t;
      if (y.cwiseAbs().maxCoeff() > opt.blowup) {
        res.blew_up = true;
        return res;
      }
      if (observe && !observe(t, y)) return res;
    } else {
      ++res.rejected;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= en <= 1.0 ? fac : std::min(1.0, fac);
    if (h < opt.h_min && t < t1) throw NumericalError("integrate_dp45: step size underflow", t);
  }
  return res;
}

void rk4_step(const OdeRhs& f, double t, double h, Eigen::VectorXd& y) {
  Eigen::VectorXd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size());
  f(t, y, k1);
  f(t + 0.5 * h, y + 0.5 * h * k1, k2);
  f(t + 0.5 * h, y + 0.5 * h * k2, k3);
  f(t + h, y + h * k3, k4);
  y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace isscert
