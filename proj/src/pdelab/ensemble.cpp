#include "isscert/pdelab/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "isscert/errors.hpp"
#include "isscert/ode.hpp"

namespace isscert {

double s1_initial_x() {
  const double e2 = std::exp(2.0);
  return 2.0 * e2 / (e2 - 1.0);
}

double riccati_escape_time(double c) {
  if (!(c > 2.0)) throw DomainError("riccati_escape_time: needs c > 2");
  return 0.5 * std::log(c / (c - 2.0));
}

EnsembleResult ensemble_s1(int K, double T, double rtol, double sample_dt) {
  if (K < 1) throw DomainError("ensemble_s1: K must be >= 1");
  if (!(T > 0.0) || !(sample_dt > 0.0) || !(rtol > 0.0)) {
    throw DomainError("ensemble_s1: T, sample_dt and rtol must be > 0");
  }
  const long samples = std::lround(T / sample_dt);
  EnsembleResult out;
  out.traj.t.resize(samples + 1);
  for (long j = 0; j <= samples; ++j) out.traj.t[j] = j * sample_dt;
  out.traj.x.assign(samples + 1, Eigen::VectorXd::Zero(2 * K));

  Dp45Options opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-2;
  opt.h0 = sample_dt * 0.25;
  for (int k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k) * k;
    OdeRhs f = [kk](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
      ds.resize(2);
      ds[0] = -s[0] + s[0] * s[0] * s[1] - s[0] * s[0] * s[0] / kk;
      ds[1] = -s[1];
    };
    Eigen::VectorXd s(2);
    s << s1_initial_x(), std::numbers::e;
    ModePeak pk{k, std::abs(s[0]), 0.0};
    OdeObserver obs = [&pk](double t, const Eigen::VectorXd& y) {
      if (std::abs(y[0]) > pk.peak) {
        pk.peak = std::abs(y[0]);
        pk.t_peak = t;
      }
      return true;
    };
    out.traj.x[0].segment(2 * (k - 1), 2) = s;
    for (long j = 0; j < samples; ++j) {
      const OdeResult r = integrate_dp45(f, s, out.traj.t[j], out.traj.t[j + 1], opt, obs);
      if (r.blew_up) {
        throw NumericalError("ensemble_s1: mode " + std::to_string(k) + " escaped", r.t_end);
      }
      out.traj.x[j + 1].segment(2 * (k - 1), 2) = s;
    }
    out.peaks.push_back(pk);
  }
  return out;
}

}  // namespace isscert
