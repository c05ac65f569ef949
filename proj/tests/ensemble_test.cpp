#include <gtest/gtest.h>

#include <cmath>

#include "isscert/pdelab/ensemble.hpp"

using namespace isscert;

namespace {

// peak of |x| along a fixed-step RK4 solution of one mode
double rk4_peak(int k, double T, double h) {
  auto f = [k](double t, double x) {
    const double y = std::exp(1.0 - t);
    return -x + x * x * y - x * x * x / (double(k) * k);
  };
  double x = s1_initial_x(), t = 0.0, peak = std::abs(x);
  const int steps = static_cast<int>(std::lround(T / h));
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(t, x), k2 = f(t + h / 2, x + h / 2 * k1), k3 = f(t + h / 2, x + h / 2 * k2),
                 k4 = f(t + h, x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
    peak = std::max(peak, std::abs(x));
  }
  return peak;
}

}  // namespace

TEST(Ensemble, InitialValueEscapesAtOne) {
  const double e2 = std::exp(2.0);
  EXPECT_DOUBLE_EQ(s1_initial_x(), 2 * e2 / (e2 - 1));
  EXPECT_NEAR(riccati_escape_time(s1_initial_x()), 1.0, 1e-14);
  EXPECT_NEAR(riccati_escape_time(4.0), 0.5 * std::log(2.0), 1e-15);
}

TEST(Ensemble, PeaksMatchIndependentIntegration) {
  const auto r = ensemble_s1(4, 3.0);
  ASSERT_EQ(r.peaks.size(), 4u);
  for (const auto& p : r.peaks) {
    // dense output is only sampled at accepted steps, so allow a small shortfall
    const double oracle = rk4_peak(p.k, 3.0, 1e-5);
    EXPECT_NEAR(p.peak, oracle, 1e-3 * oracle) << p.k;
  }
}

TEST(Ensemble, PeaksGrowWithoutUniformBound) {
  const auto r = ensemble_s1(16, 5.0);
  for (size_t i = 1; i < r.peaks.size(); ++i) {
    EXPECT_GT(r.peaks[i].peak, r.peaks[i - 1].peak);
    EXPECT_GE(r.peaks[i].peak, r.peaks[i].k);
  }
  EXPECT_GE(r.peaks.back().peak, 16.0 * 16.0);
}

TEST(Ensemble, TrajectoryLayout) {
  const auto r = ensemble_s1(3, 8.0, 1e-9, 1e-2);
  ASSERT_EQ(r.traj.x.front().size(), 6);
  EXPECT_NEAR(r.traj.uniform_dt(), 1e-2, 1e-12);
  for (size_t n = 0; n < r.traj.size(); n += 50) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(r.traj.x[n][2 * k + 1], std::exp(1.0 - r.traj.t[n]), 1e-7);
    }
  }
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(r.traj.x.back()[2 * k]), 1e-2);
}
