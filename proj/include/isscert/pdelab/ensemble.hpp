#pragma once

#include <vector>

#include "isscert/trajectory.hpp"

namespace isscert {

// 2e^2/(e^2 - 1): x' = -2x + x^2 from this value escapes at t = 1.
double s1_initial_x();
// Escape time (1/2) ln(c/(c - 2)) of x' = -2x + x^2, x(0) = c > 2.
double riccati_escape_time(double c);

struct ModePeak {
  int k;
  double peak;    // max |x_k(t)| over accepted steps
  double t_peak;
};

struct EnsembleResult {
  Trajectory traj;  // state (x_1, y_1, ..., x_K, y_K) at multiples of sample_dt
  std::vector<ModePeak> peaks;
};

// Modes x_k' = -x_k + x_k^2 y_k - x_k^3/k^2, y_k' = -y_k from (s1_initial_x(), e),
// each integrated by adaptive Dormand-Prince at relative tolerance rtol.
EnsembleResult ensemble_s1(int K, double T, double rtol = 1e-8, double sample_dt = 1e-3);

}  // namespace isscert
