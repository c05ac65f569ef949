#pragma once

#include <optional>

#include "isscert/pdelab/model.hpp"
#include "isscert/trajectory.hpp"

namespace isscert {

inline constexpr double kBlowup = 1e10;

struct SimOptions {
  std::optional<double> dt;  // defaults to the model's dt
  int sample_every = 1;      // keep every m-th step
};

// Grid kinds: backward Euler on the linear part, explicit nonlinearity and
// input; transport: first-order upwind with inflow x(0,t) = u(t); networks:
// RK4; ensemble: Dormand-Prince between samples. Samples are taken at
// multiples of sample_every*dt. Stops at the first state with a component
// above 1e10 in magnitude (blew_up, blowup_time). Throws NumericalError on
// NaN with the last valid time.
Trajectory simulate(const PdeModel& m, const Eigen::VectorXd& x0, const InputFn& u, double T,
                    const SimOptions& opt = {});

}  // namespace isscert
