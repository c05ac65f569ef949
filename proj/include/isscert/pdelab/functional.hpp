#pragma once

#include <functional>

#include "isscert/pdelab/model.hpp"

namespace isscert {

enum class FunctionalKind { L2, WeightedL2, H10, L4, Log1pL2, Potential, Composite };

/// Lyapunov functional on one component of a grid state (trapezoid rule).
///   L2:         int x^2
///   WeightedL2: int e^{-mu z} x^2
///   H10:        int x_z^2 (forward differences)
///   L4:         int x^4
///   Log1pL2:    ln(1 + int x^2)
///   Potential:  int (x_z^2 / 2 + F(x)), F the antiderivative of the reaction
///   Composite:  wrap(full state)
/// On network models L2 is sum x_i^2; the other kinds are grid-only.
struct LyapFunctional {
  FunctionalKind kind = FunctionalKind::L2;
  int component = 0;
  double mu = 0.0;
  std::function<double(double)> antiderivative;
  std::function<double(const Eigen::VectorXd&)> wrap;

  static LyapFunctional of(FunctionalKind k, int component = 0) {
    LyapFunctional f;
    f.kind = k;
    f.component = component;
    return f;
  }
  static LyapFunctional l2(int component = 0) { return of(FunctionalKind::L2, component); }
  static LyapFunctional weighted_l2(double mu) {
    LyapFunctional f = of(FunctionalKind::WeightedL2);
    f.mu = mu;
    return f;
  }
  static LyapFunctional h10(int component = 0) { return of(FunctionalKind::H10, component); }
  static LyapFunctional l4(int component = 0) { return of(FunctionalKind::L4, component); }
  static LyapFunctional log1p_l2(int component = 0) {
    return of(FunctionalKind::Log1pL2, component);
  }
  static LyapFunctional potential(std::function<double(double)> F) {
    LyapFunctional f = of(FunctionalKind::Potential);
    f.antiderivative = std::move(F);
    return f;
  }
  static LyapFunctional composite(std::function<double(const Eigen::VectorXd&)> w) {
    LyapFunctional f = of(FunctionalKind::Composite);
    f.wrap = std::move(w);
    return f;
  }
};

double lyap_eval(const PdeModel& m, const LyapFunctional& F, const Eigen::VectorXd& state);

// L2 norm of a grid state (all components), sup norm for networks and the
// ensemble.
double state_norm(const PdeModel& m, const Eigen::VectorXd& state);

}  // namespace isscert
