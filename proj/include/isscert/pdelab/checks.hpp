#pragma once

#include <optional>

#include "isscert/dissipation.hpp"
#include "isscert/kfun.hpp"
#include "isscert/klfun.hpp"
#include "isscert/pdelab/functional.hpp"
#include "isscert/trajectory.hpp"

namespace isscert {

enum class LawKind { Burgers, KuramotoSivashinsky, GinzburgLandau, IissRd, ReactionDiffusionH10, Transport };

/// Right-hand sides, with V the matching functional and v the input snapshot:
///   Burgers (L2):        (2b + eps - 2 (pi/L)^2) V + int v^2 / eps
///   KS (L2):             (eps - 2 sigma(lambda)) V + int v^2 / eps
///   Ginzburg-Landau (L2, L = 1):
///                        ((eps - 2mu) pi^2/4 + eps + 2a) V - 2 V^2 + mu^2 u^2 / eps
///   iISS-rd (log1pL2):   -2c (pi/L)^2 W/(1+W) + 2 max|v|,  W = int x^2
///   H10 (potential, heat-reaction, L <= pi): where gain * ||v||_2 <= ||x||_H10,
///                        (1/gain - 1) ||x||_H10^2
///   Transport (weighted L2 with weight mu): -mu V + u^2
struct DissipationLaw {
  LawKind kind = LawKind::Burgers;
  double eps = 0.0;
  std::optional<double> sigma;  // KS: computed by ks_sigma(lambda, N, L) when absent
  double gain = 2.0;            // H10 Lyapunov gain a > 1
  double rel_tol = 0.02;
  double abs_tol = 1e-10;
};

// Per-sample forward difference of V against the law evaluated at the left
// sample. A sample violates when dV > rhs + rel_tol*max(|rhs|, |dV|) + abs_tol.
// Throws ConfigError when F does not match the law or eps is missing.
DissipationReport dissipation_check(const PdeModel& m, const LyapFunctional& F,
                                    const Trajectory& traj, const DissipationLaw& law);

struct EnvelopeVerdict {
  bool pass = true;
  long samples = 0;
  double worst_margin = 0.0;  // min of bound*(1+rel_tol) - ||x(t)||
  std::optional<double> first_violation_t;
};

// ||x(t)|| <= beta(||x(0)||, t) + gamma(u_norm) at every sample, with the
// bound inflated by rel_tol. norm defaults to state_norm(m, .).
EnvelopeVerdict iss_envelope_check(const PdeModel& m, const Trajectory& traj, const KLFun& beta,
                                   const KFun& gamma, double u_norm, double rel_tol = 0.0);

}  // namespace isscert
