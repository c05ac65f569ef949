#include "isscert/pdelab/checks.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "isscert/errors.hpp"
#include "isscert/pdelab/ks_sigma.hpp"
#include "isscert/pdelab/quadrature.hpp"

namespace isscert {

namespace {

constexpr double kPi = std::numbers::pi;

void require_functional(const LyapFunctional& F, FunctionalKind k, const char* law) {
  if (F.kind != k || F.component != 0) {
    throw ConfigError(std::string(law) + " law needs a different functional");
  }
}

void require_model(const PdeModel& m, ModelKind k, const char* law) {
  if (m.kind() != k) throw ConfigError(std::string(law) + " law does not apply to model " + to_string(m.kind()));
}

}  // namespace

DissipationReport dissipation_check(const PdeModel& m, const LyapFunctional& F,
                                    const Trajectory& traj, const DissipationLaw& law) {
  const double L = m.L();
  double sigma = 0.0;
  switch (law.kind) {
    case LawKind::Burgers:
      require_model(m, ModelKind::Burgers, "Burgers");
      require_functional(F, FunctionalKind::L2, "Burgers");
      break;
    case LawKind::KuramotoSivashinsky:
      require_model(m, ModelKind::KuramotoSivashinsky, "KS");
      require_functional(F, FunctionalKind::L2, "KS");
      sigma = law.sigma ? *law.sigma : ks_sigma(m.param("lambda"), m.N(), L);
      break;
    case LawKind::GinzburgLandau:
      require_model(m, ModelKind::GinzburgLandau, "Ginzburg-Landau");
      require_functional(F, FunctionalKind::L2, "Ginzburg-Landau");
      if (std::abs(L - 1.0) > 1e-12) throw UnsupportedError("Ginzburg-Landau law is stated on (0,1)");
      break;
    case LawKind::IissRd:
      require_model(m, ModelKind::IissRd, "iISS");
      require_functional(F, FunctionalKind::Log1pL2, "iISS");
      break;
    case LawKind::ReactionDiffusionH10:
      require_model(m, ModelKind::HeatReaction, "H10");
      require_functional(F, FunctionalKind::Potential, "H10");
      if (L > kPi * (1.0 + 1e-12)) throw UnsupportedError("H10 law needs L <= pi");
      if (!(law.gain > 1.0)) throw ConfigError("H10 law: gain must be > 1");
      break;
    case LawKind::Transport:
      require_model(m, ModelKind::Transport, "transport");
      if (F.kind != FunctionalKind::WeightedL2 || !(F.mu > 0.0)) {
        throw ConfigError("transport law needs a weighted L2 functional with mu > 0");
      }
      break;
  }
  const bool needs_eps = law.kind == LawKind::Burgers || law.kind == LawKind::KuramotoSivashinsky ||
                         law.kind == LawKind::GinzburgLandau;
  if (needs_eps && !(law.eps > 0.0)) throw ConfigError("law needs eps > 0");

  DissipationReport rep;
  if (traj.blew_up) {
    rep.truncated = true;
    rep.warnings.push_back("trajectory blew up; check truncated at t = " +
                           std::to_string(traj.blowup_time.value_or(0.0)));
  }
  if (traj.size() < 2) return rep;
  const double dt = traj.uniform_dt();
  const int n = m.N() + 1;
  const double h = m.h();
  std::vector<double> V(traj.size());
  for (size_t k = 0; k < traj.size(); ++k) V[k] = lyap_eval(m, F, traj.x[k]);

  auto input_l2sq = [&](size_t k) {
    return traj.u[k].size() ? l2_squared(traj.u[k].head(n), h) : 0.0;
  };
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < traj.size(); ++k) {
    ++rep.samples;
    const Eigen::VectorXd& x = traj.x[k];
    double rhs = 0.0;
    switch (law.kind) {
      case LawKind::Burgers:
        rhs = (2.0 * m.param("b") + law.eps - 2.0 * kPi * kPi / (L * L)) * V[k] +
              input_l2sq(k) / law.eps;
        break;
      case LawKind::KuramotoSivashinsky:
        rhs = (law.eps - 2.0 * sigma) * V[k] + input_l2sq(k) / law.eps;
        break;
      case LawKind::GinzburgLandau: {
        const double mu = m.param("mu"), a = m.param("a");
        const double u0 = traj.u[k].size() ? traj.u[k][0] : 0.0;
        rhs = ((law.eps - 2.0 * mu) * kPi * kPi / 4.0 + law.eps + 2.0 * a) * V[k] -
              2.0 * V[k] * V[k] + mu * mu / law.eps * u0 * u0;
        break;
      }
      case LawKind::IissRd: {
        const double W = l2_squared(x.head(n), h);
        const double c = m.param("c");
        const double vmax = traj.u[k].size() ? traj.u[k].head(n).cwiseAbs().maxCoeff() : 0.0;
        rhs = -2.0 * c * (kPi / L) * (kPi / L) * W / (1.0 + W) + 2.0 * vmax;
        break;
      }
      case LawKind::ReactionDiffusionH10: {
        const double hx = h10_squared(x.head(n), h);
        if (law.gain * std::sqrt(input_l2sq(k)) > std::sqrt(hx)) continue;
        rhs = (1.0 / law.gain - 1.0) * hx;
        break;
      }
      case LawKind::Transport: {
        const double u0 = traj.u[k].size() ? traj.u[k][0] : 0.0;
        rhs = -F.mu * V[k] + u0 * u0;
        break;
      }
    }
    ++rep.checked;
    const double dV = (V[k + 1] - V[k]) / dt;
    const double bound = rhs + law.rel_tol * std::max(std::abs(rhs), std::abs(dV)) + law.abs_tol;
    rep.worst_slack = std::min(rep.worst_slack, bound - dV);
    if (dV > bound) {
      rep.pass = false;
      rep.violations.push_back({traj.t[k], V[k], dV, bound});
    }
  }
  if (rep.checked == 0) rep.worst_slack = 0.0;
  rep.growing = V.back() > V.front();
  return rep;
}

EnvelopeVerdict iss_envelope_check(const PdeModel& m, const Trajectory& traj, const KLFun& beta,
                                   const KFun& gamma, double u_norm, double rel_tol) {
  require_level(u_norm, "iss_envelope_check: input norm");
  if (!(rel_tol >= 0.0)) throw DomainError("iss_envelope_check: rel_tol must be >= 0");
  EnvelopeVerdict out;
  if (traj.size() == 0) return out;
  const double r0 = state_norm(m, traj.x[0]);
  const double g = gamma(u_norm);
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < traj.size(); ++k) {
    ++out.samples;
    const double bound = (beta(r0, traj.t[k]) + g) * (1.0 + rel_tol);
    const double margin = bound - state_norm(m, traj.x[k]);
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -1e-12 * std::max(1.0, bound) && out.pass) {
      out.pass = false;
      out.first_violation_t = traj.t[k];
    }
  }
  return out;
}

}  // namespace isscert
