#include "isscert/netlyap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isscert {

OmegaPath::OmegaPath(std::vector<KFun> sigma, DecayMode mode)
    : sigma_(std::move(sigma)), mode_(mode) {
  if (sigma_.empty()) throw ShapeError("path needs at least one component");
  for (const auto& s : sigma_) {
    if (!s.is_kinf()) throw ClassError("path components must be K-infinity: " + s.describe());
    sigma_inv_.push_back(isscert::inverse(s));
  }
}

Vec OmegaPath::operator()(double r) const {
  Vec v(size());
  for (int i = 0; i < size(); ++i) v[i] = sigma_[i](r);
  return v;
}

double OmegaPath::inverse(int i, double v) const { return sigma_inv_.at(i)(v); }

std::vector<double> default_path_grid() { return geometric_grid(1e-9, 1e9, 64); }

PathVerdict validate_path(const GainOperator& op, const OmegaPath& sigma,
                          std::span<const double> r_grid) {
  if (op.size() != sigma.size()) throw ShapeError("path and operator sizes differ");
  PathVerdict out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    require_level(r, "path grid");
    if (r == 0.0) continue;
    const Vec s = sigma(r);
    const Vec g = op.apply(s);
    for (int i = 0; i < sigma.size(); ++i) {
      const double m = s[i] - g[i];
      if (m < out.worst_margin) {
        out.worst_margin = m;
        out.worst_r = r;
        out.worst_component = i;
      }
      const bool ok = sigma.mode() == DecayMode::Strict ? m > 0.0 : m >= 0.0;
      if (!ok) out.pass = false;
    }
  }

  // sigma_i^-1 divided differences on dyadic pieces of the grid range.
  if (!r_grid.empty()) {
    const double lo = std::max(r_grid.front(), 1e-300);
    const double hi = r_grid.back();
    for (int i = 0; i < sigma.size(); ++i) {
      const double vlo = sigma.components()[i](lo);
      const double vhi = sigma.components()[i](hi);
      if (!(vhi > vlo)) continue;
      for (double a = vlo; a < vhi; a *= 2.0) {
        const double b = std::min(2.0 * a, vhi);
        double c = std::numeric_limits<double>::infinity(), C = 0.0;
        constexpr int kPts = 9;
        double prev_v = a, prev_r = sigma.inverse(i, a);
        for (int k = 1; k < kPts; ++k) {
          const double v = a + (b - a) * k / (kPts - 1);
          const double r = sigma.inverse(i, v);
          const double q = std::abs(r - prev_r) / (v - prev_v);
          c = std::min(c, q);
          C = std::max(C, q);
          prev_v = v;
          prev_r = r;
        }
        out.lipschitz.push_back({i, a, b, c, C});
        if (b >= vhi) break;
      }
    }
  }
  if (out.pass) {
    OmegaPath copy = sigma;
    copy.certified_ = true;
    copy.grid_.assign(r_grid.begin(), r_grid.end());
    out.certified = std::move(copy);
  } else {
    out.notes.push_back("decay condition fails at r = " + std::to_string(*out.worst_r) +
                        ", row " + std::to_string(out.worst_component));
  }
  return out;
}

GainOperator two_system_operator(const KFun& chi12, const KFun& chi21) {
  GainMatrix g(2);
  g.set(0, 1, chi12);
  g.set(1, 0, chi21);
  return GainOperator::max_form(std::move(g));
}

OmegaPath two_system_path(const KFun& chi12, const KFun& chi21) {
  if (!chi12.is_kinf()) throw ClassError("two_system_path: chi12 must be K-infinity");
  double w = 0.0;
  if (!below_identity(compose(chi12, chi21), 1e-9, 1e9, 64, &w)) {
    throw InfeasibleError("two_system_path: chi12 o chi21 < id fails at r = " +
                          std::to_string(w));
  }
  // Geometric midpoint of the band chi21 <= sigma2 <= chi12^-1.
  const KFun sigma2 = geometric_mean(chi21, inverse(chi12));
  if (!sigma2.is_kinf()) {
    throw ClassError("two_system_path: chi21 must be K-infinity for a K-infinity path");
  }
  const OmegaPath candidate({KFun::identity(), sigma2});
  const PathVerdict v = validate_path(two_system_operator(chi12, chi21), candidate);
  if (!v.pass) {
    throw InfeasibleError("two_system_path: midpoint path failed validation at r = " +
                          std::to_string(*v.worst_r));
  }
  return *v.certified;
}

OmegaPath path_from_point(const GainOperator& op, const Eigen::Ref<const Vec>& s0, double lambda) {
  if (!op.is_linear()) throw UnsupportedError("path_from_point needs linear gains");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("path_from_point: lambda must be in (0,1)");
  if (s0.size() != op.size()) throw ShapeError("path_from_point: s0 has the wrong length");
  if (!(s0.array() > 0.0).all()) throw DomainError("path_from_point: s0 must be strictly positive");
  const Vec g = op.apply(s0);
  for (Eigen::Index i = 0; i < s0.size(); ++i) {
    if (g[i] > lambda * s0[i]) {
      throw InfeasibleError("path_from_point: component " + std::to_string(i) + " has Gamma(s0) = " +
                            std::to_string(g[i]) + " > lambda * s0 = " +
                            std::to_string(lambda * s0[i]));
    }
  }
  std::vector<KFun> comps;
  for (Eigen::Index i = 0; i < s0.size(); ++i) comps.push_back(KFun::linear(s0[i]));
  OmegaPath p(std::move(comps), DecayMode::Strict);
  p.lambda_ = lambda;
  p.certified_ = true;
  return p;
}

double CompositeLF::from_parts(const std::vector<double>& v) const {
  if (v.size() != static_cast<size_t>(path_.size())) throw ShapeError("wrong number of parts");
  double out = 0.0;
  for (int i = 0; i < path_.size(); ++i) out = std::max(out, path_.inverse(i, v[i]));
  return out;
}

double CompositeLF::operator()(const Eigen::Ref<const Vec>& x) const {
  std::vector<double> parts(v_.size());
  for (size_t i = 0; i < v_.size(); ++i) {
    const auto& s = slices_[i];
    if (s.offset + s.size > x.size()) throw ShapeError("state too short for the slices");
    parts[i] = v_[i](x.segment(s.offset, s.size));
  }
  return from_parts(parts);
}

double CompositeLF::gain(double r) const {
  double out = 0.0;
  for (int i = 0; i < path_.size(); ++i) {
    if (chi_[i]) out = std::max(out, path_.inverse(i, (*chi_[i])(r)));
  }
  return out;
}

CompositeLF compose_lyapunov(std::vector<SubsystemLF> V, std::vector<StateSlice> slices,
                             const OmegaPath& sigma, std::vector<std::optional<KFun>> chi) {
  if (!sigma.certified()) {
    throw ConfigError("compose_lyapunov: path is not validated; run validate_path first");
  }
  const size_t n = static_cast<size_t>(sigma.size());
  if (V.size() != n || slices.size() != n) {
    throw ShapeError("compose_lyapunov: need one evaluator and one slice per path component");
  }
  if (chi.empty()) chi.resize(n);
  if (chi.size() != n) throw ShapeError("compose_lyapunov: need one external gain per component");
  return CompositeLF(std::move(V), std::move(slices), sigma, std::move(chi));
}

DissipationReport dissipation_audit(const CompositeLF& clf, const Trajectory& traj,
                                    std::span<const double> u_norm, double margin) {
  if (!(margin >= 0.0)) throw DomainError("dissipation_audit: margin must be >= 0");
  if (u_norm.size() != 1 && u_norm.size() != traj.size()) {
    throw ShapeError("dissipation_audit: need one input norm per sample or a constant");
  }
  DissipationReport rep;
  if (traj.blew_up) {
    rep.truncated = true;
    rep.warnings.push_back("trajectory blew up; audit truncated at t = " +
                           std::to_string(traj.blowup_time.value_or(traj.t.back())));
  }
  if (traj.size() < 2) return rep;
  const double dt = traj.uniform_dt();
  std::vector<double> V(traj.size());
  for (size_t k = 0; k < traj.size(); ++k) V[k] = clf(traj.x[k]);
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k + 1 < traj.size(); ++k) {
    ++rep.samples;
    const double u = u_norm.size() == 1 ? u_norm[0] : u_norm[k];
    if (V[k] < clf.gain(u)) continue;
    ++rep.checked;
    const double dV = (V[k + 1] - V[k]) / dt;
    const double bound = -margin + std::max(1e-8, 1e-2 * std::abs(V[k]));
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

}  // namespace isscert
