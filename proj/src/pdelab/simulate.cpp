#include "isscert/pdelab/simulate.hpp"

#include <cmath>

#include "isscert/errors.hpp"
#include "isscert/ode.hpp"
#include "model_impl.hpp"

namespace isscert {

namespace {

enum class StepCheck { Ok, Blowup };

StepCheck check_state(const Eigen::VectorXd& x, double t_prev) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) throw NumericalError("simulate: NaN in state", t_prev);
    mx = std::max(mx, std::abs(x[i]));
  }
  return mx > kBlowup ? StepCheck::Blowup : StepCheck::Ok;
}

}  // namespace

Trajectory simulate(const PdeModel& m, const Eigen::VectorXd& x0, const InputFn& u, double T,
                    const SimOptions& opt) {
  const ModelImpl& im = m.impl();
  if (x0.size() != im.size) {
    throw ShapeError("simulate: x0 has length " + std::to_string(x0.size()) + ", model needs " +
                     std::to_string(im.size));
  }
  if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("simulate: T must be finite and >= 0");
  if (opt.sample_every < 1) throw DomainError("simulate: sample_every must be >= 1");
  const double dt = opt.dt.value_or(im.dt);
  if (!(dt > 0.0)) throw DomainError("simulate: dt must be > 0");
  if (im.kind == ModelKind::Transport && dt > im.h * (1.0 + 1e-12)) {
    throw ConfigError("simulate: transport dt exceeds the CFL bound h = " + std::to_string(im.h));
  }
  auto input = [&](double t) -> Eigen::VectorXd {
    if (im.input_size == 0) return Eigen::VectorXd();
    Eigen::VectorXd v = u ? u(t) : Eigen::VectorXd::Zero(im.input_size);
    if (v.size() != im.input_size) {
      throw ShapeError("simulate: input has length " + std::to_string(v.size()) + ", model needs " +
                       std::to_string(im.input_size));
    }
    return v;
  };

  std::shared_ptr<SparseSolver> solver = im.solver;
  if (im.implicit() && std::abs(dt - im.dt) > 1e-15 * im.dt) solver = factor_step(im, dt);

  Trajectory tr;
  Eigen::VectorXd x = x0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!im.pinned.empty() && im.pinned[i] && im.kind != ModelKind::Transport) x[i] = 0.0;
  }
  if (im.kind == ModelKind::GinzburgLandau) {
    x[0] = (4.0 * x[1] - x[2] - 2.0 * im.h * input(0.0)[0]) / 3.0;
  }
  const long steps = std::lround(T / dt);
  tr.t.push_back(0.0);
  tr.x.push_back(x);
  tr.u.push_back(input(0.0));

  Eigen::VectorXd rhs(im.size), f(im.size);
  OdeRhs net = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    if (im.kind == ModelKind::EnsembleS1) {
      ensemble_rhs(im, y, dy);
    } else {
      network_rhs(im, y, input(t), dy);
    }
  };

  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double t1 = (k + 1) * dt;
    switch (im.kind) {
      case ModelKind::Transport: {
        const double c = dt / im.h;
        for (int i = im.N; i >= 1; --i) x[i] -= c * (x[i] - x[i - 1]);
        x[0] = input(t1)[0];
        break;
      }
      case ModelKind::InfiniteLinear:
      case ModelKind::InfiniteCubic:
        rk4_step(net, t, dt, x);
        break;
      case ModelKind::EnsembleS1: {
        Dp45Options o;
        o.h0 = dt;
        o.blowup = kBlowup;
        const OdeResult r = integrate_dp45(net, x, t, t1, o);
        if (r.blew_up) {
          tr.blew_up = true;
          tr.blowup_time = r.t_end;
          return tr;
        }
        break;
      }
      default: {
        explicit_rhs(im, x, input(t), f);
        rhs = x + dt * f;
        for (int i = 0; i < im.size; ++i) {
          if (im.pinned[i]) rhs[i] = 0.0;
        }
        if (im.kind == ModelKind::GinzburgLandau) rhs[0] = 0.0;
        x = solver->solve(rhs);
        if (im.kind == ModelKind::GinzburgLandau) {
          x[0] = (4.0 * x[1] - x[2] - 2.0 * im.h * input(t1)[0]) / 3.0;
        }
        break;
      }
    }
    if (check_state(x, t) == StepCheck::Blowup) {
      tr.blew_up = true;
      tr.blowup_time = t1;
      return tr;
    }
    if ((k + 1) % opt.sample_every == 0) {
      tr.t.push_back(t1);
      tr.x.push_back(x);
      tr.u.push_back(input(t1));
    }
  }
  return tr;
}

}  // namespace isscert
