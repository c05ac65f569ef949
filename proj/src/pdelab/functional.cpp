#include "isscert/pdelab/functional.hpp"

#include <cmath>

#include "isscert/errors.hpp"
#include "isscert/pdelab/quadrature.hpp"

namespace isscert {

double lyap_eval(const PdeModel& m, const LyapFunctional& F, const Eigen::VectorXd& state) {
  if (state.size() != m.state_size()) {
    throw ShapeError("lyap_eval: state has length " + std::to_string(state.size()) +
                     ", model needs " + std::to_string(m.state_size()));
  }
  if (F.kind == FunctionalKind::Composite) {
    if (!F.wrap) throw ConfigError("composite functional without a wrapped evaluator");
    return F.wrap(state);
  }
  if (!m.is_grid()) {
    if (F.kind != FunctionalKind::L2) throw UnsupportedError("network models support L2 only");
    return state.squaredNorm();
  }
  if (F.component < 0 || F.component >= m.components()) {
    throw ShapeError("lyap_eval: component out of range");
  }
  const int n = m.N() + 1;
  const double h = m.h();
  const auto x = state.segment(F.component * n, n);
  switch (F.kind) {
    case FunctionalKind::L2:
      return l2_squared(x, h);
    case FunctionalKind::WeightedL2: {
      const Eigen::ArrayXd w = (-F.mu * m.nodes().array()).exp();
      return trapezoid((w * x.array().square()).matrix(), h);
    }
    case FunctionalKind::H10:
      return h10_squared(x, h);
    case FunctionalKind::L4:
      return trapezoid(x.array().pow(4).matrix(), h);
    case FunctionalKind::Log1pL2:
      return std::log1p(l2_squared(x, h));
    case FunctionalKind::Potential: {
      if (!F.antiderivative) throw ConfigError("potential functional needs an antiderivative");
      Eigen::VectorXd Fx(n);
      for (int i = 0; i < n; ++i) Fx[i] = F.antiderivative(x[i]);
      return 0.5 * h10_squared(x, h) + trapezoid(Fx, h);
    }
    default:
      break;
  }
  throw UnsupportedError("lyap_eval: unsupported functional");
}

double state_norm(const PdeModel& m, const Eigen::VectorXd& state) {
  if (state.size() != m.state_size()) throw ShapeError("state_norm: wrong state length");
  if (!m.is_grid()) return state.size() ? state.lpNorm<Eigen::Infinity>() : 0.0;
  const int n = m.N() + 1;
  double s = 0.0;
  for (int c = 0; c < m.components(); ++c) s += l2_squared(state.segment(c * n, n), m.h());
  return std::sqrt(s);
}

}  // namespace isscert
