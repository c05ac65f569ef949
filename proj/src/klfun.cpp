#include "isscert/klfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace isscert {

namespace {

void require_increasing(std::span<const double> g, const char* what) {
  if (g.empty()) throw DomainError(std::string(what) + ": empty grid");
  for (size_t i = 0; i < g.size(); ++i) {
    require_level(g[i], what);
    if (i > 0 && !(g[i] > g[i - 1])) {
      throw DomainError(std::string(what) + ": grid must be strictly increasing");
    }
  }
}

void require_positive_definite(const KFun& alpha, double r_max) {
  if (alpha(0.0) != 0.0) throw ModelError("alpha(0) must be 0");
  for (double r : geometric_grid(1e-9, std::max(1.0, r_max) * 10.0, 128)) {
    if (!(alpha(r) > 0.0)) {
      throw ModelError("alpha is not positive definite: alpha(" + std::to_string(r) + ") = " +
                       std::to_string(alpha(r)));
    }
  }
}

// Samples of the solution of y' = f(t, y) at the nodes of t_grid using `sub`
// RK4 steps per grid interval. Callers guarantee f(t, 0) >= 0, so the exact
// solution never leaves [0, inf). A step that lands at or below 0 is split in
// halves; only after 30 splits is it clamped to 0 (finite-time extinction
// when alpha is not Lipschitz at 0). Clamping a coarse overshoot directly
// would park the flow on the equilibrium 0 at every resolution.
std::vector<double> rk4_on_grid(const std::function<double(double, double)>& f, double y0,
                                std::span<const double> t_grid, int sub) {
  std::function<double(double, double, double, int)> step = [&](double t, double y, double h,
                                                                 int depth) {
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    const double next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (next > 0.0 || y == 0.0) return std::max(next, 0.0);
    if (depth >= 30) return 0.0;
    const double mid = step(t, y, 0.5 * h, depth + 1);
    return step(t + 0.5 * h, mid, 0.5 * h, depth + 1);
  };
  std::vector<double> out(t_grid.size());
  double y = y0;
  out[0] = y;
  for (size_t j = 1; j < t_grid.size(); ++j) {
    const double t0 = t_grid[j - 1];
    const double h = (t_grid[j] - t0) / sub;
    for (int s = 0; s < sub; ++s) y = step(t0 + s * h, y, h, 0);
    out[j] = y;
  }
  return out;
}

// Doubles the number of substeps until two successive solutions agree to
// rel_tol, relative to max(|y|, 1e-2 * scale).
std::vector<double> refined_flow(const std::function<double(double, double)>& f, double y0,
                                 std::span<const double> t_grid, double scale,
                                 double rel_tol = 1e-8) {
  double span_max = 0.0;
  for (size_t j = 1; j < t_grid.size(); ++j) span_max = std::max(span_max, t_grid[j] - t_grid[j - 1]);
  int sub = std::max(4, static_cast<int>(std::ceil(span_max / 0.05)));
  sub = std::min(sub, 1 << 14);
  auto coarse = rk4_on_grid(f, y0, t_grid, sub);
  for (int round = 0; round < 14; ++round) {
    sub *= 2;
    auto fine = rk4_on_grid(f, y0, t_grid, sub);
    double worst = 0.0;
    for (size_t j = 0; j < fine.size(); ++j) {
      const double den = std::max(std::abs(fine[j]), 1e-2 * scale);
      worst = std::max(worst, std::abs(fine[j] - coarse[j]) / den);
    }
    coarse = std::move(fine);
    if (worst < rel_tol) return coarse;
  }
  throw NumericalError("RK4 refinement did not reach the requested tolerance");
}

}  // namespace

KLFun KLFun::exponential(KFun q, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("KL decay rate must be positive");
  if (!q.is_k()) throw ClassError("KL numerator must be of class K");
  KLFun b;
  b.q_ = std::move(q);
  b.rate_ = rate;
  return b;
}

KLFun KLFun::tabulated(std::vector<double> r_grid, std::vector<double> t_grid,
                       Eigen::MatrixXd values) {
  require_increasing(r_grid, "KL level grid");
  require_increasing(t_grid, "KL time grid");
  if (!(r_grid[0] > 0.0)) throw DomainError("KL level grid must start above 0");
  if (values.rows() != static_cast<Eigen::Index>(r_grid.size()) ||
      values.cols() != static_cast<Eigen::Index>(t_grid.size())) {
    throw ShapeError("KL table shape does not match its grids");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (!(v > 0.0) || !std::isfinite(v)) throw ModelError("KL table entries must be positive");
      if (i > 0 && !(v > values(i - 1, j))) throw ModelError("KL table not increasing in r");
      if (j > 0 && !(v < values(i, j - 1))) throw ModelError("KL table not decreasing in t");
    }
  }
  KLFun b;
  b.r_grid_ = std::move(r_grid);
  b.t_grid_ = std::move(t_grid);
  b.values_ = std::move(values);
  return b;
}

const KFun& KLFun::q() const {
  if (!q_) throw UnsupportedError("tabulated KL envelope has no closed-form numerator");
  return *q_;
}

double KLFun::operator()(double r, double t) const {
  require_level(r, "KL level");
  require_level(t, "KL time");
  if (q_) return (*q_)(r)*std::exp(-rate_ * t);
  if (r == 0.0) return 0.0;
  if (r > r_grid_.back()) {
    throw RangeError("KL table queried at r = " + std::to_string(r) + " above its grid");
  }
  t = std::clamp(t, t_grid_.front(), t_grid_.back());

  // Column index bracket in t.
  const auto tj = std::upper_bound(t_grid_.begin(), t_grid_.end(), t) - t_grid_.begin();
  const Eigen::Index j1 = std::clamp<Eigen::Index>(tj, 1, values_.cols() - 1);
  const Eigen::Index j0 = j1 - 1;
  const double wt = values_.cols() == 1 ? 0.0 : (t - t_grid_[j0]) / (t_grid_[j1] - t_grid_[j0]);
  auto column_at = [&](Eigen::Index i) {
    if (values_.cols() == 1) return values_(i, 0);
    return (1.0 - wt) * values_(i, j0) + wt * values_(i, j1);
  };

  double lo_r = 0.0, hi_r, lo_v = 0.0, hi_v;
  double lo_cap = 0.0, hi_cap;
  const auto ri = std::lower_bound(r_grid_.begin(), r_grid_.end(), r) - r_grid_.begin();
  if (ri == 0) {
    hi_r = r_grid_[0];
    hi_v = column_at(0);
    hi_cap = values_(0, values_.cols() == 1 ? 0 : j0);
  } else {
    lo_r = r_grid_[ri - 1];
    hi_r = r_grid_[ri];
    lo_v = column_at(ri - 1);
    hi_v = column_at(ri);
    lo_cap = values_(ri - 1, values_.cols() == 1 ? 0 : j1);
    hi_cap = values_(ri, values_.cols() == 1 ? 0 : j0);
  }
  const double wr = (r - lo_r) / (hi_r - lo_r);
  const double v = (1.0 - wr) * lo_v + wr * hi_v;
  // Monotone clamp: stay inside the cell's corner range.
  return std::clamp(v, lo_cap, hi_cap);
}

KLFun kl_envelope(const KFun& alpha, std::span<const double> r_grid,
                  std::span<const double> t_grid) {
  require_increasing(r_grid, "envelope level grid");
  require_increasing(t_grid, "envelope time grid");
  if (!(r_grid[0] > 0.0)) throw DomainError("envelope level grid must start above 0");
  if (t_grid[0] != 0.0) throw DomainError("envelope time grid must start at 0");
  require_positive_definite(alpha, r_grid.back());

  const auto rhs = [&alpha](double, double y) { return -alpha(std::max(y, 0.0)); };
  Eigen::MatrixXd values(r_grid.size(), t_grid.size());
  for (size_t i = 0; i < r_grid.size(); ++i) {
    const auto y = refined_flow(rhs, r_grid[i], t_grid, r_grid[i]);
    for (size_t j = 0; j < t_grid.size(); ++j) values(i, j) = y[j];
    values(i, 0) = r_grid[i];
  }
  return KLFun::tabulated({r_grid.begin(), r_grid.end()}, {t_grid.begin(), t_grid.end()},
                          std::move(values));
}

ComparisonAudit comparison_with_inputs(const KFun& alpha, double y0, std::span<const double> v,
                                       double horizon) {
  require_level(y0, "comparison initial value");
  if (v.size() < 2) throw DomainError("comparison input needs at least two samples");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  for (double s : v) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("input samples must be nonnegative");
  }
  const size_t m = v.size();
  const double dt = horizon / static_cast<double>(m - 1);
  std::vector<double> t(m);
  for (size_t k = 0; k < m; ++k) t[k] = dt * static_cast<double>(k);
  t.back() = horizon;

  require_positive_definite(alpha, std::max(1.0, y0));

  auto input_at = [&](double s) {
    const double pos = std::clamp(s / dt, 0.0, static_cast<double>(m - 1));
    const size_t k = std::min(static_cast<size_t>(pos), m - 2);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * v[k] + w * v[k + 1];
  };
  const auto rhs = [&](double s, double y) { return -alpha(std::max(y, 0.0)) + input_at(s); };
  const auto y = refined_flow(rhs, y0, t, std::max(1.0, y0));

  // beta(y0, t): the unforced flow. Not routed through kl_envelope, whose
  // table must stay positive; alpha non-Lipschitz at 0 reaches 0 in finite time.
  std::vector<double> free_decay(m, 0.0);
  if (y0 > 0.0) {
    free_decay = refined_flow([&](double, double z) { return -alpha(std::max(z, 0.0)); }, y0, t, y0);
  }

  ComparisonAudit out;
  out.t = t;
  out.y = y;
  out.bound.resize(m);
  double integral = 0.0;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < m; ++k) {
    if (k > 0) integral += 0.5 * dt * (v[k - 1] + v[k]);
    out.bound[k] = free_decay[k] + 2.0 * integral;
    const double margin = out.bound[k] - y[k];
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -1e-9 * std::max(1.0, out.bound[k])) out.pass = false;
  }
  return out;
}

SontagFactors sontag_factor(const KLFun& beta, double lambda) {
  if (!beta.is_closed_form()) {
    throw UnsupportedError(
        "sontag_factor supports only beta(r,t) = q(r)exp(-ct); tabulated envelopes are not "
        "factorized");
  }
  if (!(lambda > 0.0)) throw DomainError("sontag_factor: rate must be positive");
  if (lambda > beta.rate()) {
    throw InfeasibleError("sontag_factor: rate " + std::to_string(lambda) +
                          " exceeds the envelope decay rate " + std::to_string(beta.rate()));
  }
  SontagFactors out{KFun::identity(), beta.q(), std::numeric_limits<double>::infinity()};
  const auto rs = geometric_grid(1e-6, 1e6, 48);
  for (double r : rs) {
    for (int j = 0; j <= 40; ++j) {
      const double t = 0.25 * j;
      const double lhs = out.alpha1(beta(r, t));
      const double rhs = out.alpha2(r) * std::exp(-lambda * t);
      out.worst_margin = std::min(out.worst_margin, rhs - lhs);
      if (lhs > rhs * (1.0 + 1e-12)) {
        throw NumericalError("sontag_factor certificate failed at r = " + std::to_string(r));
      }
    }
  }
  return out;
}

}  // namespace isscert
