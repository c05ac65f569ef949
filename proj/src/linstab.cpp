#include "isscert/linstab.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "isscert/errors.hpp"

namespace isscert {

namespace {

constexpr double kRateGuard = 1e-6;

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + " has non-finite entries");
}

}  // namespace

LinModel LinModel::dense(Eigen::MatrixXd A, Eigen::MatrixXd B) {
  if (A.rows() != A.cols() || A.rows() == 0) throw ShapeError("A must be square and nonempty");
  if (B.rows() != A.rows()) throw ShapeError("B must have as many rows as A");
  require_finite(A, "A");
  require_finite(B, "B");
  LinModel m;
  m.A_ = std::move(A);
  m.B_ = std::move(B);
  return m;
}

LinModel LinModel::diagonal(Eigen::VectorXd spectrum, Eigen::MatrixXd B) {
  if (spectrum.size() == 0) throw ShapeError("spectrum must be nonempty");
  if (B.rows() != spectrum.size()) throw ShapeError("B must have one row per mode");
  if (!(spectrum.array() < 0.0).all() || !spectrum.allFinite()) {
    throw DomainError("diagonal spectrum must be strictly negative");
  }
  require_finite(B, "B");
  LinModel m;
  m.diagonal_ = true;
  m.spectrum_ = std::move(spectrum);
  m.A_ = m.spectrum_.asDiagonal();
  m.B_ = std::move(B);
  return m;
}

Eigen::MatrixXd LinModel::expm(double t, double shift) const {
  if (diagonal_) {
    return ((spectrum_.array() + shift) * t).exp().matrix().asDiagonal();
  }
  const Eigen::MatrixXd At =
      (A_ + shift * Eigen::MatrixXd::Identity(dim(), dim())) * t;
  return At.exp();
}

double LinModel::abscissa() const {
  if (diagonal_) return spectrum_.maxCoeff();
  Eigen::EigenSolver<Eigen::MatrixXd> es(A_, false);
  return es.eigenvalues().real().maxCoeff();
}

DecayPair decay_pair(const LinModel& m) {
  const double a = m.abscissa();
  if (!(a < 0.0)) {
    throw InfeasibleError("not exponentially stable: spectral abscissa " + std::to_string(a) +
                          " >= 0");
  }
  DecayPair out;
  out.lambda = -a - kRateGuard;
  if (m.is_diagonal()) return out;

  // ||e^{(A + lambda I) t}|| sampled on a log grid that reaches past the
  // 1/guard time scale, then refined once around the maximum.
  out.sampled = true;
  const double scale = std::max(m.A().norm(), 1e-12);
  const double t_lo = 1e-3 / scale;
  const double t_hi = 20.0 / kRateGuard;
  constexpr int kPoints = 400;
  auto norm_at = [&](double t) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.expm(t, out.lambda));
    return svd.singularValues()(0);
  };
  std::vector<double> ts(kPoints);
  int best = 0;
  double best_v = 1.0;
  for (int k = 0; k < kPoints; ++k) {
    ts[k] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(k) / (kPoints - 1));
    const double v = norm_at(ts[k]);
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  const double lo = best > 0 ? ts[best - 1] : 0.0;
  const double hi = best + 1 < kPoints ? ts[best + 1] : ts[best];
  for (int k = 0; k <= 64; ++k) best_v = std::max(best_v, norm_at(lo + (hi - lo) * k / 64.0));
  out.M = std::max(1.0, best_v);
  return out;
}

QuadraticLyapunov quad_lyap(const LinModel& m) {
  const int n = m.dim();
  if (!(m.abscissa() < 0.0)) throw InfeasibleError("quad_lyap: A is not exponentially stable");
  if (m.is_diagonal()) {
    return QuadraticLyapunov((0.5 / m.spectrum().array().abs()).matrix().asDiagonal());
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd At = m.A().transpose();
  // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P) for column-major vec.
  const Eigen::MatrixXd K = Eigen::kroneckerProduct(I, At) + Eigen::kroneckerProduct(At, I);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) throw InfeasibleError("quad_lyap: Lyapunov operator is singular");
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(I.data(), n * n);
  Eigen::VectorXd p = lu.solve(rhs);
  p += lu.solve(rhs - K * p);  // one step of iterative refinement
  Eigen::MatrixXd P = Eigen::Map<Eigen::MatrixXd>(p.data(), n, n);
  P = 0.5 * (P + P.transpose());
  return QuadraticLyapunov(std::move(P));
}

double lyapunov_residual(const LinModel& m, const QuadraticLyapunov& V) {
  const int n = m.dim();
  return (m.A().transpose() * V.P() + V.P() * m.A() + Eigen::MatrixXd::Identity(n, n)).norm();
}

double SupLyapunov::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != step_.rows()) throw ShapeError("sup_lyap: wrong state length");
  const int samples = static_cast<int>(std::lround(s_max_ / h_));
  Eigen::VectorXd y = x;
  double best = y.norm();
  int arg = 0;
  for (int k = 1; k <= samples; ++k) {
    y = step_ * y;
    const double v = y.norm();
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  if (arg == 0 && samples > 0) {
    // A maximum at s = 0 is exact when the derivative there is <= 0.
    if (x.dot(shifted_ * x) <= 0.0) return best;
  }
  // Golden-section refinement on the bracketing samples.
  auto f = [&](double s) {
    const Eigen::MatrixXd E = (shifted_ * s).exp();
    return (E * x).norm();
  };
  double a = std::max(0.0, (arg - 1) * h_);
  double b = std::min(s_max_, (arg + 1) * h_);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 30; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({best, fc, fd});
}

SupLyapunov sup_lyap(const LinModel& m, double gamma, int samples) {
  const DecayPair dp = decay_pair(m);
  if (!(gamma > 0.0) || !(gamma < dp.lambda)) {
    throw InfeasibleError("sup_lyap: gamma must lie in (0, lambda) with lambda = " +
                          std::to_string(dp.lambda));
  }
  SupLyapunov V;
  V.gamma_ = gamma;
  V.decay_ = dp;
  V.s_max_ = std::log(2.0 * dp.M) / (dp.lambda - gamma);
  V.h_ = V.s_max_ / std::max(1, samples);
  V.shifted_ = m.A() + gamma * Eigen::MatrixXd::Identity(m.dim(), m.dim());
  V.step_ = m.expm(V.h_, gamma);
  return V;
}

EissGain eiss_gain(const LinModel& m) {
  const DecayPair dp = decay_pair(m);
  const double b = m.B().size() ? Eigen::JacobiSVD<Eigen::MatrixXd>(m.B()).singularValues()(0) : 0.0;
  return {dp.M, dp.lambda, dp.M * b / dp.lambda};
}

Trajectory simulate_linear(const LinModel& m, const Eigen::VectorXd& x0, const Eigen::VectorXd& u,
                           double T, double dt) {
  const int n = m.dim();
  const int k = static_cast<int>(m.B().cols());
  if (x0.size() != n) throw ShapeError("simulate_linear: x0 has the wrong length");
  if (u.size() != k) throw ShapeError("simulate_linear: u has the wrong length");
  if (!(dt > 0.0) || !(T >= 0.0)) throw DomainError("simulate_linear: need dt > 0, T >= 0");
  // exp([[A, B], [0, 0]] dt) = [[E, F], [0, I]].
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + k, n + k);
  aug.topLeftCorner(n, n) = m.A();
  aug.topRightCorner(n, k) = m.B();
  const Eigen::MatrixXd ex = (aug * dt).exp();
  const Eigen::MatrixXd E = ex.topLeftCorner(n, n);
  const Eigen::VectorXd Fu = ex.topRightCorner(n, k) * u;

  Trajectory tr;
  const int steps = static_cast<int>(std::lround(T / dt));
  Eigen::VectorXd x = x0;
  for (int s = 0; s <= steps; ++s) {
    tr.t.push_back(s * dt);
    tr.x.push_back(x);
    tr.u.push_back(u);
    x = E * x + Fu;
  }
  return tr;
}

}  // namespace isscert
