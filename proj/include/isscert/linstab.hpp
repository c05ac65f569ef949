#pragma once

#include <Eigen/Dense>

#include "isscert/errors.hpp"
#include "isscert/trajectory.hpp"

namespace isscert {

/// x' = Ax + Bu with dense A, or A = diag(spectrum) with spectrum < 0.
class LinModel {
 public:
  static LinModel dense(Eigen::MatrixXd A, Eigen::MatrixXd B);
  static LinModel diagonal(Eigen::VectorXd spectrum, Eigen::MatrixXd B);

  bool is_diagonal() const { return diagonal_; }
  int dim() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::VectorXd& spectrum() const { return spectrum_; }

  // e^{(A + shift I) t}
  Eigen::MatrixXd expm(double t, double shift = 0.0) const;
  // Largest real part of the spectrum.
  double abscissa() const;

 private:
  LinModel() = default;
  bool diagonal_ = false;
  Eigen::MatrixXd A_, B_;
  Eigen::VectorXd spectrum_;
};

struct DecayPair {
  double M = 1.0;
  double lambda = 0.0;
  bool sampled = false;  // M from time sampling (dense case)
};

// ||e^{At}|| <= M e^{-lambda t}; lambda = -abscissa - 1e-6. Throws
// InfeasibleError when the abscissa is >= 0.
DecayPair decay_pair(const LinModel& m);

/// x -> x^T P x with A^T P + P A = -I.
class QuadraticLyapunov {
 public:
  explicit QuadraticLyapunov(Eigen::MatrixXd P) : P_(std::move(P)) {}
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return x.dot(P_ * x); }
  const Eigen::MatrixXd& P() const { return P_; }

 private:
  Eigen::MatrixXd P_;
};

QuadraticLyapunov quad_lyap(const LinModel& m);
double lyapunov_residual(const LinModel& m, const QuadraticLyapunov& V);

/// V(x) = max_{0 <= s <= S} e^{gamma s} ||e^{As} x||, S = ln(2M)/(lambda - gamma).
class SupLyapunov {
 public:
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double gamma() const { return gamma_; }
  double horizon() const { return s_max_; }
  const DecayPair& decay() const { return decay_; }

 private:
  friend SupLyapunov sup_lyap(const LinModel&, double, int);
  SupLyapunov() = default;
  double gamma_ = 0.0;
  double s_max_ = 0.0;
  double h_ = 0.0;
  DecayPair decay_;
  Eigen::MatrixXd step_;  // e^{(A + gamma I) h}
  Eigen::MatrixXd shifted_;
};

// Throws InfeasibleError unless 0 < gamma < lambda.
SupLyapunov sup_lyap(const LinModel& m, double gamma, int samples = 1000);

struct EissGain {
  double M, lambda, G;  // ||x(t)|| <= M e^{-lambda t}||x0|| + G ||u||_inf
};

EissGain eiss_gain(const LinModel& m);

// Exact sampling of x' = Ax + Bu for a constant input on t = k*dt.
Trajectory simulate_linear(const LinModel& m, const Eigen::VectorXd& x0, const Eigen::VectorXd& u,
                           double T, double dt);

}  // namespace isscert
