#pragma once

#include <Eigen/Dense>

namespace isscert {

// Trapezoid rule for samples f_0..f_N on a uniform grid of spacing h.
template <class D>
double trapezoid(const Eigen::MatrixBase<D>& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 2) return 0.0;
  return h * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

// sum_i h ((x_{i+1} - x_i)/h)^2
template <class D>
double h10_squared(const Eigen::MatrixBase<D>& x, double h) {
  const Eigen::Index n = x.size();
  if (n < 2) return 0.0;
  return (x.tail(n - 1) - x.head(n - 1)).squaredNorm() / h;
}

template <class D>
double l2_squared(const Eigen::MatrixBase<D>& x, double h) {
  return trapezoid(x.array().square().matrix(), h);
}

}  // namespace isscert
