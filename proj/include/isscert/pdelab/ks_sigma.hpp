#pragma once

#include <Eigen/Sparse>

namespace isscert {

// d^4/dz^4 + lambda d^2/dz^2 on (0, L) with x = x_z = 0 at both ends, on the
// N - 1 interior nodes of a uniform grid (symmetric).
Eigen::SparseMatrix<double> ks_operator(double lambda, int N, double L = 1.0);

// Smallest eigenvalue of ks_operator: Sturm-count bisection on LDL^T
// inertia, then shifted inverse iteration to relative tolerance 1e-8.
// Throws NumericalError if the iteration does not settle.
double ks_sigma(double lambda, int N = 512, double L = 1.0);

}  // namespace isscert
