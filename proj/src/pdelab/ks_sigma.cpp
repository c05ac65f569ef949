#include "isscert/pdelab/ks_sigma.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "isscert/errors.hpp"

namespace isscert {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;

// Number of eigenvalues of A below s.
int count_below(const SparseMat& A, double s) {
  SparseMat I(A.rows(), A.cols());
  I.setIdentity();
  Eigen::SimplicialLDLT<SparseMat, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(A - s * I);
  if (ldlt.info() != Eigen::Success) return -1;
  return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
}

}  // namespace

SparseMat ks_operator(double lambda, int N, double L) {
  if (N < 8) throw DomainError("ks_operator: N must be >= 8");
  if (!std::isfinite(lambda) || !(L > 0.0)) throw DomainError("ks_operator: bad lambda or L");
  const int n = N - 1;
  const double h = L / N;
  const double s4 = 1.0 / std::pow(h, 4), s2 = lambda / (h * h);
  std::vector<Eigen::Triplet<double>> t;
  static constexpr double w4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
  for (int i = 1; i < N; ++i) {
    for (int k = 0; k < 5; ++k) {
      int j = i - 2 + k;
      if (j == -1) j = 1;
      if (j == N + 1) j = N - 1;
      if (j == 0 || j == N) continue;
      t.emplace_back(i - 1, j - 1, w4[k] * s4);
    }
    t.emplace_back(i - 1, i - 1, -2.0 * s2);
    if (i > 1) t.emplace_back(i - 1, i - 2, s2);
    if (i < N - 1) t.emplace_back(i - 1, i, s2);
  }
  SparseMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

double ks_sigma(double lambda, int N, double L) {
  const SparseMat A = ks_operator(lambda, N, L);
  const int n = static_cast<int>(A.rows());

  // Gershgorin lower bound and a Rayleigh-quotient upper bound.
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < A.outerSize(); ++k) {
    double diag = 0.0, off = 0.0;
    for (SparseMat::InnerIterator it(A, k); it; ++it) {
      if (it.row() == it.col()) {
        diag = it.value();
      } else {
        off += std::abs(it.value());
      }
    }
    lo = std::min(lo, diag - off);
  }
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double z = (i + 1.0) / N;
    v[i] = 1.0 - std::cos(2.0 * std::numbers::pi * z);  // clamped first mode shape
  }
  double hi = v.dot(A * v) / v.squaredNorm();
  // Sign counts are only trustworthy to about eps/h^4 in absolute terms, so
  // the bracket is kept coarse and the inverse iteration does the rest.
  const double resolution = 1e-3 * std::max(1.0, std::abs(hi));
  hi += resolution;
  if (count_below(A, hi) < 1) throw NumericalError("ks_sigma: bracket lost the lowest eigenvalue");

  for (int it = 0; it < 200 && hi - lo > resolution; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int c = count_below(A, mid);
    if (c < 0) {
      // Singular at the probe: the probe is an eigenvalue to machine precision.
      lo = hi = mid;
      break;
    }
    (c >= 1 ? hi : lo) = mid;
  }

  // Inverse iteration just below the bracket.
  const double shift = lo - resolution;
  SparseMat I(n, n);
  I.setIdentity();
  SparseMat S = A - shift * I;
  S.makeCompressed();
  Eigen::SparseLU<SparseMat> lu(S);
  if (lu.info() != Eigen::Success) throw NumericalError("ks_sigma: shifted factorization failed");
  v.normalize();
  double sigma = v.dot(A * v), prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    v = lu.solve(v);
    v.normalize();
    sigma = v.dot(A * v);
    if (std::abs(sigma - prev) <= 1e-8 * std::max(1.0, std::abs(sigma))) {
      return sigma;
    }
    prev = sigma;
  }
  throw NumericalError("ks_sigma: inverse iteration did not converge");
}

}  // namespace isscert
