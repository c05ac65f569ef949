#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "isscert/gain_operator.hpp"
#include "isscert/small_gain.hpp"

namespace isscert {

/// x(0..K) and u(0..K-1) of x(k+1) <= A(x(k)) + u(k).
struct DtTrajectory {
  std::vector<Vec> x;
  std::vector<Vec> u;
  bool equality_mode = true;
};

// Equality iteration x(k+1) = A(x(k)) + u(k). u holds K inputs, or one input
// reused at every step.
DtTrajectory simulate(const GainOperator& op, const Eigen::Ref<const Vec>& x0,
                      const std::vector<Vec>& u, int K);

// Columns k, x_1..x_n, u_1..u_n; the last row leaves the u cells empty.
void write_csv(std::ostream& os, const DtTrajectory& traj);

struct EissAudit {
  bool pass = true;
  double worst_margin = 0.0;  // min_k of bound - ||x(k)||
  std::optional<int> first_violation;
};

// ||x(k)|| <= M ||x(0)|| a^k + gamma(||u||_inf), sup norms; no gamma means zero.
EissAudit eiss_fit(const DtTrajectory& traj, double M, double a,
                   const std::optional<KFun>& gamma);

struct MbiVerdict {
  Verdict verdict = Verdict::PassSampled;
  long trials = 0;
  std::uint64_t seed = 0;
  std::optional<Vec> v_witness;
  std::optional<Vec> w_witness;
  double worst_ratio = 0.0;  // max over trials of ||v|| / xi(||w||)
};

// Samples v >= 0, rho >= 0, sets w = max((id - A)(v) + rho, 0) and checks
// ||v|| <= xi(||w||).
MbiVerdict mbi_probe(const GainOperator& op, int trials, const KFun& xi, std::uint64_t seed = 1);

/// V(x) = max_{n < depth} eta^n ||A^n x||_inf for a homogeneous subadditive A.
class DtLyapunov {
 public:
  double operator()(const Eigen::Ref<const Vec>& x) const;

  const GainOperator& op() const { return op_; }
  double eta() const { return eta_; }
  int depth() const { return depth_; }
  double psi() const { return psi_; }

  // Result of the random dissipation check run at construction:
  // V(A(x)+u) <= V(x)/eta + psi ||u||.
  long certified_samples() const { return certified_samples_; }
  double worst_margin() const { return worst_margin_; }

 private:
  friend DtLyapunov build_lyapunov(const GainOperator&, double, std::uint64_t);
  DtLyapunov(GainOperator op, double eta) : op_(std::move(op)), eta_(eta) {}
  GainOperator op_;
  double eta_;
  int depth_ = 1;
  double psi_ = 1.0;
  long certified_samples_ = 0;
  double worst_margin_ = 0.0;
};

// Throws InfeasibleError when eta * r(A) >= 1, UnsupportedError for
// nonlinear gains, NumericalError when the dissipation check fails.
DtLyapunov build_lyapunov(const GainOperator& op, double eta, std::uint64_t seed = 1);

}  // namespace isscert
