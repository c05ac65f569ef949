#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "isscert/dissipation.hpp"
#include "isscert/gain_operator.hpp"
#include "isscert/trajectory.hpp"

namespace isscert {

enum class DecayMode { NonStrict, Strict };

struct PathVerdict;

/// r -> (sigma_1(r), ..., sigma_n(r)) with K-infinity components.
class OmegaPath {
 public:
  explicit OmegaPath(std::vector<KFun> sigma, DecayMode mode = DecayMode::NonStrict);

  Vec operator()(double r) const;
  double inverse(int i, double v) const;

  int size() const { return static_cast<int>(sigma_.size()); }
  const std::vector<KFun>& components() const { return sigma_; }
  DecayMode mode() const { return mode_; }
  // Set by validate_path on success; compose_lyapunov requires it.
  bool certified() const { return certified_; }
  const std::vector<double>& grid() const { return grid_; }
  // Paths of the form t*s0 with Gamma(s0) <= lambda*s0 carry lambda.
  std::optional<double> decay_factor() const { return lambda_; }

 private:
  friend PathVerdict validate_path(const GainOperator&, const OmegaPath&,
                                          std::span<const double>);
  friend OmegaPath path_from_point(const GainOperator&, const Eigen::Ref<const Vec>&, double);
  std::vector<KFun> sigma_;
  std::vector<KFun> sigma_inv_;
  DecayMode mode_;
  bool certified_ = false;
  std::vector<double> grid_;
  std::optional<double> lambda_;
};

// Divided-difference bounds c <= |s^-1(r1) - s^-1(r2)| / |r1 - r2| <= C on
// [lo, hi].
struct LipschitzBound {
  int component;
  double lo, hi;
  double c, C;
};

struct PathVerdict {
  bool pass = true;
  double worst_margin = 0.0;  // min over grid and rows of sigma_i(r) - Gamma(sigma(r))_i
  std::optional<double> worst_r;
  int worst_component = -1;
  std::vector<LipschitzBound> lipschitz;
  std::vector<std::string> notes;
  std::optional<OmegaPath> certified;  // copy of the path with certified() set
};

// Geometric grid used when no grid is given: 64 points in [1e-9, 1e9].
std::vector<double> default_path_grid();

PathVerdict validate_path(const GainOperator& op, const OmegaPath& sigma,
                          std::span<const double> r_grid);
inline PathVerdict validate_path(const GainOperator& op, const OmegaPath& sigma) {
  const auto g = default_path_grid();
  return validate_path(op, sigma, g);
}

// sigma = (id, sqrt(chi21 * chi12^-1)), validated. Throws InfeasibleError
// when chi12 o chi21 < id fails on the probe grid.
OmegaPath two_system_path(const KFun& chi12, const KFun& chi21);

// Ray path t*s0 for homogeneous operators; throws InfeasibleError naming the
// first component with Gamma(s0)_i > lambda * s0_i.
OmegaPath path_from_point(const GainOperator& op, const Eigen::Ref<const Vec>& s0, double lambda);

// Two-node max-form operator with gains chi12 (row 0) and chi21 (row 1).
GainOperator two_system_operator(const KFun& chi12, const KFun& chi21);

using SubsystemLF = std::function<double(const Eigen::Ref<const Vec>&)>;

struct StateSlice {
  Eigen::Index offset;
  Eigen::Index size;
};

/// V(x) = max_i sigma_i^-1(V_i(x_i)), chi(r) = max_i sigma_i^-1(chi_i(r)).
class CompositeLF {
 public:
  double operator()(const Eigen::Ref<const Vec>& x) const;
  double from_parts(const std::vector<double>& v) const;
  double gain(double r) const;
  const OmegaPath& path() const { return path_; }
  const std::vector<StateSlice>& slices() const { return slices_; }

 private:
  friend CompositeLF compose_lyapunov(std::vector<SubsystemLF>, std::vector<StateSlice>,
                                      const OmegaPath&, std::vector<std::optional<KFun>>);
  CompositeLF(std::vector<SubsystemLF> v, std::vector<StateSlice> s, OmegaPath p,
              std::vector<std::optional<KFun>> chi)
      : v_(std::move(v)), slices_(std::move(s)), path_(std::move(p)), chi_(std::move(chi)) {}
  std::vector<SubsystemLF> v_;
  std::vector<StateSlice> slices_;
  OmegaPath path_;
  std::vector<std::optional<KFun>> chi_;
};

// Throws ConfigError for an uncertified path (run validate_path first) and
// ShapeError when the counts disagree. A missing chi_i is the zero gain.
CompositeLF compose_lyapunov(std::vector<SubsystemLF> V, std::vector<StateSlice> slices,
                             const OmegaPath& sigma, std::vector<std::optional<KFun>> chi);

// Level-set audit: wherever V(x(t)) >= chi(|u(t)|), the forward difference
// (V(t+dt) - V(t))/dt must stay <= -margin + max(1e-8, 1e-2 |V|).
// u_norm holds one value per sample or a single constant.
DissipationReport dissipation_audit(const CompositeLF& clf, const Trajectory& traj,
                                    std::span<const double> u_norm, double margin = 0.0);

}  // namespace isscert
