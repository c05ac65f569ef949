#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isscert/gain_operator.hpp"

namespace isscert {

struct SmallGainMode {
  enum class Kind { NoJointIncrease, Strong, Uniform, Robust };
  Kind kind = Kind::NoJointIncrease;
  std::optional<KFun> param;  // rho, eta or omega

  static SmallGainMode no_joint_increase() { return {}; }
  static SmallGainMode strong(KFun rho) { return {Kind::Strong, std::move(rho)}; }
  static SmallGainMode uniform(KFun eta) { return {Kind::Uniform, std::move(eta)}; }
  static SmallGainMode robust(KFun omega) { return {Kind::Robust, std::move(omega)}; }
};

const char* to_string(SmallGainMode::Kind k);

struct SamplingOptions {
  int rays = 256;
  int levels = 49;      // geometric levels per ray in [level_lo, level_hi]
  double level_lo = 1e-6;
  double level_hi = 1e6;
  std::uint64_t seed = 1;
  int workers = 0;      // 0: hardware concurrency
  int cycle_cap = 12;   // exhaustive cycle witnesses up to this size
};

enum class Verdict { Pass, PassSampled, Fail };
const char* to_string(Verdict v);

struct SmallGainVerdict {
  SmallGainMode::Kind mode;
  Verdict verdict;
  std::optional<Vec> witness;
  std::optional<double> radius;
  int iterations = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string method;  // "exact-spectral", "sampled", ...
  std::vector<std::string> notes;
};

SmallGainVerdict check_small_gain(const GainOperator& op, const SmallGainMode& mode,
                                  const SamplingOptions& opts = {});

// Witness of Gamma(s) >= s built backwards along a cycle i1 -> ... -> ik with
// s_{i1} = level; zero off the cycle.
Vec cycle_witness(const GainMatrix& g, const std::vector<int>& cycle, double level);

// Sup-norm distance of y to the nonnegative orthant.
inline double dist_to_cone(const Eigen::Ref<const Vec>& y) {
  return y.size() ? std::max(0.0, (-y).maxCoeff()) : 0.0;
}

}  // namespace isscert
