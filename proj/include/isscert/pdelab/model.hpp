#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isscert {

enum class ModelKind {
  Transport,
  HeatReaction,
  Burgers,
  KuramotoSivashinsky,
  GinzburgLandau,
  CoupledLinearRd,
  CoupledNonlinearRd,
  IissRd,
  InfiniteLinear,
  InfiniteCubic,
  EnsembleS1,
};

enum class InputChannel { None, Distributed, BoundaryLeft, BoundaryNeumannLeft };

// "transport", "heat-reaction", "burgers", "kuramoto-sivashinsky",
// "ginzburg-landau", "coupled-linear-rd", "coupled-nonlinear-rd", "iiss-rd",
// "infinite-linear", "infinite-cubic", "ensemble-S1".
std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);  // ConfigError if unknown

// Parameter names per kind (defaults in brackets):
//   heat-reaction b[1], L[pi]        x_t = x_zz - b x^3 + u
//   burgers a[1] b                   x_t = x_zz + b x - a x x_z + u
//   kuramoto-sivashinsky lambda b[1] x_t = -x_zzzz - lambda x_zz - b x x_z + u
//   ginzburg-landau mu[1] a          x_t = mu x_zz + a x - x^3, x_z(0) = u
//   coupled-linear-rd c1[1] c2[1] a12 a21 d[pi]
//   coupled-nonlinear-rd q1 q2, L = pi
//   iiss-rd c[1] L[1]
//   infinite-linear / infinite-cubic a b K[64]
//   ensemble-S1 K[8]
struct ModelSpec {
  ModelKind kind = ModelKind::HeatReaction;
  std::map<std::string, double> params;
  int N = 256;
  std::optional<double> L;
  std::optional<double> dt;
};

struct ModelImpl;

/// Immutable assembled model; cheap to copy.
class PdeModel {
 public:
  ModelKind kind() const;
  InputChannel channel() const;
  bool is_grid() const;  // false for networks and the ensemble
  int N() const;          // grid intervals (nodes 0..N) or node count
  double L() const;
  double h() const;
  double dt() const;
  int components() const;  // 2 for the coupled kinds
  int state_size() const;
  int input_size() const;  // 0 for the ensemble
  double param(const std::string& name) const;
  Eigen::VectorXd nodes() const;  // z_i = i*h for grid kinds

  const ModelImpl& impl() const { return *impl_; }

 private:
  friend PdeModel build_model(const ModelSpec&);
  std::shared_ptr<const ModelImpl> impl_;
};

// Throws ConfigError for unknown or missing parameters, N < 16, or an
// explicit step above the stability bound (the message carries a suggested dt).
PdeModel build_model(const ModelSpec& spec);

/// Initial-state profiles, applied to every component of grid kinds.
///   zero, sine (amp sin(pi z/L)), multi-sine (modes 1..4 with amp/k),
///   random (band-limited, 8 modes, seeded), constant (amp; networks),
///   samples (inline values, length state_size()).
struct Profile {
  std::string name = "zero";
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  std::vector<double> samples;
};

Eigen::VectorXd initial_state(const PdeModel& m, const Profile& p);

using InputFn = std::function<Eigen::VectorXd(double t)>;

/// Scalar input signal broadcast over the input channel.
///   zero, const (value), sine (value * sin(2 pi freq t)), table (piecewise
///   linear over times/values, held constant outside).
struct Signal {
  std::string kind = "zero";
  double value = 0.0;
  double freq = 1.0;
  std::vector<double> times, values;

  double operator()(double t) const;
};

InputFn input_from_signal(const PdeModel& m, const Signal& s);

}  // namespace isscert
