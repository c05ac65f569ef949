#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace isscert {

/// Time-sampled state history. Snapshots stop at blow-up.
struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> u;  // input snapshot per sample (may be empty)
  bool blew_up = false;
  std::optional<double> blowup_time;

  size_t size() const { return t.size(); }
  // Uniform sample spacing; throws ShapeError for fewer than two samples or
  // nonuniform spacing (relative 1e-9).
  double uniform_dt() const;
};

// Columns t, x_1..x_N.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace isscert
