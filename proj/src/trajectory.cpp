#include "isscert/trajectory.hpp"

#include <cmath>
#include <ostream>

#include "isscert/errors.hpp"

namespace isscert {

double Trajectory::uniform_dt() const {
  if (t.size() < 2) throw ShapeError("trajectory needs at least two samples");
  const double dt = t[1] - t[0];
  for (size_t k = 2; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)) + 1e-12 * t[k]) {
      throw ShapeError("trajectory samples are not uniformly spaced");
    }
  }
  return dt;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index n = traj.x.empty() ? 0 : traj.x[0].size();
  const auto old = os.precision(17);
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
  os << "\n";
  for (size_t k = 0; k < traj.t.size(); ++k) {
    os << traj.t[k];
    for (Eigen::Index i = 0; i < n; ++i) os << "," << traj.x[k][i];
    os << "\n";
  }
  os.precision(old);
}

}  // namespace isscert
