#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace isscert {

struct DissipationViolation {
  double t;
  double V;
  double dV;     // forward-difference derivative estimate
  double bound;  // right-hand side it was compared against (tolerance included)
};

/// Per-sample audit of a decrease law along a trajectory.
struct DissipationReport {
  long samples = 0;  // derivative samples examined
  long checked = 0;  // samples where the law applied
  std::vector<DissipationViolation> violations;
  bool pass = true;
  double worst_slack = 0.0;  // min over checked samples of bound - dV
  bool truncated = false;    // trajectory blew up; audit stops there
  bool growing = false;      // last value above the first
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const DissipationReport& r);

}  // namespace isscert
