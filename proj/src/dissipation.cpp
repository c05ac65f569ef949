#include "isscert/dissipation.hpp"

namespace isscert {

nlohmann::json to_json(const DissipationReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& e : r.violations) v.push_back({e.t, e.V, e.bound});
  return {{"samples", r.samples},   {"checked", r.checked},       {"violations", v},
          {"pass", r.pass},         {"worst_slack", r.worst_slack}, {"truncated", r.truncated},
          {"growing", r.growing},   {"warnings", r.warnings}};
}

}  // namespace isscert
