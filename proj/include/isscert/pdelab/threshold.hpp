#pragma once

#include <map>
#include <string>

namespace isscert {

/// Closed-form stability boundary: stable iff value < critical (or value >
/// critical when stable_above).
struct ThresholdInfo {
  std::string kind;
  std::string quantity;  // what `value` measures, e.g. "b" or "a+b"
  double critical = 0.0;
  bool stable_above = false;
  double value = 0.0;  // quantity evaluated at the given params (NaN if absent)

  // Signed distance to the boundary, positive on the stable side.
  double margin() const { return stable_above ? value - critical : critical - value; }
};

// Kinds: burgers (b vs pi^2/L^2), kuramoto-sivashinsky (lambda vs 4 pi^2/L^2),
// ginzburg-landau (a vs mu pi^2/4), coupled-linear-rd (|a12 a21| vs
// c1 c2 (pi/d)^4), coupled-nonlinear-rd (q1^2 (3q2/4)^4 vs 1, stable above),
// infinite-linear (a+b vs 1), infinite-cubic (max(a,b) vs 1), iiss-coupled
// (a + 3 pi^2/b vs 1). Missing non-critical params take model defaults.
// Throws ConfigError for other kinds.
ThresholdInfo stability_threshold(const std::string& kind,
                                  const std::map<std::string, double>& params);

}  // namespace isscert
