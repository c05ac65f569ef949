#include "isscert/pdelab/threshold.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "isscert/errors.hpp"

namespace isscert {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double get(const std::map<std::string, double>& p, const char* k, double fallback) {
  auto it = p.find(k);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

ThresholdInfo stability_threshold(const std::string& kind,
                                  const std::map<std::string, double>& p) {
  ThresholdInfo t;
  t.kind = kind;
  if (kind == "burgers") {
    const double L = get(p, "L", 1.0);
    t.quantity = "b";
    t.critical = kPi * kPi / (L * L);
    t.value = get(p, "b", kNaN);
  } else if (kind == "kuramoto-sivashinsky") {
    const double L = get(p, "L", 1.0);
    t.quantity = "lambda";
    t.critical = 4.0 * kPi * kPi / (L * L);
    t.value = get(p, "lambda", kNaN);
  } else if (kind == "ginzburg-landau") {
    t.quantity = "a";
    t.critical = get(p, "mu", 1.0) * kPi * kPi / 4.0;
    t.value = get(p, "a", kNaN);
  } else if (kind == "coupled-linear-rd") {
    const double d = get(p, "d", kPi);
    t.quantity = "|a12*a21|";
    t.critical = get(p, "c1", 1.0) * get(p, "c2", 1.0) * std::pow(kPi / d, 4);
    t.value = std::abs(get(p, "a12", kNaN) * get(p, "a21", kNaN));
  } else if (kind == "coupled-nonlinear-rd") {
    t.quantity = "q1^2*(3*q2/4)^4";
    t.critical = 1.0;
    t.stable_above = true;
    const double q1 = get(p, "q1", kNaN), q2 = get(p, "q2", kNaN);
    t.value = q1 * q1 * std::pow(0.75 * q2, 4);
  } else if (kind == "infinite-linear") {
    t.quantity = "a+b";
    t.critical = 1.0;
    t.value = get(p, "a", kNaN) + get(p, "b", kNaN);
  } else if (kind == "infinite-cubic") {
    t.quantity = "max(a,b)";
    t.critical = 1.0;
    t.value = std::max(get(p, "a", kNaN), get(p, "b", kNaN));
  } else if (kind == "iiss-coupled") {
    t.quantity = "a+3*pi^2/b";
    t.critical = 1.0;
    t.value = get(p, "a", kNaN) + 3.0 * kPi * kPi / get(p, "b", kNaN);
  } else {
    throw ConfigError("no closed-form stability threshold for kind '" + kind + "'");
  }
  return t;
}

}  // namespace isscert
