#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isscert/kfun.hpp"
#include "isscert/kfun_json.hpp"

using namespace isscert;
using std::numbers::pi;

namespace {

// Root of f(x) = y by plain bisection, independent of the library.
template <class F>
double bisect(F f, double y, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<KFun> sample_trees() {
  const KFun lin = KFun::linear(2.0), sq = KFun::power(1.0, 2.0), sat = KFun::saturation(3.0);
  const KFun lg = KFun::log1p(1.0), cap = KFun::affine_cap(2.0, 1.0, 0.5);
  return {lin, sq, sat, lg, cap,
          compose(lin, sq), compose(sat, lg), pointwise_max(sq, lin), pointwise_min(lg, cap),
          lin + sat, geometric_mean(lin, sq), inverse(sq), compose(inverse(lin + lg), sq)};
}

}  // namespace

TEST(KFunEval, Primitives) {
  EXPECT_EQ(KFun::linear(2.0)(3.0), 6.0);
  EXPECT_EQ(KFun::log1p(1.0)(0.0), 0.0);
  EXPECT_DOUBLE_EQ(KFun::power(2.0, 0.5)(9.0), 6.0);
  EXPECT_DOUBLE_EQ(KFun::saturation(4.0)(1.0), 2.0);
  EXPECT_DOUBLE_EQ(KFun::affine_cap(2.0, 1.0, 0.5)(3.0), 3.0);
}

TEST(KFunEval, SaturatedDecayRateApproachesLimit) {
  // alpha(s) = 2 pi^2 s^2 / (1 + s^2)
  const KFun alpha = compose(KFun::saturation(2.0 * pi * pi), KFun::power(1.0, 2.0));
  EXPECT_NEAR(alpha(1e6) / (2.0 * pi * pi), 1.0, 1e-4);
  EXPECT_EQ(alpha.fun_class(), FunClass::K);
}

TEST(KFunEval, RejectsBadArguments) {
  const KFun f = KFun::linear(1.0);
  EXPECT_THROW(f(-1.0), DomainError);
  EXPECT_THROW(f(std::nan("")), DomainError);
  EXPECT_THROW(f(INFINITY), DomainError);
}

TEST(KFunCompose, Examples) {
  EXPECT_DOUBLE_EQ(compose(KFun::linear(2.0), KFun::power(1.0, 2.0))(3.0), 18.0);
  const KFun f = compose(KFun::saturation(1.0), KFun::log1p(2.0));
  const KFun g = compose(f, KFun::identity());
  for (double r : geometric_grid(1e-6, 1e6, 64)) EXPECT_EQ(g(r), f(r));
}

TEST(KFunCompose, ClassTags) {
  EXPECT_EQ(compose(KFun::linear(2.0), KFun::power(1.0, 3.0)).fun_class(), FunClass::KInf);
  EXPECT_EQ(compose(KFun::saturation(1.0), KFun::linear(2.0)).fun_class(), FunClass::K);
  EXPECT_EQ(compose(KFun::linear(2.0), KFun::saturation(1.0)).fun_class(), FunClass::K);
}

TEST(KFunCompose, TwoLinearGainsWithProductTwo) {
  const double a = std::sqrt(2.0), b = std::sqrt(2.0);
  const KFun c = compose(KFun::linear(1.0 / a), KFun::linear(1.0 / b));
  EXPECT_TRUE(below_identity(c));
  EXPECT_NEAR(c(1.0), 0.5, 1e-15);
}

TEST(KFunInverse, Examples) {
  EXPECT_NEAR(inverse(KFun::power(1.0, 2.0))(4.0), 2.0, 1e-12);
  EXPECT_NEAR(inverse(KFun::linear(4.0))(3.0), 0.75, 1e-12);
  const KFun f = KFun::identity() + KFun::log1p(1.0);
  const double oracle = bisect([](double x) { return x + std::log1p(x); }, 1.0, 0.0, 1.0);
  EXPECT_NEAR(inverse(f)(1.0), oracle, 1e-11);
}

TEST(KFunInverse, Errors) {
  EXPECT_THROW(inverse(KFun::saturation(1.0)), ClassError);
  const KFun bounded = compose(KFun::linear(1.0), KFun::saturation(1.0));
  EXPECT_THROW(inverse(bounded), ClassError);
  // inverse of a K-infinity tree built around a bounded piece is still
  // queryable, but a K-infinity min with a bounded function is not K-infinity
  EXPECT_THROW(inverse(pointwise_min(KFun::linear(1.0), KFun::saturation(1.0))), ClassError);
}

TEST(KFunInverse, RoundTripOnProbeGrid) {
  for (const KFun& f : sample_trees()) {
    if (!f.is_kinf()) continue;
    const KFun fi = inverse(f);
    for (double r : geometric_grid(1e-6, 1e6, 128)) {
      EXPECT_NEAR(fi(f(r)), r, 1e-10 * std::max(1.0, r)) << f.describe() << " at " << r;
    }
  }
}

TEST(KFunProperties, StrictlyIncreasingAndZeroAtZero) {
  for (const KFun& f : sample_trees()) {
    EXPECT_EQ(f(0.0), 0.0) << f.describe();
    const auto g = geometric_grid(1e-6, 1e6, 128);
    for (size_t i = 1; i < g.size(); ++i) EXPECT_LT(f(g[i - 1]), f(g[i])) << f.describe();
    EXPECT_TRUE(probe_class(f).ok()) << f.describe();
  }
}

TEST(KFunProperties, WeakTriangleInequality) {
  const auto g = geometric_grid(1e-4, 1e4, 32);
  for (const KFun& f : sample_trees()) {
    for (double a : g) {
      for (double b : g) {
        EXPECT_LE(f(a + b), std::max(f(2 * a), f(2 * b)) * (1 + 1e-12)) << f.describe();
      }
    }
  }
}

TEST(KFunJson, RoundTrip) {
  for (const KFun& f : sample_trees()) {
    const KFun back = kfun_from_json(to_json(f));
    EXPECT_EQ(to_json(back), to_json(f));
    for (double r : geometric_grid(1e-3, 1e3, 16)) EXPECT_DOUBLE_EQ(back(r), f(r));
  }
}

TEST(KFunJson, RejectsMalformed) {
  using nlohmann::json;
  EXPECT_THROW(kfun_from_json(json{{"kind", "cubic"}}), ConfigError);
  EXPECT_THROW(kfun_from_json(json{{"kind", "linear"}}), ConfigError);
  EXPECT_THROW(kfun_from_json(json{{"kind", "linear"}, {"a", 1}, {"b", 2}}), ConfigError);
  EXPECT_THROW(kfun_from_json(json::array()), ConfigError);
}

TEST(KFunGrid, BelowIdentityWitness) {
  double w = 0.0;
  EXPECT_FALSE(below_identity(KFun::linear(1.0), 1e-9, 1e9, 64, &w));
  EXPECT_DOUBLE_EQ(w, 1e-9);
  EXPECT_TRUE(below_identity(KFun::saturation(1.0)));
}
