#include <gtest/gtest.h>

#include "isscert/small_gain.hpp"

using namespace isscert;
using Eigen::MatrixXd;

namespace {

GainOperator two_system(const KFun& g12, const KFun& g21, Maf maf = Maf::max()) {
  GainMatrix g(2);
  g.set(0, 1, g12);
  g.set(1, 0, g21);
  return GainOperator(std::move(g), maf);
}

bool dominates(const Vec& a, const Vec& b) { return (a.array() >= b.array()).all(); }

}  // namespace

TEST(SmallGain, LinearMaxFormExact) {
  const auto v = check_small_gain(two_system(KFun::linear(0.5), KFun::linear(0.5)),
                                  SmallGainMode::no_joint_increase());
  EXPECT_EQ(v.verdict, Verdict::Pass);
  ASSERT_TRUE(v.radius);
  EXPECT_NEAR(*v.radius, 0.5, 1e-9);
  EXPECT_EQ(v.method, "exact-cycle-mean");
}

TEST(SmallGain, LinearSumFormExact) {
  const auto pass = check_small_gain(two_system(KFun::linear(0.3), KFun::linear(0.4), Maf::sum()),
                                     SmallGainMode::no_joint_increase());
  EXPECT_EQ(pass.verdict, Verdict::Pass);
  EXPECT_EQ(pass.method, "exact-spectral");

  const MatrixXd a{{0, 0.6, 0.6}, {0.6, 0, 0.6}, {0.6, 0.6, 0}};  // radius 1.2, every cycle < 1
  const auto op = GainOperator::sum_form(GainMatrix::from_linear(a));
  const auto fail = check_small_gain(op, SmallGainMode::no_joint_increase());
  EXPECT_EQ(fail.verdict, Verdict::Fail);
  ASSERT_TRUE(fail.witness);
  EXPECT_TRUE(dominates(op.apply(*fail.witness), *fail.witness));
  EXPECT_GT(fail.witness->maxCoeff(), 0.0);
}

TEST(SmallGain, SaturatingCycleIsSampledPass) {
  const auto v = check_small_gain(two_system(KFun::saturation(1.0), KFun::identity()),
                                  SmallGainMode::no_joint_increase());
  EXPECT_EQ(v.verdict, Verdict::PassSampled);
  EXPECT_GT(v.samples, 0);
  EXPECT_FALSE(v.notes.empty());
}

TEST(SmallGain, IdentityCycleFailsStrongMode) {
  const auto op = two_system(KFun::linear(2.0), KFun::linear(0.5));
  for (const KFun& rho : {KFun::power(1.0, 2.0), KFun::linear(1e-3), KFun::log1p(0.1)}) {
    const auto v = check_small_gain(op, SmallGainMode::strong(rho));
    ASSERT_EQ(v.verdict, Verdict::Fail) << rho.describe();
    ASSERT_TRUE(v.witness);
    Vec a = op.apply(*v.witness);
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] += rho(a[i]);
    EXPECT_TRUE(dominates(a, *v.witness));
  }
  // the base condition alone also fails: Gamma(s) = s on the cycle ray
  EXPECT_EQ(check_small_gain(op, SmallGainMode::no_joint_increase()).verdict, Verdict::Fail);
}

TEST(SmallGain, StrongModeWithLinearRhoScalesRadius) {
  const auto op = two_system(KFun::linear(0.5), KFun::linear(0.5));
  const auto pass = check_small_gain(op, SmallGainMode::strong(KFun::linear(0.9)));
  EXPECT_EQ(pass.verdict, Verdict::Pass);
  EXPECT_NEAR(*pass.radius, 0.95, 1e-9);
  EXPECT_EQ(check_small_gain(op, SmallGainMode::strong(KFun::linear(1.0))).verdict, Verdict::Fail);
}

TEST(SmallGain, UniformMode) {
  const auto op = two_system(KFun::linear(0.5), KFun::linear(0.5));
  // dist(Gamma(s) - s, cone) = max_i (s_i - Gamma(s)_i) >= s_max / 2
  EXPECT_NE(check_small_gain(op, SmallGainMode::uniform(KFun::linear(0.4))).verdict, Verdict::Fail);
  const auto v = check_small_gain(op, SmallGainMode::uniform(KFun::linear(0.6)));
  EXPECT_EQ(v.verdict, Verdict::Fail);
  ASSERT_TRUE(v.witness);
  EXPECT_LT(dist_to_cone(op.apply(*v.witness) - *v.witness), 0.6 * v.witness->maxCoeff());
}

TEST(SmallGain, RobustMode) {
  const auto weak = two_system(KFun::linear(0.25), KFun::linear(0.25));
  EXPECT_NE(check_small_gain(weak, SmallGainMode::robust(KFun::linear(0.5))).verdict, Verdict::Fail);
  // omega lifts gamma_12 to 0.9 + 0.5 > 1 along a cycle
  const auto strong = two_system(KFun::linear(0.9), KFun::linear(0.9));
  EXPECT_EQ(check_small_gain(strong, SmallGainMode::robust(KFun::linear(0.5))).verdict, Verdict::Fail);
}

TEST(SmallGain, MalformedModes) {
  const auto op = two_system(KFun::linear(0.5), KFun::linear(0.5));
  SmallGainMode missing;
  missing.kind = SmallGainMode::Kind::Strong;
  EXPECT_THROW(check_small_gain(op, missing), ConfigError);
  EXPECT_THROW(check_small_gain(op, SmallGainMode::strong(KFun::saturation(1.0))), ConfigError);
  EXPECT_THROW(check_small_gain(op, SmallGainMode::robust(KFun::linear(1.5))), ConfigError);
  SmallGainMode extra = SmallGainMode::no_joint_increase();
  extra.param = KFun::identity();
  EXPECT_THROW(check_small_gain(op, extra), ConfigError);
}

TEST(SmallGain, SampledVerdictIndependentOfWorkerCount) {
  // no cycle witness fails, so the random rays decide
  GainMatrix g(3);
  g.set(0, 1, compose(KFun::saturation(3.0), KFun::power(1.0, 2.0)));
  g.set(1, 2, KFun::power(1.0, 0.5));
  g.set(2, 0, KFun::log1p(1.2));
  const auto op = GainOperator::max_form(g);
  SamplingOptions one;
  one.workers = 1;
  one.seed = 42;
  SamplingOptions four = one;
  four.workers = 4;
  const auto a = check_small_gain(op, SmallGainMode::no_joint_increase(), one);
  const auto b = check_small_gain(op, SmallGainMode::no_joint_increase(), four);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.witness.has_value(), b.witness.has_value());
  if (a.witness && b.witness) EXPECT_EQ(*a.witness, *b.witness);
  if (a.witness) EXPECT_TRUE(dominates(op.apply(*a.witness), *a.witness));
}

TEST(SmallGain, CycleWitnessConstruction) {
  GainMatrix g(3);
  g.set(0, 1, KFun::linear(2.0));
  g.set(1, 2, KFun::linear(3.0));
  g.set(2, 0, KFun::linear(0.25));
  const Vec s = cycle_witness(g, {0, 1, 2}, 1.0);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[2], 0.25);
  EXPECT_DOUBLE_EQ(s[1], 0.75);
}

TEST(SmallGain, DistanceToCone) {
  EXPECT_EQ(dist_to_cone(Vec{{1.0, 2.0}}), 0.0);
  EXPECT_EQ(dist_to_cone(Vec{{1.0, -2.0}}), 2.0);
  EXPECT_EQ(dist_to_cone(Vec{{-0.5, -0.25}}), 0.5);
}
