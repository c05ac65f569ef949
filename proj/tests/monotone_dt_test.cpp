#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "isscert/monotone_dt.hpp"

using namespace isscert;
using Eigen::MatrixXd;

namespace {

GainOperator scalar(double a) {
  return GainOperator::sum_form(GainMatrix::from_linear(MatrixXd::Constant(1, 1, a), true));
}

GainOperator two_node(double g12, double g21, Maf maf) {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a(0, 1) = g12;
  a(1, 0) = g21;
  return GainOperator(GainMatrix::from_linear(a), maf);
}

}  // namespace

TEST(DtSimulate, GeometricDecay) {
  const auto tr = simulate(scalar(0.5), Vec::Ones(1), {Vec::Zero(1)}, 20);
  ASSERT_EQ(tr.x.size(), 21u);
  for (int k = 0; k <= 20; ++k) EXPECT_EQ(tr.x[k][0], std::ldexp(1.0, -k));
}

TEST(DtSimulate, ConstantInputGeometricSeries) {
  const auto tr = simulate(scalar(0.5), Vec::Zero(1), {Vec::Ones(1)}, 30);
  for (int k = 0; k <= 30; ++k) EXPECT_NEAR(tr.x[k][0], 2.0 * (1.0 - std::pow(0.5, k)), 1e-15);
}

TEST(DtSimulate, MaxFormMatchesPowerApply) {
  const auto op = two_node(0.5, 0.5, Maf::max());
  const auto tr = simulate(op, Vec::Ones(2), {Vec::Zero(2)}, 10);
  for (int k = 1; k <= 10; ++k) {
    EXPECT_EQ(tr.x[k], power_apply(op, k, Vec::Ones(2)));
    EXPECT_EQ(tr.x[k][0], std::ldexp(1.0, -k));
  }
}

TEST(DtSimulate, RejectsNegativeData) {
  EXPECT_THROW(simulate(scalar(0.5), -Vec::Ones(1), {Vec::Zero(1)}, 3), DomainError);
  EXPECT_THROW(simulate(scalar(0.5), Vec::Ones(1), {-Vec::Ones(1)}, 3), DomainError);
}

TEST(DtSimulate, CsvLayout) {
  const auto tr = simulate(scalar(0.5), Vec::Ones(1), {Vec::Zero(1)}, 2);
  std::ostringstream os;
  write_csv(os, tr);
  EXPECT_EQ(os.str(), "k,x_1,u_1\n0,1,0\n1,0.5,0\n2,0.25,\n");
}

TEST(DtSimulate, OverSolutionsStayAbove) {
  // x(k+1) >= A(x(k)) + u(k) started above the equality solution stays above it
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto op = two_node(0.7, 0.6, Maf::sum());
  const std::vector<Vec> input{Vec{{0.3, 0.1}}};
  const auto eq = simulate(op, Vec{{1.0, 2.0}}, input, 25);
  Vec over = eq.x[0] + Vec{{0.1, 0.0}};
  for (int k = 1; k <= 25; ++k) {
    over = op.apply(over) + input[0] + Vec::NullaryExpr(2, [&] { return 0.1 * u(rng); });
    EXPECT_TRUE((over.array() >= eq.x[k].array()).all());
  }
}

TEST(EissFit, Examples) {
  const auto geo = simulate(scalar(0.5), Vec::Ones(1), {Vec::Zero(1)}, 20);
  const auto ok = eiss_fit(geo, 1.0, 0.5, std::nullopt);
  EXPECT_TRUE(ok.pass);
  EXPECT_EQ(ok.worst_margin, 0.0);

  const double w = 0.7;
  const auto forced = simulate(scalar(0.5), Vec::Constant(1, 3.0), {Vec::Constant(1, w)}, 40);
  EXPECT_TRUE(eiss_fit(forced, 1.0, 0.5, KFun::linear(2.0)).pass);

  const auto bad = eiss_fit(geo, 1.0, 0.4, std::nullopt);
  EXPECT_FALSE(bad.pass);
  ASSERT_TRUE(bad.first_violation);
  EXPECT_EQ(*bad.first_violation, 1);
}

TEST(MbiProbe, Examples) {
  const auto half = mbi_probe(scalar(0.5), 2000, KFun::linear(2.0), 9);
  EXPECT_EQ(half.verdict, Verdict::PassSampled);
  EXPECT_LE(half.worst_ratio, 1.0 + 1e-12);
  EXPECT_EQ(half.trials, 2000);

  const auto id = mbi_probe(scalar(1.0), 500, KFun::linear(1e3), 9);
  EXPECT_EQ(id.verdict, Verdict::Fail);
  ASSERT_TRUE(id.v_witness && id.w_witness);
  EXPECT_GT(id.v_witness->maxCoeff(), 1e3 * id.w_witness->maxCoeff());

  const auto zero = mbi_probe(GainOperator::max_form(GainMatrix(3)), 500, KFun::identity(), 9);
  EXPECT_EQ(zero.verdict, Verdict::PassSampled);
}

TEST(MbiProbe, SumFormMatchesNeumannBound) {
  // ||(I - A)^{-1}||_inf bounds ||v|| / ||w|| for sum-form A with r(A) < 1
  const MatrixXd a{{0, 0.3}, {0.4, 0}};
  const double bound = (MatrixXd::Identity(2, 2) - a).inverse().cwiseAbs().rowwise().sum().maxCoeff();
  const auto op = GainOperator::sum_form(GainMatrix::from_linear(a));
  EXPECT_EQ(mbi_probe(op, 3000, KFun::linear(bound * (1 + 1e-9)), 2).verdict, Verdict::PassSampled);
}

TEST(BuildLyapunov, ScalarIsNorm) {
  const DtLyapunov V = build_lyapunov(scalar(0.5), 1.5);
  for (double x : {0.0, 0.3, 1.0, 17.0}) EXPECT_DOUBLE_EQ(V(Vec::Constant(1, x)), x);
  EXPECT_EQ(V(Vec::Zero(1)), 0.0);
}

TEST(BuildLyapunov, SumFormDissipationAndSandwich) {
  const auto op = two_node(0.3, 0.4, Maf::sum());
  const DtLyapunov V = build_lyapunov(op, 2.0, 3);
  EXPECT_GE(V.certified_samples(), 1000);
  EXPECT_GE(V.worst_margin(), 0.0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Vec x = Vec::NullaryExpr(2, [&] { return 5.0 * u(rng); });
    const Vec in = Vec::NullaryExpr(2, [&] { return u(rng); });
    const double vx = V(x);
    EXPECT_LE(x.lpNorm<Eigen::Infinity>(), vx * (1 + 1e-12));
    EXPECT_LE(vx, V.psi() * x.lpNorm<Eigen::Infinity>() * (1 + 1e-12));
    EXPECT_LE(V(op.apply(x) + in), vx / V.eta() + V.psi() * in.lpNorm<Eigen::Infinity>() + 1e-12);
  }
}

TEST(BuildLyapunov, EissBoundFromLyapunovConstants) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int inst = 0; inst < 10; ++inst) {
    MatrixXd a = MatrixXd::NullaryExpr(3, 3, [&] { return u(rng); });
    a.diagonal().setZero();
    for (const Maf& maf : {Maf::max(), Maf::sum()}) {
      auto op = GainOperator(GainMatrix::from_linear(a), maf);
      const double r = spectral_radius(op).radius;
      op = GainOperator(GainMatrix::from_linear(a * (0.8 / r)), maf);
      const double eta = 1.1;
      const DtLyapunov V = build_lyapunov(op, eta, inst);
      const Vec w = Vec::NullaryExpr(3, [&] { return u(rng); });
      const auto tr = simulate(op, Vec::Constant(3, 4.0), {w}, 60);
      const double psi = V.psi();
      EXPECT_TRUE(eiss_fit(tr, psi, 1.0 / eta, KFun::linear(psi * eta / (eta - 1.0))).pass);
    }
  }
}

TEST(BuildLyapunov, Errors) {
  EXPECT_THROW(build_lyapunov(scalar(0.5), 2.0), InfeasibleError);
  GainMatrix g(2);
  g.set(0, 1, KFun::saturation(0.5));
  EXPECT_THROW(build_lyapunov(GainOperator::max_form(g), 1.1), UnsupportedError);
}
