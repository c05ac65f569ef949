#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "isscert/gain_operator.hpp"
#include "isscert/network_json.hpp"

using namespace isscert;
using Eigen::MatrixXd;

namespace {

GainOperator max_linear(const MatrixXd& a) { return GainOperator::max_form(GainMatrix::from_linear(a)); }
GainOperator sum_linear(const MatrixXd& a) { return GainOperator::sum_form(GainMatrix::from_linear(a)); }

MatrixXd two_node(double g12, double g21) {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a(0, 1) = g12;
  a(1, 0) = g21;
  return a;
}

// Random nonnegative matrix with zero diagonal and about half the arcs present.
MatrixXd random_gains(int n, std::mt19937_64& rng, double scale = 1.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatrixXd a = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && u(rng) < 0.5) a(i, j) = scale * u(rng);
    }
  }
  return a;
}

// Gamma^k(s)_i = max over paths i = j0 -> j1 -> ... -> jk of
// gamma_{j0 j1} o ... o gamma_{j(k-1) jk}(s_jk), enumerated directly.
double path_sup(const GainOperator& op, int i, int k, const Vec& s) {
  if (k == 0) return s[i];
  double best = 0.0;
  for (int j = 0; j < op.size(); ++j) {
    const auto& g = op.gains()(i, j);
    if (g) best = std::max(best, (*g)(path_sup(op, j, k - 1, s)));
  }
  return best;
}

// Largest geometric mean over simple cycles, by brute force.
double max_cycle_mean(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  double best = 0.0;
  std::vector<int> path;
  std::vector<bool> used(n, false);
  std::function<void(int, double)> walk = [&](int v, double prod) {
    for (int w = 0; w < n; ++w) {
      if (a(v, w) <= 0.0) continue;
      if (w == path[0]) best = std::max(best, std::pow(prod * a(v, w), 1.0 / path.size()));
      if (w > path[0] && !used[w]) {
        used[w] = true;
        path.push_back(w);
        walk(w, prod * a(v, w));
        path.pop_back();
        used[w] = false;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, false);
    used[s] = true;
    walk(s, 1.0);
  }
  return best;
}

}  // namespace

TEST(GainMatrix, DiagonalForcedZero) {
  GainMatrix g(3);
  EXPECT_THROW(g.set(1, 1, KFun::linear(0.5)), ShapeError);
  EXPECT_THROW(g.set(0, 3, KFun::linear(0.5)), ShapeError);
  GainMatrix d(3, true);
  EXPECT_NO_THROW(d.set(1, 1, KFun::linear(0.5)));
  MatrixXd a = MatrixXd::Identity(2, 2);
  EXPECT_THROW(GainMatrix::from_linear(a), ShapeError);
}

TEST(GainOperatorApply, Examples) {
  const Vec r1 = max_linear(two_node(0.5, 0.5)).apply(Vec::Ones(2));
  EXPECT_DOUBLE_EQ(r1[0], 0.5);
  EXPECT_DOUBLE_EQ(r1[1], 0.5);
  const Vec r2 = sum_linear(two_node(0.3, 0.4)).apply(Vec{{1.0, 2.0}});
  EXPECT_DOUBLE_EQ(r2[0], 0.6);
  EXPECT_DOUBLE_EQ(r2[1], 0.4);
  GainMatrix nl(2);
  nl.set(0, 1, KFun::saturation(1.0));
  nl.set(1, 0, KFun::power(1.0, 2.0));
  for (const auto& op : {max_linear(two_node(0.5, 0.5)), sum_linear(two_node(0.3, 0.4)),
                         GainOperator::max_form(nl)}) {
    EXPECT_EQ(op.apply(Vec::Zero(2)), Vec::Zero(2));
  }
}

TEST(GainOperatorApply, Errors) {
  const auto op = max_linear(two_node(0.5, 0.5));
  EXPECT_THROW(op.apply(Vec{{1.0, -1.0}}), DomainError);
  EXPECT_THROW(op.apply(Vec::Ones(3)), ShapeError);
}

TEST(GainOperatorApply, MonotoneHomogeneousSubadditive) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int inst = 0; inst < 8; ++inst) {
    const MatrixXd a = random_gains(5, rng);
    for (const auto& op : {max_linear(a), sum_linear(a),
                           GainOperator(GainMatrix::from_linear(a), Maf::pnorm(2.0))}) {
      for (int t = 0; t < 32; ++t) {
        const Vec s1 = Vec::NullaryExpr(5, [&] { return 10.0 * u(rng); });
        const Vec s2 = s1 + Vec::NullaryExpr(5, [&] { return u(rng); });
        EXPECT_TRUE((op.apply(s1).array() <= op.apply(s2).array()).all());
        const double c = 10.0 * u(rng);
        EXPECT_LE((op.apply(c * s1) - c * op.apply(s1)).lpNorm<Eigen::Infinity>(),
                  1e-12 * std::max(1.0, c * op.apply(s1).lpNorm<Eigen::Infinity>()));
        const Vec sum = op.apply(s1) + op.apply(s2);
        EXPECT_TRUE((op.apply(s1 + s2).array() <= sum.array() * (1 + 1e-12)).all());
      }
    }
  }
}

TEST(Maf, PNormAxioms) {
  EXPECT_TRUE(probe_maf(Maf::pnorm(2.0), 4, 11).ok());
  EXPECT_TRUE(probe_maf(Maf::max(), 4, 11).ok());
  EXPECT_TRUE(probe_maf(Maf::sum(), 4, 11).ok());
  EXPECT_THROW(Maf::pnorm(0.5), ConfigError);
  EXPECT_NEAR(Maf::pnorm(2.0)(Vec{{3.0, 4.0}}), 5.0, 1e-14);
}

TEST(PowerApply, Examples) {
  const Vec r = power_apply(max_linear(two_node(0.5, 0.5)), 2, Vec::Ones(2));
  EXPECT_DOUBLE_EQ(r[0], 0.25);
  EXPECT_DOUBLE_EQ(r[1], 0.25);
  MatrixXd c = MatrixXd::Zero(3, 3);
  c(0, 1) = 0.2;
  c(1, 2) = 0.3;
  c(2, 0) = 0.4;
  const Vec r3 = power_apply(max_linear(c), 3, Vec::Ones(3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r3[i], 0.024, 1e-15);
  const auto op = sum_linear(two_node(0.3, 0.4));
  EXPECT_EQ(power_apply(op, 1, Vec{{1.0, 2.0}}), op.apply(Vec{{1.0, 2.0}}));
}

TEST(PowerApply, MaxFormEqualsPathSupremum) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    for (int inst = 0; inst < 4; ++inst) {
      GainMatrix g(n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j || u(rng) < 0.4) continue;
          const double a = 0.2 + u(rng);
          g.set(i, j, inst % 2 ? KFun::linear(a) : compose(KFun::saturation(2 * a), KFun::power(1.0, 1.5)));
        }
      }
      const auto op = GainOperator::max_form(g);
      const Vec s = Vec::NullaryExpr(n, [&] { return 3.0 * u(rng); });
      for (int k = 1; k <= 6; ++k) {
        const Vec got = power_apply(op, k, s);
        for (int i = 0; i < n; ++i) EXPECT_EQ(got[i], path_sup(op, i, k, s)) << n << " " << k;
      }
    }
  }
}

TEST(CycleReport, Examples) {
  const auto c1 = cycle_report(GainMatrix::from_linear(two_node(0.5, 0.5)));
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_DOUBLE_EQ(c1[0].composed(1.0), 0.25);
  EXPECT_TRUE(c1[0].contraction);

  GainMatrix g(2);
  g.set(0, 1, KFun::saturation(1.0));
  g.set(1, 0, KFun::identity());
  const auto c2 = cycle_report(g);
  ASSERT_EQ(c2.size(), 1u);
  EXPECT_TRUE(c2[0].contraction);

  MatrixXd c = MatrixXd::Zero(3, 3);
  c(0, 1) = 1.0;
  c(1, 2) = 1.2;
  c(2, 0) = 1.0;
  const auto c3 = cycle_report(GainMatrix::from_linear(c));
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_FALSE(c3[0].contraction);
  EXPECT_TRUE(c3[0].witness.has_value());
}

TEST(CycleReport, SizeCap) {
  EXPECT_THROW(cycle_report(GainMatrix(13)), SizeError);
  EXPECT_NO_THROW(cycle_report(GainMatrix(13), 13));
}

TEST(SpectralRadius, Examples) {
  EXPECT_NEAR(spectral_radius(max_linear(two_node(0.5, 0.5))).radius, 0.5, 1e-9);
  EXPECT_NEAR(spectral_radius(sum_linear(two_node(0.3, 0.4))).radius, std::sqrt(0.12), 1e-9);
  const auto zero = spectral_radius(max_linear(MatrixXd::Zero(3, 3)));
  EXPECT_EQ(zero.radius, 0.0);
  EXPECT_TRUE(zero.converged);
}

TEST(SpectralRadius, ThreeCycleWithChord) {
  // cycles 0->1->2->0 (product 3.315) and 1->2->1 (product 1.53)
  const MatrixXd a{{0, 1.3, 0}, {0, 0, 1.7}, {1.5, 0.9, 0}};
  const auto r = spectral_radius(max_linear(a));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.radius, std::cbrt(3.315), 1e-9);
}

TEST(SpectralRadius, MaxFormMatchesCycleMean) {
  std::mt19937_64 rng(17);
  for (int inst = 0; inst < 60; ++inst) {
    const int n = 2 + inst % 7;
    const MatrixXd a = random_gains(n, rng);
    const auto r = spectral_radius(max_linear(a));
    EXPECT_TRUE(r.converged) << a;
    EXPECT_NEAR(r.radius, max_cycle_mean(a), 1e-9 * std::max(1.0, r.radius)) << a;
  }
}

TEST(SpectralRadius, SumFormMatchesEigenvalues) {
  std::mt19937_64 rng(19);
  for (int inst = 0; inst < 40; ++inst) {
    const int n = 2 + inst % 6;
    MatrixXd a = random_gains(n, rng, 1.0);
    // irreducible: close the cycle 0 -> 1 -> ... -> n-1 -> 0
    for (int i = 0; i < n; ++i) a(i, (i + 1) % n) = std::max(a(i, (i + 1) % n), 0.3);
    const double oracle = a.eigenvalues().cwiseAbs().maxCoeff();
    const auto r = spectral_radius(sum_linear(a));
    EXPECT_TRUE(r.converged) << a;
    EXPECT_NEAR(r.radius, oracle, 1e-8 * std::max(1.0, oracle)) << a;
  }
}

TEST(SpectralRadius, NearlyPeriodicSumFormReportsNonConvergence) {
  // eigenvalues 0.63785 and -0.63586: the orbit oscillates for thousands of steps
  const MatrixXd a{{0, 0.55171757715300984, 0, 0, 0},
                   {0, 0, 0.31121788666039746, 0, 0},
                   {0, 0, 0, 0.43003012761627335, 0},
                   {0.72928588510858428, 0.0080142351653262178, 0.63442824163538492, 0,
                    0.74128076548441668},
                   {0, 0, 0, 0, 0}};
  const auto r = spectral_radius(sum_linear(a));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2000);
  EXPECT_NEAR(r.radius, 0.6378543426966456, 1e-4);
  const auto longer = spectral_radius(sum_linear(a), 20000);
  EXPECT_TRUE(longer.converged);
  EXPECT_NEAR(longer.radius, 0.6378543426966456, 1e-8);
}

TEST(SpectralRadius, NonlinearUnsupported) {
  GainMatrix g(2);
  g.set(0, 1, KFun::saturation(1.0));
  EXPECT_THROW(spectral_radius(GainOperator::max_form(g)), UnsupportedError);
}

TEST(KleeneStar, Examples) {
  const auto op = max_linear(two_node(0.5, 0.5));
  EXPECT_EQ(kleene_star(op, Vec::Zero(2)).q, Vec::Zero(2));
  EXPECT_EQ(kleene_star(op, Vec::Ones(2)).q, Vec::Ones(2));
  EXPECT_THROW(kleene_star(max_linear(two_node(2.0, 1.0)), Vec::Ones(2)), DivergenceError);
  EXPECT_THROW(kleene_star(sum_linear(two_node(0.5, 0.5)), Vec::Ones(2)), UnsupportedError);
}

TEST(KleeneStar, FixedPointInequalitiesOnConvergentRuns) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int convergent = 0;
  for (int inst = 0; inst < 80; ++inst) {
    const int n = 2 + inst % 5;
    const auto op = max_linear(random_gains(n, rng));
    const Vec s = Vec::NullaryExpr(n, [&] { return u(rng); });
    try {
      const Vec q = kleene_star(op, s).q;
      ++convergent;
      EXPECT_TRUE((s.array() <= q.array()).all());
      EXPECT_TRUE((op.apply(q).array() <= q.array() * (1 + 1e-12)).all());
      EXPECT_LE(s.lpNorm<Eigen::Infinity>(), q.lpNorm<Eigen::Infinity>());
    } catch (const DivergenceError&) {
      EXPECT_GE(spectral_radius(op).radius, 1.0 - 1e-9);
    }
  }
  EXPECT_GT(convergent, 10);
}

TEST(NetworkJson, RoundTrip) {
  const nlohmann::json j = {
      {"n", 3},
      {"gains",
       {{{"i", 0}, {"j", 1}, {"gain", {{"kind", "linear"}, {"a", 0.5}}}},
        {{"i", 2}, {"j", 0}, {"gain", {{"kind", "saturation"}, {"a", 2.0}}}}}},
      {"aggregation", {"max", "sum", {{"kind", "pnorm"}, {"p", 2.0}}}}};
  const auto op = network_from_json(j);
  EXPECT_EQ(to_json(op), j);
  EXPECT_THROW(network_from_json({{"n", 2}, {"aggregation", "max"}, {"extra", 1}}), ConfigError);
  EXPECT_THROW(network_from_json({{"n", 2}, {"aggregation", "median"}}), ConfigError);
}

TEST(NetworkJson, SpatiallyInvariantRow) {
  const nlohmann::json j = {{"n", 6},
                            {"invariant_row",
                             {{{"offset", -1}, {"gain", {{"kind", "linear"}, {"a", 0.3}}}},
                              {{"offset", 1}, {"gain", {{"kind", "linear"}, {"a", 0.4}}}}}},
                            {"periodic", true},
                            {"aggregation", "sum"}};
  const auto op = network_from_json(j);
  EXPECT_NEAR(spectral_radius(op).radius, 0.7, 1e-9);
  EXPECT_DOUBLE_EQ(op.linear_matrix()(0, 5), 0.3);
  EXPECT_DOUBLE_EQ(op.linear_matrix()(5, 0), 0.4);
}
