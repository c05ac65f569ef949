#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "isscert/errors.hpp"
#include "isscert/pdelab/functional.hpp"
#include "isscert/pdelab/model.hpp"
#include "isscert/pdelab/simulate.hpp"

using namespace isscert;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

PdeModel make(ModelKind k, std::map<std::string, double> params, int N = 256,
              std::optional<double> dt = std::nullopt) {
  ModelSpec s;
  s.kind = k;
  s.params = std::move(params);
  s.N = N;
  s.dt = dt;
  return build_model(s);
}

InputFn zero_input(const PdeModel& m) { return input_from_signal(m, Signal{}); }

InputFn constant_input(const PdeModel& m, double c) {
  Signal s;
  s.kind = "const";
  s.value = c;
  return input_from_signal(m, s);
}

double l2_at(const PdeModel& m, const Trajectory& tr) {
  return std::sqrt(lyap_eval(m, LyapFunctional::l2(), tr.x.back()));
}

}  // namespace

TEST(BuildModel, CatalogExamples) {
  const PdeModel b = make(ModelKind::Burgers, {{"a", 1.0}, {"b", 5.0}});
  EXPECT_EQ(b.N(), 256);
  EXPECT_DOUBLE_EQ(b.L(), 1.0);
  EXPECT_EQ(b.state_size(), 257);
  EXPECT_EQ(b.channel(), InputChannel::Distributed);

  const PdeModel ks = make(ModelKind::KuramotoSivashinsky, {{"lambda", 20.0}});
  EXPECT_DOUBLE_EQ(ks.param("b"), 1.0);

  const PdeModel gl = make(ModelKind::GinzburgLandau, {{"mu", 1.0}, {"a", 3.0}});
  EXPECT_EQ(gl.channel(), InputChannel::BoundaryNeumannLeft);
  EXPECT_EQ(gl.input_size(), 1);

  const PdeModel rd = make(ModelKind::CoupledNonlinearRd, {{"q1", 1.5}, {"q2", 1.5}});
  EXPECT_EQ(rd.components(), 2);
  EXPECT_DOUBLE_EQ(rd.L(), pi);

  const PdeModel net = make(ModelKind::InfiniteLinear, {{"a", 0.3}, {"b", 0.5}, {"K", 32}});
  EXPECT_FALSE(net.is_grid());
  EXPECT_EQ(net.state_size(), 32);
  EXPECT_EQ(make(ModelKind::EnsembleS1, {{"K", 4}}).state_size(), 8);
}

TEST(BuildModel, ConfigErrors) {
  EXPECT_THROW(make(ModelKind::Burgers, {{"a", 1.0}}), ConfigError);
  EXPECT_THROW(make(ModelKind::Burgers, {{"b", 1.0}, {"c", 2.0}}), ConfigError);
  EXPECT_THROW(make(ModelKind::Burgers, {{"b", 1.0}}, 8), ConfigError);
  EXPECT_THROW(make(ModelKind::Burgers, {{"b", NAN}}), ConfigError);
  EXPECT_THROW(make(ModelKind::GinzburgLandau, {{"mu", -1.0}, {"a", 1.0}}), ConfigError);
  EXPECT_THROW(make(ModelKind::InfiniteLinear, {{"a", 0.1}, {"b", 0.1}, {"K", 2.5}}), ConfigError);
  EXPECT_THROW(model_kind_from_string("navier-stokes"), ConfigError);
  EXPECT_EQ(model_kind_from_string("ensemble-S1"), ModelKind::EnsembleS1);
  EXPECT_EQ(to_string(ModelKind::KuramotoSivashinsky), "kuramoto-sivashinsky");
}

TEST(BuildModel, TransportStepAboveCflSuggestsBound) {
  try {
    make(ModelKind::Transport, {}, 64, 0.05);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("use dt <="), std::string::npos);
  }
}

TEST(Simulate, HeatDecayMatchesFourierMode) {
  const PdeModel m = make(ModelKind::Burgers, {{"a", 0.0}, {"b", 0.0}});
  Profile p;
  p.name = "sine";
  const VectorXd x0 = initial_state(m, p);
  const Trajectory tr = simulate(m, x0, zero_input(m), 0.1);
  const double expected = std::exp(-pi * pi * 0.1) * std::sqrt(lyap_eval(m, LyapFunctional::l2(), x0));
  EXPECT_NEAR(l2_at(m, tr) / expected, 1.0, 0.01);
}

TEST(Simulate, TransportCarriesInflowValue) {
  const PdeModel m = make(ModelKind::Transport, {}, 128);
  const Trajectory tr = simulate(m, VectorXd::Zero(m.state_size()), constant_input(m, 0.7), 1.5);
  EXPECT_NEAR(tr.t.back(), 1.5, 1e-9);
  for (Eigen::Index i = 0; i < tr.x.back().size(); ++i) EXPECT_NEAR(tr.x.back()[i], 0.7, 1e-12);
}

TEST(Simulate, ZeroStateIsEquilibriumForEveryKind) {
  const std::vector<std::pair<ModelKind, std::map<std::string, double>>> cases = {
      {ModelKind::Transport, {}},
      {ModelKind::HeatReaction, {}},
      {ModelKind::Burgers, {{"b", 5.0}}},
      {ModelKind::KuramotoSivashinsky, {{"lambda", 20.0}}},
      {ModelKind::GinzburgLandau, {{"a", 3.0}}},
      {ModelKind::CoupledLinearRd, {{"a12", 0.5}, {"a21", 0.5}}},
      {ModelKind::CoupledNonlinearRd, {{"q1", 1.0}, {"q2", 1.0}}},
      {ModelKind::IissRd, {}},
      {ModelKind::InfiniteLinear, {{"a", 0.6}, {"b", 0.6}, {"K", 16}}},
      {ModelKind::InfiniteCubic, {{"a", 0.5}, {"b", 0.5}, {"K", 16}}},
      {ModelKind::EnsembleS1, {{"K", 2}}},
  };
  for (const auto& [kind, params] : cases) {
    const PdeModel m = make(kind, params, 64);
    const Trajectory tr = simulate(m, VectorXd::Zero(m.state_size()), zero_input(m), 0.2);
    ASSERT_FALSE(tr.blew_up) << to_string(kind);
    for (const VectorXd& x : tr.x) ASSERT_EQ(x.cwiseAbs().maxCoeff(), 0.0) << to_string(kind);
  }
}

TEST(Simulate, GridRefinementIsSecondOrder) {
  // successive changes of the reported functionals shrink by about 4 per doubling
  Profile p;
  p.name = "multi-sine";
  for (const auto& F : {LyapFunctional::l2(), LyapFunctional::h10()}) {
    std::vector<double> vals;
    for (int N : {32, 64, 128, 256}) {
      const PdeModel m = make(ModelKind::Burgers, {{"a", 1.0}, {"b", 5.0}}, N);
      const Trajectory tr = simulate(m, initial_state(m, p), zero_input(m), 0.1);
      vals.push_back(lyap_eval(m, F, tr.x.back()));
    }
    const double d1 = std::abs(vals[1] - vals[0]);
    const double d2 = std::abs(vals[2] - vals[1]);
    const double d3 = std::abs(vals[3] - vals[2]);
    EXPECT_LE(d2, d1 / 3.0);
    EXPECT_LE(d3, d2 / 3.0);
    EXPECT_LE(d3, 4.0 * d2);
  }
}

TEST(Simulate, BlowupStopsTrajectory) {
  const PdeModel m = make(ModelKind::EnsembleS1, {{"K", 1}});
  Profile p;
  p.name = "s1";
  const Trajectory tr = simulate(m, initial_state(m, p), zero_input(m), 3.0);
  EXPECT_FALSE(tr.blew_up);  // the cubic damping term keeps the k = 1 mode bounded
  const PdeModel net = make(ModelKind::InfiniteCubic, {{"a", 2.0}, {"b", 2.0}, {"K", 8}});
  Profile c;
  c.name = "constant";
  c.amplitude = 10.0;
  const Trajectory grow = simulate(net, initial_state(net, c), zero_input(net), 5.0);
  if (grow.blew_up) {
    ASSERT_TRUE(grow.blowup_time);
    EXPECT_LE(grow.t.back(), *grow.blowup_time);
  }
}

TEST(Simulate, InfiniteLinearTruncation) {
  // a + b = 0.8: constant input w settles at w / (1 - a - b)
  const PdeModel stable = make(ModelKind::InfiniteLinear, {{"a", 0.3}, {"b", 0.5}, {"K", 32}});
  const Trajectory tr = simulate(stable, VectorXd::Constant(32, 2.0), constant_input(stable, 0.1), 100.0);
  EXPECT_NEAR(tr.x.back().maxCoeff(), 0.1 / 0.2, 1e-6);
  for (size_t k = 1; k < tr.size(); ++k) {
    EXPECT_LE(tr.x[k].maxCoeff(), tr.x[k - 1].maxCoeff() + 1e-12);
  }
  // a + b = 1.1: the constant profile grows like e^{0.1 t}
  const PdeModel unstable = make(ModelKind::InfiniteLinear, {{"a", 0.6}, {"b", 0.5}, {"K", 32}});
  const Trajectory up = simulate(unstable, VectorXd::Ones(32), zero_input(unstable), 10.0);
  EXPECT_NEAR(up.x.back()[0] / std::exp(0.1 * 10.0), 1.0, 0.02);
}

TEST(LyapEval, Examples) {
  const PdeModel m = make(ModelKind::Burgers, {{"b", 1.0}});
  const VectorXd ones = VectorXd::Ones(m.state_size());
  EXPECT_NEAR(lyap_eval(m, LyapFunctional::l2(), ones), 1.0, 1e-14);
  EXPECT_NEAR(lyap_eval(m, LyapFunctional::weighted_l2(1.0), ones), 1.0 - std::exp(-1.0), 1e-6);
  const VectorXd s = (pi * m.nodes().array()).sin();
  EXPECT_NEAR(lyap_eval(m, LyapFunctional::h10(), s) / (pi * pi / 2), 1.0, 1e-3);
  EXPECT_NEAR(lyap_eval(m, LyapFunctional::log1p_l2(), ones), std::log(2.0), 1e-14);
  EXPECT_NEAR(lyap_eval(m, LyapFunctional::l4(), 2.0 * ones), 16.0, 1e-12);
  const auto pot = LyapFunctional::potential([](double x) { return x * x * x * x / 4; });
  EXPECT_NEAR(lyap_eval(m, pot, s), pi * pi / 4 + 3.0 / 32.0, 1e-3);
  const auto wrap = LyapFunctional::composite([](const VectorXd& x) { return x.sum(); });
  EXPECT_EQ(lyap_eval(m, wrap, ones), 257.0);
}

TEST(LyapEval, NonnegativeAndZeroAtZero) {
  const PdeModel m = make(ModelKind::CoupledNonlinearRd, {{"q1", 1.0}, {"q2", 1.0}}, 64);
  Profile p;
  p.name = "random";
  p.seed = 3;
  const VectorXd x = initial_state(m, p);
  const VectorXd zero = VectorXd::Zero(m.state_size());
  for (int c : {0, 1}) {
    for (auto F : {LyapFunctional::l2(c), LyapFunctional::h10(c), LyapFunctional::l4(c),
                   LyapFunctional::log1p_l2(c)}) {
      EXPECT_GT(lyap_eval(m, F, x), 0.0);
      EXPECT_EQ(lyap_eval(m, F, zero), 0.0);
    }
  }
  EXPECT_THROW(lyap_eval(m, LyapFunctional::l2(), VectorXd::Zero(5)), ShapeError);
}

TEST(Profiles, ShapesAndBoundaries) {
  const PdeModel m = make(ModelKind::Burgers, {{"b", 1.0}}, 64);
  for (const char* name : {"sine", "multi-sine", "random"}) {
    Profile p;
    p.name = name;
    const VectorXd x = initial_state(m, p);
    EXPECT_EQ(x[0], 0.0);
    EXPECT_EQ(x[64], 0.0);
    EXPECT_GT(x.cwiseAbs().maxCoeff(), 0.0);
  }
  Profile a, b;
  a.name = b.name = "random";
  a.seed = b.seed = 9;
  EXPECT_EQ(initial_state(m, a), initial_state(m, b));
  Profile bad;
  bad.name = "square";
  EXPECT_THROW(initial_state(m, bad), ConfigError);
  Profile short_samples;
  short_samples.name = "samples";
  short_samples.samples = {1.0, 2.0};
  EXPECT_THROW(initial_state(m, short_samples), ShapeError);
}

TEST(Signals, Kinds) {
  Signal c;
  c.kind = "const";
  c.value = 2.0;
  EXPECT_EQ(c(3.0), 2.0);
  Signal s;
  s.kind = "sine";
  s.value = 2.0;
  s.freq = 0.25;
  EXPECT_NEAR(s(1.0), 2.0, 1e-15);
  Signal t;
  t.kind = "table";
  t.times = {0.0, 1.0, 2.0};
  t.values = {0.0, 2.0, 0.0};
  EXPECT_DOUBLE_EQ(t(0.5), 1.0);
  EXPECT_DOUBLE_EQ(t(1.5), 1.0);
  EXPECT_DOUBLE_EQ(t(5.0), 0.0);
  Signal bad;
  bad.kind = "square";
  EXPECT_THROW(bad(0.0), ConfigError);
}
