#include <cmath>
#include <numbers>
#include <random>

#include "isscert/errors.hpp"
#include "model_impl.hpp"

namespace isscert {

namespace {

constexpr double kPi = std::numbers::pi;

struct ParamDef {
  const char* name;
  std::optional<double> fallback;  // nullopt: required
};

struct KindDef {
  ModelKind kind;
  const char* name;
  InputChannel channel;
  std::vector<ParamDef> params;
};

const std::vector<KindDef>& kinds() {
  static const std::vector<KindDef> table = {
      {ModelKind::Transport, "transport", InputChannel::BoundaryLeft, {}},
      {ModelKind::HeatReaction, "heat-reaction", InputChannel::Distributed, {{"b", 1.0}}},
      {ModelKind::Burgers, "burgers", InputChannel::Distributed, {{"a", 1.0}, {"b", {}}}},
      {ModelKind::KuramotoSivashinsky,
       "kuramoto-sivashinsky",
       InputChannel::Distributed,
       {{"lambda", {}}, {"b", 1.0}}},
      {ModelKind::GinzburgLandau,
       "ginzburg-landau",
       InputChannel::BoundaryNeumannLeft,
       {{"mu", 1.0}, {"a", {}}}},
      {ModelKind::CoupledLinearRd,
       "coupled-linear-rd",
       InputChannel::Distributed,
       {{"c1", 1.0}, {"c2", 1.0}, {"a12", {}}, {"a21", {}}, {"d", kPi}}},
      {ModelKind::CoupledNonlinearRd,
       "coupled-nonlinear-rd",
       InputChannel::Distributed,
       {{"q1", {}}, {"q2", {}}}},
      {ModelKind::IissRd, "iiss-rd", InputChannel::Distributed, {{"c", 1.0}}},
      {ModelKind::InfiniteLinear,
       "infinite-linear",
       InputChannel::Distributed,
       {{"a", {}}, {"b", {}}, {"K", 64.0}}},
      {ModelKind::InfiniteCubic,
       "infinite-cubic",
       InputChannel::Distributed,
       {{"a", {}}, {"b", {}}, {"K", 64.0}}},
      {ModelKind::EnsembleS1, "ensemble-S1", InputChannel::None, {{"K", 8.0}}},
  };
  return table;
}

const KindDef& def_of(ModelKind k) {
  for (const auto& d : kinds()) {
    if (d.kind == k) return d;
  }
  throw ConfigError("unknown model kind");
}

bool is_network(ModelKind k) {
  return k == ModelKind::InfiniteLinear || k == ModelKind::InfiniteCubic ||
         k == ModelKind::EnsembleS1;
}

// Second difference on component block `off`, Dirichlet nodes dropped.
void add_d2(std::vector<Eigen::Triplet<double>>& t, int N, double h, int off, double coef,
            int first_row = 1) {
  const double s = coef / (h * h);
  for (int i = first_row; i < N; ++i) {
    t.emplace_back(off + i, off + i, -2.0 * s);
    if (i - 1 > 0) t.emplace_back(off + i, off + i - 1, s);
    if (i + 1 < N) t.emplace_back(off + i, off + i + 1, s);
  }
}

// Five-point fourth difference with clamped ends: x_0 = x_N = 0 and the
// ghosts x_{-1} = x_1, x_{N+1} = x_{N-1}.
void add_d4(std::vector<Eigen::Triplet<double>>& t, int N, double h, double coef) {
  const double s = coef / std::pow(h, 4);
  static constexpr double w[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
  for (int i = 1; i < N; ++i) {
    for (int k = 0; k < 5; ++k) {
      int j = i - 2 + k;
      if (j == -1) j = 1;
      if (j == N + 1) j = N - 1;
      if (j == 0 || j == N) continue;
      t.emplace_back(i, j, w[k] * s);
    }
  }
}

void add_diag(std::vector<Eigen::Triplet<double>>& t, int N, int row_off, int col_off, double v) {
  for (int i = 1; i < N; ++i) t.emplace_back(row_off + i, col_off + i, v);
}

// (x_i (x_{i+1} - x_{i-1}) + x_{i+1}^2 - x_{i-1}^2) / (6h): x x_z in
// skew-symmetric form, so sum_i x_i adv_i = 0 with zero end values.
double skew_adv(const Eigen::VectorXd& x, int i, double h) {
  const double l = x[i - 1], c = x[i], r = x[i + 1];
  return (c * (r - l) + r * r - l * l) / (6.0 * h);
}

}  // namespace

std::string to_string(ModelKind k) { return def_of(k).name; }

ModelKind model_kind_from_string(const std::string& s) {
  for (const auto& d : kinds()) {
    if (s == d.name) return d.kind;
  }
  throw ConfigError("unknown model kind '" + s + "'");
}

ModelKind PdeModel::kind() const { return impl_->kind; }
InputChannel PdeModel::channel() const { return impl_->channel; }
bool PdeModel::is_grid() const { return !is_network(impl_->kind); }
int PdeModel::N() const { return impl_->N; }
double PdeModel::L() const { return impl_->L; }
double PdeModel::h() const { return impl_->h; }
double PdeModel::dt() const { return impl_->dt; }
int PdeModel::components() const { return impl_->comps; }
int PdeModel::state_size() const { return impl_->size; }
int PdeModel::input_size() const { return impl_->input_size; }

double PdeModel::param(const std::string& name) const {
  auto it = impl_->params.find(name);
  if (it == impl_->params.end()) throw ConfigError("model has no parameter '" + name + "'");
  return it->second;
}

Eigen::VectorXd PdeModel::nodes() const {
  if (!is_grid()) throw UnsupportedError("nodes() needs a grid model");
  return Eigen::VectorXd::LinSpaced(impl_->N + 1, 0.0, impl_->L);
}

std::shared_ptr<SparseSolver> factor_step(const ModelImpl& m, double dt) {
  SparseMat I(m.size, m.size);
  I.setIdentity();
  SparseMat A = I - dt * m.lin;
  A.makeCompressed();
  auto s = std::make_shared<SparseSolver>();
  s->compute(A);
  if (s->info() != Eigen::Success) throw NumericalError("implicit step matrix is singular");
  return s;
}

PdeModel build_model(const ModelSpec& spec) {
  const KindDef& def = def_of(spec.kind);
  auto m = std::make_shared<ModelImpl>();
  m->kind = spec.kind;
  m->channel = def.channel;

  for (const auto& [k, v] : spec.params) {
    bool known = false;
    for (const auto& p : def.params) known = known || k == p.name;
    if (!known) throw ConfigError(std::string(def.name) + ": unknown parameter '" + k + "'");
    if (!std::isfinite(v)) throw ConfigError(std::string(def.name) + ": parameter '" + k + "' is not finite");
  }
  for (const auto& p : def.params) {
    auto it = spec.params.find(p.name);
    if (it != spec.params.end()) {
      m->params[p.name] = it->second;
    } else if (p.fallback) {
      m->params[p.name] = *p.fallback;
    } else {
      throw ConfigError(std::string(def.name) + ": missing parameter '" + p.name + "'");
    }
  }

  if (is_network(spec.kind)) {
    const double K = m->p("K");
    if (!(K >= 1.0) || K != std::floor(K)) throw ConfigError("K must be a positive integer");
    m->N = static_cast<int>(K);
    m->L = K;
    m->h = 1.0;
    m->size = spec.kind == ModelKind::EnsembleS1 ? 2 * m->N : m->N;
    m->input_size = spec.kind == ModelKind::EnsembleS1 ? 0 : m->N;
    m->dt = spec.dt.value_or(spec.kind == ModelKind::EnsembleS1 ? 1e-3 : 1e-2);
    if (!(m->dt > 0.0)) throw ConfigError("dt must be > 0");
    PdeModel out;
    out.impl_ = m;
    return out;
  }

  if (spec.N < 16) throw ConfigError("N must be >= 16");
  m->N = spec.N;
  double L = 1.0;
  if (spec.kind == ModelKind::HeatReaction || spec.kind == ModelKind::CoupledNonlinearRd) L = kPi;
  if (spec.kind == ModelKind::CoupledLinearRd) {
    L = m->p("d");
    if (spec.L && *spec.L != L) throw ConfigError("coupled-linear-rd: L and d disagree");
  } else if (spec.L) {
    L = *spec.L;
  }
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("domain length must be > 0");
  m->L = L;
  m->h = L / m->N;
  const bool coupled =
      spec.kind == ModelKind::CoupledLinearRd || spec.kind == ModelKind::CoupledNonlinearRd;
  m->comps = coupled ? 2 : 1;
  const int N = m->N;
  const int block = N + 1;
  m->size = m->comps * block;
  m->input_size = m->channel == InputChannel::Distributed ? m->size : 1;

  m->pinned.assign(m->size, 0);
  for (int c = 0; c < m->comps; ++c) {
    m->pinned[c * block] = 1;
    m->pinned[c * block + N] = 1;
  }

  if (spec.kind == ModelKind::Transport) {
    m->dt = spec.dt.value_or(m->h);
    if (!(m->dt > 0.0)) throw ConfigError("dt must be > 0");
    if (m->dt > m->h * (1.0 + 1e-12)) {
      throw ConfigError("transport: dt = " + std::to_string(m->dt) +
                        " violates the upwind CFL bound; use dt <= " + std::to_string(m->h));
    }
    m->pinned.assign(m->size, 0);
    m->pinned[0] = 1;
    PdeModel out;
    out.impl_ = m;
    return out;
  }

  const double h = m->h;
  std::vector<Eigen::Triplet<double>> t;
  switch (spec.kind) {
    case ModelKind::HeatReaction:
      add_d2(t, N, h, 0, 1.0);
      break;
    case ModelKind::Burgers:
      add_d2(t, N, h, 0, 1.0);
      add_diag(t, N, 0, 0, m->p("b"));
      break;
    case ModelKind::KuramotoSivashinsky:
      add_d4(t, N, h, -1.0);
      add_d2(t, N, h, 0, -m->p("lambda"));
      break;
    case ModelKind::GinzburgLandau: {
      const double mu = m->p("mu");
      if (!(mu > 0.0)) throw ConfigError("ginzburg-landau: mu must be > 0");
      // Row 1 with x_0 = (4x_1 - x_2 - 2h u)/3 eliminated; the u part is explicit.
      t.emplace_back(1, 1, -2.0 / 3.0 * mu / (h * h));
      t.emplace_back(1, 2, 2.0 / 3.0 * mu / (h * h));
      add_d2(t, N, h, 0, mu, 2);
      add_diag(t, N, 0, 0, m->p("a"));
      m->pinned[0] = 0;  // closed by the Neumann relation after each step
      break;
    }
    case ModelKind::CoupledLinearRd:
      if (!(m->p("c1") > 0.0 && m->p("c2") > 0.0)) throw ConfigError("c1, c2 must be > 0");
      add_d2(t, N, h, 0, m->p("c1"));
      add_d2(t, N, h, block, m->p("c2"));
      add_diag(t, N, 0, block, m->p("a12"));
      add_diag(t, N, block, 0, m->p("a21"));
      break;
    case ModelKind::CoupledNonlinearRd:
      if (!(m->p("q1") > 0.0 && m->p("q2") > 0.0)) throw ConfigError("q1, q2 must be > 0");
      add_d2(t, N, h, 0, m->p("q1"));
      add_d2(t, N, h, block, m->p("q2"));
      break;
    case ModelKind::IissRd:
      if (!(m->p("c") > 0.0)) throw ConfigError("iiss-rd: c must be > 0");
      add_d2(t, N, h, 0, m->p("c"));
      break;
    default:
      break;
  }
  m->lin.resize(m->size, m->size);
  m->lin.setFromTriplets(t.begin(), t.end());
  m->dt = spec.dt.value_or(1e-4);
  if (!(m->dt > 0.0)) throw ConfigError("dt must be > 0");
  m->solver = factor_step(*m, m->dt);
  PdeModel out;
  out.impl_ = m;
  return out;
}

void explicit_rhs(const ModelImpl& m, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  Eigen::VectorXd& out) {
  out.setZero(m.size);
  const int N = m.N;
  const int block = N + 1;
  const double h = m.h;
  auto ud = [&](int i) { return u.size() ? u[i] : 0.0; };
  switch (m.kind) {
    case ModelKind::HeatReaction: {
      const double b = m.p("b");
      for (int i = 1; i < N; ++i) out[i] = -b * x[i] * x[i] * x[i] + ud(i);
      break;
    }
    case ModelKind::Burgers: {
      const double a = m.p("a");
      for (int i = 1; i < N; ++i) out[i] = -a * skew_adv(x, i, h) + ud(i);
      break;
    }
    case ModelKind::KuramotoSivashinsky: {
      const double b = m.p("b");
      for (int i = 1; i < N; ++i) out[i] = -b * skew_adv(x, i, h) + ud(i);
      break;
    }
    case ModelKind::GinzburgLandau: {
      for (int i = 1; i < N; ++i) out[i] = -x[i] * x[i] * x[i];
      out[1] += -2.0 / 3.0 * m.p("mu") / h * ud(0);
      break;
    }
    case ModelKind::CoupledLinearRd:
      for (int i = 1; i < N; ++i) {
        out[i] = ud(i);
        out[block + i] = ud(block + i);
      }
      break;
    case ModelKind::CoupledNonlinearRd:
      for (int i = 1; i < N; ++i) {
        out[i] = x[block + i] * x[block + i] + ud(i);
        out[block + i] = std::sqrt(std::abs(x[i])) + ud(block + i);
      }
      break;
    case ModelKind::IissRd:
      for (int i = 1; i < N; ++i) {
        const double z = i * h;
        out[i] = x[i] / (1.0 + std::abs(z - 1.0) * x[i] * x[i]) * ud(i);
      }
      break;
    default:
      throw UnsupportedError("explicit_rhs: not a grid model");
  }
}

void network_rhs(const ModelImpl& m, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                 Eigen::VectorXd& out) {
  const int K = m.N;
  const double a = m.p("a"), b = m.p("b");
  out.resize(K);
  for (int i = 0; i < K; ++i) {
    const double l = x[(i + K - 1) % K], r = x[(i + 1) % K];
    const double ui = u.size() ? u[i] : 0.0;
    if (m.kind == ModelKind::InfiniteLinear) {
      out[i] = a * l - x[i] + b * r + ui;
    } else {
      out[i] = -x[i] * x[i] * x[i] + std::max({a * l * l * l, b * r * r * r, ui});
    }
  }
}

void ensemble_rhs(const ModelImpl& m, const Eigen::VectorXd& s, Eigen::VectorXd& out) {
  out.resize(s.size());
  for (int k = 1; k <= m.N; ++k) {
    const double x = s[2 * (k - 1)], y = s[2 * (k - 1) + 1];
    out[2 * (k - 1)] = -x + x * x * y - x * x * x / (static_cast<double>(k) * k);
    out[2 * (k - 1) + 1] = -y;
  }
}

Eigen::VectorXd initial_state(const PdeModel& m, const Profile& p) {
  const ModelImpl& im = m.impl();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(im.size);
  if (!std::isfinite(p.amplitude)) throw ConfigError("profile amplitude must be finite");
  if (p.name == "zero") return x;
  if (p.name == "samples") {
    if (p.samples.size() != static_cast<size_t>(im.size)) {
      throw ShapeError("profile samples: expected " + std::to_string(im.size) + " values");
    }
    for (int i = 0; i < im.size; ++i) x[i] = p.samples[i];
    return x;
  }
  if (p.name == "constant") {
    x.setConstant(p.amplitude);
    for (int i = 0; i < im.size; ++i) {
      if (!im.pinned.empty() && im.pinned[i]) x[i] = 0.0;
    }
    return x;
  }
  if (im.kind == ModelKind::EnsembleS1) {
    if (p.name != "s1") throw ConfigError("ensemble-S1 takes the 's1' profile");
    const double e2 = std::exp(2.0);
    for (int k = 0; k < im.N; ++k) {
      x[2 * k] = 2.0 * e2 / (e2 - 1.0);
      x[2 * k + 1] = std::numbers::e;
    }
    return x;
  }
  if (!m.is_grid()) {
    if (p.name != "random") throw ConfigError("network profiles: zero, constant, random, samples");
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < im.size; ++i) x[i] = p.amplitude * U(rng);
    return x;
  }
  const int block = im.N + 1;
  const Eigen::VectorXd z = m.nodes();
  for (int c = 0; c < im.comps; ++c) {
    Eigen::Ref<Eigen::VectorXd> xc = x.segment(c * block, block);
    if (p.name == "sine") {
      xc = p.amplitude * (kPi * z / im.L).array().sin();
    } else if (p.name == "multi-sine") {
      for (int k = 1; k <= 4; ++k) xc += p.amplitude / k * (k * kPi * z / im.L).array().sin().matrix();
    } else if (p.name == "random") {
      std::mt19937_64 rng(p.seed + 7919 * c);
      std::uniform_real_distribution<double> U(-1.0, 1.0);
      for (int k = 1; k <= 8; ++k) {
        const double ck = U(rng);
        xc += p.amplitude * ck / k * (k * kPi * z / im.L).array().sin().matrix();
      }
    } else {
      throw ConfigError("unknown profile '" + p.name + "'");
    }
    xc[0] = 0.0;
    xc[im.N] = 0.0;
  }
  return x;
}

double Signal::operator()(double t) const {
  if (kind == "zero") return 0.0;
  if (kind == "const") return value;
  if (kind == "sine") return value * std::sin(2.0 * kPi * freq * t);
  if (kind == "table") {
    if (times.empty() || times.size() != values.size()) {
      throw ConfigError("table signal needs matching nonempty times and values");
    }
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const size_t k = static_cast<size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
  }
  throw ConfigError("unknown signal kind '" + kind + "'");
}

InputFn input_from_signal(const PdeModel& m, const Signal& s) {
  if (s.kind == "table") {
    for (size_t k = 1; k < s.times.size(); ++k) {
      if (!(s.times[k] > s.times[k - 1])) throw ConfigError("table times must increase");
    }
  }
  (void)s(0.0);  // validates the kind
  const int n = m.input_size();
  return [s, n](double t) { return Eigen::VectorXd::Constant(n, s(t)); };
}

}  // namespace isscert
