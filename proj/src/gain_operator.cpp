#include "isscert/gain_operator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <random>

namespace isscert {

// ---------------------------------------------------------------- Maf

Maf Maf::pnorm(double p, std::uint64_t seed) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p-norm aggregation needs finite p > 0");
  Maf m(Kind::PNorm, p);
  for (int n : {2, 3, 5}) {
    const MafProbe pr = probe_maf(m, n, seed);
    if (!pr.ok()) {
      throw ConfigError("p-norm aggregation with p = " + std::to_string(p) +
                        " is not a monotone aggregation function (" +
                        (!pr.subadditive ? "not subadditive" : "axiom probe failed") + ")");
    }
  }
  return m;
}

double Maf::operator()(const Eigen::Ref<const Vec>& s) const {
  switch (kind_) {
    case Kind::Max: return s.size() ? s.maxCoeff() : 0.0;
    case Kind::Sum: return s.sum();
    case Kind::PNorm: {
      const double m = s.size() ? s.maxCoeff() : 0.0;
      if (m == 0.0) return 0.0;
      return m * std::pow((s / m).array().pow(p_).sum(), 1.0 / p_);
    }
  }
  return 0.0;
}

MafProbe probe_maf(const Maf& mu, int n, std::uint64_t seed, int trials) {
  MafProbe out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> scale(-6.0, 6.0);
  auto draw = [&] {
    Vec v(n);
    const double s = std::pow(10.0, scale(rng));
    for (int i = 0; i < n; ++i) v[i] = u(rng) < 0.25 ? 0.0 : s * u(rng);
    return v;
  };
  if (mu(Vec::Zero(n)) != 0.0) out.positive = false;
  for (int t = 0; t < trials; ++t) {
    Vec a = draw();
    Vec b = draw();
    if (a.maxCoeff() > 0.0 && !(mu(a) > 0.0)) out.positive = false;
    Vec bigger = a + Vec::Constant(n, 1e-3 * (1.0 + a.maxCoeff()));
    if (!(mu(bigger) > mu(a))) out.strictly_monotone = false;
    const double lhs = mu(a + b);
    const double rhs = mu(a) + mu(b);
    if (lhs > rhs * (1.0 + 1e-12)) out.subadditive = false;
  }
  const Vec ones = Vec::Ones(n);
  if (!(mu(1e12 * ones) > 1e6 * mu(ones))) out.unbounded = false;
  return out;
}

// ---------------------------------------------------------------- GainMatrix

GainMatrix::GainMatrix(int n, bool allow_diagonal)
    : n_(n), allow_diagonal_(allow_diagonal), entries_(static_cast<size_t>(n) * n) {
  if (n < 1) throw ShapeError("gain matrix needs at least one index");
}

GainMatrix GainMatrix::from_linear(const Eigen::MatrixXd& a, bool allow_diagonal) {
  if (a.rows() != a.cols()) throw ShapeError("gain matrix must be square");
  GainMatrix g(static_cast<int>(a.rows()), allow_diagonal);
  for (int i = 0; i < g.n_; ++i) {
    for (int j = 0; j < g.n_; ++j) {
      if (a(i, j) < 0.0 || !std::isfinite(a(i, j))) throw DomainError("linear gains must be >= 0");
      if (a(i, j) > 0.0) g.set(i, j, KFun::linear(a(i, j)));
    }
  }
  return g;
}

GainMatrix GainMatrix::spatially_invariant(int n, const std::map<int, KFun>& row, bool periodic) {
  const bool self = row.count(0) > 0;
  GainMatrix g(n, self);
  for (int i = 0; i < n; ++i) {
    for (const auto& [d, f] : row) {
      int j = i + d;
      if (periodic) {
        j = ((j % n) + n) % n;
      } else if (j < 0 || j >= n) {
        continue;
      }
      g.set(i, j, f);
    }
  }
  g.invariant_row_ = row;
  g.periodic_ = periodic;
  return g;
}

void GainMatrix::set(int i, int j, KFun f) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ShapeError("gain index out of range");
  if (i == j && !allow_diagonal_) {
    throw ShapeError("diagonal gains must be zero (gain matrix built without allow_diagonal)");
  }
  if (f.fun_class() == FunClass::PD) throw ClassError("gains must be of class K");
  entries_[static_cast<size_t>(i) * n_ + j] = std::move(f);
}

const std::optional<KFun>& GainMatrix::operator()(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ShapeError("gain index out of range");
  return entries_[static_cast<size_t>(i) * n_ + j];
}

bool GainMatrix::is_linear() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return !e || e->linear_slope().has_value(); });
}

Eigen::MatrixXd GainMatrix::linear_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const auto& e = (*this)(i, j);
      if (!e) continue;
      const auto s = e->linear_slope();
      if (!s) throw UnsupportedError("gain (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") is not linear");
      a(i, j) = *s;
    }
  }
  return a;
}

// ---------------------------------------------------------------- GainOperator

struct GainOperator::OrbitCache {
  std::mutex mu;
  std::vector<Vec> orbit;
};

GainOperator::GainOperator(GainMatrix gains, std::vector<Maf> mafs)
    : gains_(std::move(gains)), mafs_(std::move(mafs)), cache_(std::make_shared<OrbitCache>()) {
  if (static_cast<int>(mafs_.size()) != gains_.size()) {
    throw ShapeError("one aggregation per row is required");
  }
  all_rows_ = mafs_.front().kind();
  for (const auto& m : mafs_) {
    if (m.kind() != *all_rows_) all_rows_.reset();
  }
  if (gains_.is_linear()) linear_ = gains_.linear_matrix();
}

GainOperator::GainOperator(GainMatrix gains, Maf maf)
    : GainOperator(gains, std::vector<Maf>(static_cast<size_t>(gains.size()), maf)) {}

const Eigen::MatrixXd& GainOperator::linear_matrix() const {
  if (!linear_) throw UnsupportedError("operator has nonlinear gains");
  return *linear_;
}

Vec GainOperator::apply(const Eigen::Ref<const Vec>& s) const {
  const int n = size();
  if (s.size() != n) {
    throw ShapeError("apply: expected a vector of length " + std::to_string(n) + ", got " +
                     std::to_string(s.size()));
  }
  for (int j = 0; j < n; ++j) {
    if (!(s[j] >= 0.0) || !std::isfinite(s[j])) {
      throw DomainError("apply: component " + std::to_string(j) + " is negative or not finite");
    }
  }
  if (linear_ && all_rows_ == Maf::Kind::Sum) return (*linear_) * s;
  if (linear_ && all_rows_ == Maf::Kind::Max) {
    return (linear_->array().rowwise() * s.transpose().array()).rowwise().maxCoeff();
  }
  Vec out(n);
  Vec row(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& g = gains_(i, j);
      row[j] = g ? (*g)(s[j]) : 0.0;
    }
    out[i] = mafs_[i](row);
  }
  return out;
}

Vec GainOperator::ones_orbit(int k) const {
  if (k < 0) throw DomainError("orbit index must be >= 0");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& orbit = cache_->orbit;
  if (orbit.empty()) orbit.push_back(Vec::Ones(size()));
  while (static_cast<int>(orbit.size()) <= k) orbit.push_back(apply(orbit.back()));
  return orbit[k];
}

Vec power_apply(const GainOperator& op, int k, const Eigen::Ref<const Vec>& s) {
  if (k < 1) throw DomainError("power_apply: k must be >= 1");
  Vec x = op.apply(s);
  for (int i = 1; i < k; ++i) x = op.apply(x);
  return x;
}

// ---------------------------------------------------------------- cycles

std::vector<CycleEntry> cycle_report(const GainMatrix& g, int cap) {
  const int n = g.size();
  if (n > cap) {
    throw SizeError("cycle_report: " + std::to_string(n) + " indices exceed the exhaustive cap " +
                    std::to_string(cap) + "; use the sampled small-gain check instead");
  }
  std::vector<CycleEntry> out;
  std::vector<int> path;
  std::vector<char> on_path(n, 0);

  auto emit = [&](const std::vector<int>& cyc) {
    const int k = static_cast<int>(cyc.size());
    bool linear = true;
    double product = 1.0;
    for (int m = 0; m < k; ++m) {
      const auto s = g(cyc[m], cyc[(m + 1) % k])->linear_slope();
      if (!s) linear = false;
      else product *= *s;
    }
    std::optional<KFun> composed;
    if (linear) {
      composed = KFun::linear(product);
    } else {
      composed = *g(cyc[k - 1], cyc[0]);
      for (int m = k - 2; m >= 0; --m) composed = compose(*g(cyc[m], cyc[m + 1]), *composed);
    }
    double w = 0.0;
    const bool contraction = below_identity(*composed, 1e-9, 1e9, 64, &w);
    out.push_back({cyc, *composed, contraction,
                   contraction ? std::nullopt : std::optional<double>(w)});
  };

  // Simple cycles whose smallest node is `start`.
  std::function<void(int, int)> dfs = [&](int start, int v) {
    for (int w = start; w < n; ++w) {
      if (!g(v, w)) continue;
      if (w == start) {
        emit(path);
      } else if (!on_path[w]) {
        on_path[w] = 1;
        path.push_back(w);
        dfs(start, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    on_path.assign(n, 0);
    on_path[s] = 1;
    dfs(s, s);
  }
  return out;
}

std::vector<int> nonexpanding_cycle(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  // Bellman-Ford on cost -log(a_ij) - 1e-12 over edges i -> j with a_ij > 0;
  // a cycle of negative cost is a cycle with product >= 1 - O(1e-12).
  constexpr double kSlack = 1e-12;
  std::vector<double> dist(n, 0.0);
  std::vector<int> pred(n, -1);
  int changed = -1;
  for (int pass = 0; pass < n + 1; ++pass) {
    changed = -1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!(a(i, j) > 0.0)) continue;
        const double c = std::isinf(a(i, j)) ? -std::numeric_limits<double>::infinity()
                                             : -std::log(a(i, j)) - kSlack;
        if (dist[i] + c < dist[j]) {
          dist[j] = dist[i] + c;
          pred[j] = i;
          changed = j;
        }
      }
    }
    if (changed < 0) return {};
  }
  int v = changed;
  for (int k = 0; k < n; ++k) v = pred[v];
  std::vector<int> rev{v};
  for (int u = pred[v]; u != v; u = pred[u]) rev.push_back(u);
  // pred points backwards along edges; reverse to get i1 -> i2 -> ...
  std::reverse(rev.begin(), rev.end());
  std::rotate(rev.begin(), std::min_element(rev.begin(), rev.end()), rev.end());
  return rev;
}

// ---------------------------------------------------------------- spectral radius

SpectralRadius spectral_radius(const GainOperator& op, int max_iter, double tol) {
  if (!op.is_linear()) {
    throw UnsupportedError(
        "spectral_radius needs linear gains; use cycle_report or check_small_gain for nonlinear "
        "gains");
  }
  if (!op.is_max_form() && !op.is_sum_form()) {
    throw UnsupportedError("spectral_radius needs max-form or sum-form rows");
  }
  constexpr int kMaxLag = 12;
  const int n = op.size();
  SpectralRadius out;

  // Normalized iterates y_k = Gamma^k(1)/||Gamma^k(1)|| and log-norms L_k.
  std::vector<Vec> ys{Vec::Ones(n)};
  std::vector<double> logs{0.0};
  for (int it = 1; it <= max_iter; ++it) {
    Vec z = op.apply(ys.back());
    const double nz = z.lpNorm<Eigen::Infinity>();
    out.iterations = it;
    if (nz == 0.0) {
      out.radius = 0.0;
      out.converged = true;
      return out;
    }
    ys.push_back(z / nz);
    logs.push_back(logs.back() + std::log(nz));
    const int last = static_cast<int>(ys.size()) - 1;

    // Collatz-Wielandt bracket along the orbit: with c_i = (Gamma^p y)_i / y_i,
    // Gamma^p(y) lies between (min c) y and (max c) y, so r^p does too.
    // Periodic max-plus orbits close the bracket exactly at their cyclicity.
    double best_lo = 0.0, best_hi = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= std::min(kMaxLag, last); ++p) {
      const double growth = logs[last] - logs[last - p];
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      bool unbounded = false;
      for (int i = 0; i < n; ++i) {
        const double den = ys[last - p][i];
        const double num = ys[last][i];
        if (den > 0.0) {
          const double c = num > 0.0 ? std::exp((growth + std::log(num / den)) / p) : 0.0;
          lo = std::min(lo, c);
          hi = std::max(hi, c);
        } else if (num > 0.0) {
          unbounded = true;
        }
      }
      if (unbounded || !std::isfinite(lo)) continue;
      if (hi - lo < best_hi - best_lo) {
        best_lo = lo;
        best_hi = hi;
      }
    }
    if (!std::isfinite(best_hi)) {
      out.radius = std::exp(logs[last] / last);
      continue;
    }
    out.radius = 0.5 * (best_lo + best_hi);
    if (best_hi - best_lo <= 2.0 * tol * std::max(1.0, out.radius)) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------- Kleene star

KleeneResult kleene_star(const GainOperator& op, const Eigen::Ref<const Vec>& s) {
  if (!op.is_max_form()) throw UnsupportedError("kleene_star needs a max-form operator");
  if (op.is_linear()) {
    const auto cyc = nonexpanding_cycle(op.linear_matrix());
    if (!cyc.empty()) {
      std::string nodes;
      for (int v : cyc) nodes += std::to_string(v) + " ";
      throw DivergenceError("kleene_star: cycle with gain product >= 1 through nodes " + nodes +
                            "(robust small-gain condition violated)");
    }
  }
  KleeneResult out;
  out.q = s;
  Vec x = s;
  op.apply(s);  // argument validation
  for (int k = 1; k <= 10000; ++k) {
    x = op.apply(x);
    const double inc = (x - out.q).cwiseMax(0.0).maxCoeff();
    out.q = out.q.cwiseMax(x);
    out.iterations = k;
    if (out.q.maxCoeff() > 1e12) {
      throw DivergenceError("kleene_star: iterates exceed 1e12 after " + std::to_string(k) +
                            " steps (robust small-gain condition violated)");
    }
    if (inc == 0.0) return out;
    if (inc < 1e-12) {
      out.exact = false;
      return out;
    }
  }
  throw DivergenceError("kleene_star: no convergence after 10000 steps");
}

}  // namespace isscert
