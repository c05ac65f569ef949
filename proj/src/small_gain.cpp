#include "isscert/small_gain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

namespace isscert {

const char* to_string(SmallGainMode::Kind k) {
  switch (k) {
    case SmallGainMode::Kind::NoJointIncrease: return "no-joint-increase";
    case SmallGainMode::Kind::Strong: return "strong";
    case SmallGainMode::Kind::Uniform: return "uniform";
    case SmallGainMode::Kind::Robust: return "robust";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::PassSampled: return "pass-sampled";
    case Verdict::Fail: return "FAIL";
  }
  return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Predicate = std::function<bool(const Vec&)>;

bool dominates(const Vec& a, const Vec& b) { return (a.array() >= b.array()).all(); }

Predicate violation_predicate(const GainOperator& op, const SmallGainMode& mode) {
  switch (mode.kind) {
    case SmallGainMode::Kind::NoJointIncrease:
      return [&op](const Vec& s) { return s.maxCoeff() > 0.0 && dominates(op.apply(s), s); };
    case SmallGainMode::Kind::Strong: {
      const KFun rho = *mode.param;
      return [&op, rho](const Vec& s) {
        if (!(s.maxCoeff() > 0.0)) return false;
        Vec a = op.apply(s);
        for (Eigen::Index i = 0; i < a.size(); ++i) a[i] += rho(a[i]);
        return dominates(a, s);
      };
    }
    case SmallGainMode::Kind::Uniform: {
      const KFun eta = *mode.param;
      return [&op, eta](const Vec& s) {
        if (!(s.maxCoeff() > 0.0)) return false;
        const Vec y = op.apply(s) - s;
        return dist_to_cone(y) < eta(s.lpNorm<Eigen::Infinity>());
      };
    }
    case SmallGainMode::Kind::Robust: {
      const KFun omega = *mode.param;
      return [&op, omega](const Vec& s) {
        if (!(s.maxCoeff() > 0.0)) return false;
        const Vec a = op.apply(s);
        const Eigen::Index n = s.size();
        // A_ij(s) = Gamma(s) + omega(s_j) e_i >= s needs every other row to
        // dominate already.
        Eigen::Index short_rows = 0, short_at = -1;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (a[k] < s[k]) {
            ++short_rows;
            short_at = k;
          }
        }
        if (short_rows == 0) return true;
        if (short_rows > 1) return false;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (a[short_at] + omega(s[j]) >= s[short_at]) return true;
        }
        return false;
      };
    }
  }
  return {};
}

void validate_mode(const SmallGainMode& mode) {
  if (mode.kind == SmallGainMode::Kind::NoJointIncrease) {
    if (mode.param) throw ConfigError("no-joint-increase mode takes no parameter");
    return;
  }
  if (!mode.param) {
    throw ConfigError(std::string(to_string(mode.kind)) + " mode needs a K-infinity parameter");
  }
  if (!mode.param->is_kinf()) {
    throw ConfigError(std::string(to_string(mode.kind)) +
                      " mode parameter must be K-infinity, got " + mode.param->describe());
  }
  if (mode.kind == SmallGainMode::Kind::Robust) {
    double w = 0.0;
    if (!below_identity(*mode.param, 1e-9, 1e9, 64, &w)) {
      throw ConfigError("robust mode needs omega < id; omega(r) >= r at r = " + std::to_string(w));
    }
  }
}

// Perron-type witness for a sum-form linear operator with radius >= 1.
std::optional<Vec> perron_witness(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  const auto ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    if (ev[k].real() > ev[best].real()) best = k;
  }
  Vec v = es.eigenvectors().col(best).real().cwiseAbs();
  if (!(v.maxCoeff() > 0.0)) return std::nullopt;
  v /= v.maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < 1e-300) v[i] = 0.0;
  }
  if (dominates(a * v, v)) return v;
  return std::nullopt;
}

}  // namespace

Vec cycle_witness(const GainMatrix& g, const std::vector<int>& cycle, double level) {
  Vec s = Vec::Zero(g.size());
  const int k = static_cast<int>(cycle.size());
  s[cycle[0]] = level;
  for (int m = k - 1; m >= 1; --m) {
    const int next = cycle[(m + 1) % k];
    s[cycle[m]] = (*g(cycle[m], next))(s[next]);
  }
  return s;
}

SmallGainVerdict check_small_gain(const GainOperator& op, const SmallGainMode& mode,
                                  const SamplingOptions& opts) {
  validate_mode(mode);
  SmallGainVerdict out{mode.kind, Verdict::PassSampled, std::nullopt, std::nullopt, 0, 0,
                       opts.seed, "sampled", {}};
  const int n = op.size();

  // Exact branch: homogeneous max/sum operators, possibly scaled by (1 + c).
  const bool homogeneous = op.is_linear() && (op.is_max_form() || op.is_sum_form());
  const bool linear_rho = mode.kind == SmallGainMode::Kind::Strong && mode.param->linear_slope();
  if (homogeneous && (mode.kind == SmallGainMode::Kind::NoJointIncrease || linear_rho)) {
    const double scale = linear_rho ? 1.0 + *mode.param->linear_slope() : 1.0;
    const Eigen::MatrixXd a = scale * op.linear_matrix();
    const GainOperator scaled(GainMatrix::from_linear(a, op.gains().allow_diagonal()),
                              op.mafs());
    const SpectralRadius sr = spectral_radius(scaled);
    out.radius = sr.radius;
    out.iterations = sr.iterations;
    out.method = op.is_max_form() ? "exact-cycle-mean" : "exact-spectral";
    if (!sr.converged) out.notes.push_back("spectral iteration hit its cap; radius approximate");
    bool fail;
    std::vector<int> cyc;
    if (op.is_max_form()) {
      cyc = nonexpanding_cycle(a);
      fail = !cyc.empty();
    } else {
      fail = !(sr.radius < 1.0);
      cyc = nonexpanding_cycle(a);
    }
    if (!fail) {
      out.verdict = Verdict::Pass;
      return out;
    }
    out.verdict = Verdict::Fail;
    if (!cyc.empty()) {
      out.witness = cycle_witness(scaled.gains(), cyc, 1.0);
    } else {
      out.witness = perron_witness(a);
    }
    return out;
  }

  if (op.is_linear()) {
    out.notes.push_back("verdict by sampled falsification (mode wraps the linear operator)");
  } else {
    out.notes.push_back("nonlinear gains: verdict by sampled falsification only");
  }

  const Predicate violates = violation_predicate(op, mode);
  const auto levels = geometric_grid(opts.level_lo, opts.level_hi, std::max(2, opts.levels));

  // Structured candidates first: cycle vectors, then the diagonal ray.
  std::vector<Vec> structured;
  if (n <= opts.cycle_cap) {
    for (const auto& c : cycle_report(op.gains(), opts.cycle_cap)) {
      for (double l : levels) structured.push_back(cycle_witness(op.gains(), c.cycle, l));
    }
  } else {
    out.notes.push_back("index count above cycle cap: cycle witnesses skipped");
  }
  for (double l : levels) structured.push_back(Vec::Constant(n, l));
  for (const auto& s : structured) {
    ++out.samples;
    if (violates(s)) {
      out.verdict = Verdict::Fail;
      out.witness = s;
      return out;
    }
  }

  // Random rays; each ray draws from its own seed so the result does not
  // depend on the worker count.
  const int rays = std::max(0, opts.rays);
  const int nlev = static_cast<int>(levels.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = std::clamp(opts.workers > 0 ? opts.workers : static_cast<int>(hw), 1,
                                 std::max(1, rays));
  auto direction = [&](int r) {
    std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(static_cast<std::uint64_t>(r))));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = u(rng) < 0.2 ? 0.0 : u(rng);
    if (!(d.maxCoeff() > 0.0)) d[static_cast<int>(u(rng) * n) % n] = 1.0;
    return Vec(d / d.maxCoeff());
  };
  std::vector<long> first_hit(workers, std::numeric_limits<long>::max());
  auto run = [&](int w) {
    for (int r = w; r < rays; r += workers) {
      const Vec d = direction(r);
      for (int l = 0; l < nlev; ++l) {
        const long idx = static_cast<long>(r) * nlev + l;
        if (idx >= first_hit[w]) return;
        if (violates(Vec(levels[l] * d))) {
          first_hit[w] = idx;
          return;
        }
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  out.samples += static_cast<long>(rays) * nlev;
  const long hit = *std::min_element(first_hit.begin(), first_hit.end());
  if (hit != std::numeric_limits<long>::max()) {
    const int r = static_cast<int>(hit / nlev);
    const int l = static_cast<int>(hit % nlev);
    const Vec d = direction(r);
    out.verdict = Verdict::Fail;
    out.witness = Vec(levels[l] * d);
  }
  return out;
}

}  // namespace isscert
