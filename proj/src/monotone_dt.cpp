#include "isscert/monotone_dt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace isscert {

namespace {

void require_cone(const Eigen::Ref<const Vec>& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
      throw DomainError(std::string(what) + " must be componentwise >= 0 and finite");
    }
  }
}

double sup_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

std::uint64_t trial_seed(std::uint64_t seed, long k) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

DtTrajectory simulate(const GainOperator& op, const Eigen::Ref<const Vec>& x0,
                      const std::vector<Vec>& u, int K) {
  const int n = op.size();
  if (K < 0) throw DomainError("simulate: K must be >= 0");
  if (x0.size() != n) throw ShapeError("simulate: x0 has the wrong length");
  require_cone(x0, "initial state");
  if (K > 0 && u.size() != static_cast<size_t>(K) && u.size() != 1) {
    throw ShapeError("simulate: need K inputs or a single constant input");
  }
  for (const auto& uk : u) {
    if (uk.size() != n) throw ShapeError("simulate: input has the wrong length");
    require_cone(uk, "input");
  }
  DtTrajectory t;
  t.x.reserve(K + 1);
  t.x.push_back(x0);
  for (int k = 0; k < K; ++k) {
    const Vec& uk = u.size() == 1 ? u[0] : u[k];
    t.u.push_back(uk);
    t.x.push_back(op.apply(t.x.back()) + uk);
  }
  return t;
}

void write_csv(std::ostream& os, const DtTrajectory& traj) {
  const Eigen::Index n = traj.x.empty() ? 0 : traj.x[0].size();
  const auto old = os.precision(17);
  os << "k";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) os << ",u_" << i;
  os << "\n";
  for (size_t k = 0; k < traj.x.size(); ++k) {
    os << k;
    for (Eigen::Index i = 0; i < n; ++i) os << "," << traj.x[k][i];
    for (Eigen::Index i = 0; i < n; ++i) {
      os << ",";
      if (k < traj.u.size()) os << traj.u[k][i];
    }
    os << "\n";
  }
  os.precision(old);
}

EissAudit eiss_fit(const DtTrajectory& traj, double M, double a,
                   const std::optional<KFun>& gamma) {
  if (!(M >= 1.0)) throw DomainError("eiss_fit: M must be >= 1");
  if (!(a > 0.0 && a < 1.0)) throw DomainError("eiss_fit: a must lie in (0,1)");
  EissAudit out;
  if (traj.x.empty()) return out;
  double u_sup = 0.0;
  for (const auto& uk : traj.u) u_sup = std::max(u_sup, sup_norm(uk));
  const double offset = gamma ? (*gamma)(u_sup) : 0.0;
  const double x0 = sup_norm(traj.x[0]);
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < traj.x.size(); ++k) {
    const double bound = M * x0 * std::pow(a, static_cast<double>(k)) + offset;
    const double margin = bound - sup_norm(traj.x[k]);
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -1e-12 * std::max(1.0, bound) && !out.first_violation) {
      out.first_violation = static_cast<int>(k);
      out.pass = false;
    }
  }
  return out;
}

MbiVerdict mbi_probe(const GainOperator& op, int trials, const KFun& xi, std::uint64_t seed) {
  if (!xi.is_kinf()) throw ConfigError("mbi_probe: xi must be K-infinity");
  const int n = op.size();
  MbiVerdict out;
  out.seed = seed;
  for (long t = 0; t < trials; ++t) {
    std::mt19937_64 rng(trial_seed(seed, t));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double level = std::pow(10.0, -6.0 + 12.0 * u(rng));
    Vec v(n);
    if (t % 4 == 0) {
      v.setConstant(level);  // diagonal ray
    } else {
      for (int i = 0; i < n; ++i) v[i] = u(rng) < 0.2 ? 0.0 : level * u(rng);
    }
    const double rho_level = std::pow(10.0, -12.0 + 12.0 * u(rng)) * level;
    Vec rho(n);
    for (int i = 0; i < n; ++i) rho[i] = rho_level * u(rng);
    const Vec w = (v - op.apply(v) + rho).cwiseMax(0.0);
    ++out.trials;
    const double lhs = sup_norm(v);
    const double rhs = xi(sup_norm(w));
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (lhs > rhs * (1.0 + 1e-12) && !out.v_witness) {
      out.verdict = Verdict::Fail;
      out.v_witness = v;
      out.w_witness = w;
    }
  }
  return out;
}

double DtLyapunov::operator()(const Eigen::Ref<const Vec>& x) const {
  if (x.size() != op_.size()) throw ShapeError("DtLyapunov: wrong state length");
  require_cone(x, "DtLyapunov argument");
  Vec y = x;
  double v = sup_norm(y);
  double scale = 1.0;
  for (int k = 1; k < depth_; ++k) {
    y = op_.apply(y);
    scale *= eta_;
    v = std::max(v, scale * sup_norm(y));
  }
  return v;
}

DtLyapunov build_lyapunov(const GainOperator& op, double eta, std::uint64_t seed) {
  if (!(eta > 1.0) || !std::isfinite(eta)) throw DomainError("build_lyapunov: eta must be > 1");
  if (!op.is_linear() || !(op.is_max_form() || op.is_sum_form())) {
    throw UnsupportedError("build_lyapunov needs linear gains with max or sum rows");
  }
  const SpectralRadius sr = spectral_radius(op);
  if (!(eta * sr.radius < 1.0)) {
    throw InfeasibleError("build_lyapunov: eta * r = " + std::to_string(eta * sr.radius) +
                          " is not below 1");
  }
  constexpr int kMaxFirstDrop = 64;

  // a_n = ||A^n 1||; by homogeneity and monotonicity this is the operator
  // norm of A^n on the cone, and it is submultiplicative.
  std::vector<double> a{1.0};
  int first_drop = -1;
  for (int k = 1; k <= kMaxFirstDrop; ++k) {
    a.push_back(sup_norm(op.ones_orbit(k)));
    if (std::pow(eta, k) * a[k] < 1.0) {
      first_drop = k;
      break;
    }
  }
  if (first_drop < 0) {
    throw NumericalError("build_lyapunov: eta^n ||A^n|| did not drop below 1 within " +
                         std::to_string(kMaxFirstDrop) + " steps");
  }
  // eta^(kN1+m) a_(kN1+m) <= q^k * peak, so the sup is attained before D.
  const double q = std::pow(eta, first_drop) * a[first_drop];
  double peak = 1.0;
  for (int m = 0; m < first_drop; ++m) peak = std::max(peak, std::pow(eta, m) * a[m]);
  int blocks = 0;
  if (q > 0.0 && peak > 1.0) blocks = static_cast<int>(std::ceil(std::log(peak) / -std::log(q)));
  const int horizon = (blocks + 1) * first_drop;
  while (static_cast<int>(a.size()) <= horizon) {
    a.push_back(sup_norm(op.ones_orbit(static_cast<int>(a.size()))));
  }
  int depth = 1;
  for (int k = 1; k <= horizon; ++k) {
    if (std::pow(eta, k) * a[k] > 1.0) depth = k + 1;
  }

  DtLyapunov V(op, eta);
  V.depth_ = depth;
  const double c = sup_norm(op.ones_orbit(1));
  V.psi_ = 1.0;
  for (int k = 1; k < depth; ++k) V.psi_ = std::max(V.psi_, std::pow(eta * c, k));

  // Random dissipation certificate.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = op.size();
  V.worst_margin_ = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 1000; ++t) {
    const double lx = std::pow(10.0, -3.0 + 6.0 * u(rng));
    const double lu = std::pow(10.0, -3.0 + 6.0 * u(rng));
    Vec x(n), w(n);
    for (int i = 0; i < n; ++i) {
      x[i] = lx * u(rng);
      w[i] = u(rng) < 0.3 ? 0.0 : lu * u(rng);
    }
    const double lhs = V(op.apply(x) + w);
    const double rhs = V(x) / eta + V.psi_ * sup_norm(w);
    V.worst_margin_ = std::min(V.worst_margin_, rhs - lhs);
    if (lhs > rhs * (1.0 + 1e-12)) {
      throw NumericalError("build_lyapunov: dissipation check failed on a random sample");
    }
    ++V.certified_samples_;
  }
  return V;
}

}  // namespace isscert
