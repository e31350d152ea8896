#include <algorithm>
#include <bit>
#include <cmath>

#include "fieldmix/errors.hpp"
#include "fieldmix/exact.hpp"
#include "fieldmix/linalg.hpp"
#include "fieldmix/rng.hpp"

namespace fieldmix {

namespace {

constexpr double kDefaultSteps[] = {1e-2, 1e-3, 1e-4};

Eigen::VectorXd indicator(std::uint64_t x, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = static_cast<double>((x >> i) & 1u);
  return v;
}

// Richardson extrapolation of g(h) -> g(0) over a geometric grid, removing
// the O(h) term and then the O(h^2) term when enough points exist.
template <typename T>
T richardson(const std::vector<T>& g, const std::vector<double>& h) {
  if (g.size() == 1) return g[0];
  std::vector<T> level = g;
  for (int order = 1; level.size() > 1 && order <= 2; ++order) {
    std::vector<T> next;
    for (std::size_t k = 0; k + 1 < level.size(); ++k) {
      const double r = std::pow(h[k] / h[k + 1], order);
      next.push_back(((r * level[k + 1] - level[k]) / (r - 1.0)));
    }
    level = std::move(next);
  }
  return level.back();
}

std::vector<double> grid_or_default(std::span<const double> given) {
  if (!given.empty()) return {given.begin(), given.end()};
  return {std::begin(kDefaultSteps), std::end(kDefaultSteps)};
}

}  // namespace

double trickledown_margin(const ExactDistribution& d, std::uint64_t s, double theta, double delta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  const MomentData m = moments(d, 1.0 - theta, s);
  const double c = 1.0 / (1.0 - (1.0 - delta) * (1.0 - theta));
  const Eigen::MatrixXd slack = c * Eigen::MatrixXd(m.mean.asDiagonal()) - m.cov;
  return min_eigenvalue(slack);
}

double trickledown_sweep(const ExactDistribution& d, std::span<const double> thetas, double delta, Exec exec) {
  const auto sets = non_maximal_states(d);
  std::vector<double> worst(sets.size(), std::numeric_limits<double>::infinity());
  const long long count = static_cast<long long>(sets.size());
  auto run = [&](long long k) {
    for (double theta : thetas)
      worst[static_cast<std::size_t>(k)] =
          std::min(worst[static_cast<std::size_t>(k)], trickledown_margin(d, sets[static_cast<std::size_t>(k)], theta, delta));
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 2)
    for (long long k = 0; k < count; ++k) run(k);
  } else {
    for (long long k = 0; k < count; ++k) run(k);
  }
  double out = std::numeric_limits<double>::infinity();
  for (double w : worst) out = std::min(out, w);
  return out;
}

TrickledownEquation verify_trickledown_equation(const ExactDistribution& d, std::span<const double> h_grid) {
  const int n = d.ground_size;
  TrickledownEquation out;
  out.h = grid_or_default(h_grid);
  const MomentData mom = moments(d);
  Eigen::VectorXd pinv(n);
  for (int i = 0; i < n; ++i) pinv[i] = mom.mean[i] > 0.0 ? 1.0 / mom.mean[i] : 0.0;
  const Eigen::MatrixXd target = mom.cov * pinv.asDiagonal() * mom.cov;

  std::vector<Eigen::VectorXd> xs;
  for (std::uint64_t x : d.states) xs.push_back(indicator(x, n));

  std::vector<Eigen::MatrixXd> quotients;
  for (double h : out.h) {
    // E[Cov(Y_1 | Y_h)]: Y_h = y has weight mu(z) h^|y| (1-h)^(|z|-|y|) over z >= y.
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < d.size(); ++a) {
      const std::uint64_t y = d.states[a];
      const int sy = std::popcount(y);
      std::vector<std::size_t> ups;
      std::vector<double> w;
      double mass = 0.0;
      for (std::size_t b = 0; b < d.size(); ++b) {
        const std::uint64_t z = d.states[b];
        if ((z & y) != y) continue;
        const int sz = std::popcount(z);
        const double wz = d.prob[static_cast<Eigen::Index>(b)] * std::pow(h, sy) * std::pow(1.0 - h, sz - sy);
        ups.push_back(b);
        w.push_back(wz);
        mass += wz;
      }
      if (mass <= 0.0) continue;
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < ups.size(); ++k) mean += w[k] * xs[ups[k]];
      mean /= mass;
      for (std::size_t k = 0; k < ups.size(); ++k) {
        const Eigen::VectorXd dev = xs[ups[k]] - mean;
        expected.noalias() += w[k] * dev * dev.transpose();
      }
    }
    Eigen::MatrixXd sigma = mom.cov;
    quotients.push_back((sigma - expected) / h);
    out.errors.push_back((quotients.back() - target).cwiseAbs().maxCoeff());
  }
  const Eigen::MatrixXd limit = richardson(quotients, out.h);
  out.residual = (limit - target).cwiseAbs().maxCoeff();
  const double scale = target.cwiseAbs().maxCoeff();
  out.relative_residual = scale > 0.0 ? out.residual / scale : out.residual;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < out.h.size(); ++k) {
    if (!(out.errors[k] > 0.0)) continue;
    const double x = std::log(out.h[k]);
    const double y = std::log(out.errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 2) out.order = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  return out;
}

FieldGapCheck field_gap_bound_check(const ExactDistribution& d, double theta, double delta) {
  FieldGapCheck c;
  c.gap = spectral_gap(field_matrix(d, theta), d);
  c.bound = (1.0 - theta) * delta / (1.0 - (1.0 - theta) * (1.0 - delta));
  c.passed = c.gap >= c.bound - 1e-9;
  return c;
}

ComparisonLimit verify_comparison_limit(const ExactDistribution& d, std::span<const double> eps_grid) {
  const std::vector<double> eps = grid_or_default(eps_grid);
  std::vector<Eigen::MatrixXd> slopes;
  for (double e : eps) slopes.push_back(field_matrix(d, 1.0 - e).p / e);
  const Eigen::MatrixXd limit = richardson(slopes, eps);
  const Eigen::MatrixXd glauber = glauber_matrix(d, Exec::serial).p;
  const double n = d.ground_size;

  ComparisonLimit out;
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = 0; b < d.size(); ++b) {
      if (a == b) continue;
      const std::uint64_t s = d.states[a];
      const std::uint64_t t = d.states[b];
      const double slope = limit(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (std::popcount(s ^ t) != 1) {
        out.max_nonadjacent_slope = std::max(out.max_nonadjacent_slope, std::abs(slope));
        continue;
      }
      const std::size_t meet = *d.index_of(s & t);
      const double coef = (d.prob[static_cast<Eigen::Index>(a)] + d.prob[static_cast<Eigen::Index>(b)]) /
                          d.prob[static_cast<Eigen::Index>(meet)] * n *
                          glauber(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      ++out.adjacent_pairs;
      out.max_relative_error = std::max(out.max_relative_error, std::abs(slope - coef) / coef);
    }
  }
  return out;
}

double correlation_norm_f(const ExactDistribution& d, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in (0, 1]");
  double sup = 0.0;
  for (std::uint64_t s : non_maximal_states(d)) {
    const MomentData m = moments(d, lambda, s);
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < m.mean.size(); ++i)
      if (m.mean[i] > 0.0) live.push_back(i);
    const Eigen::Index k = static_cast<Eigen::Index>(live.size());
    Eigen::MatrixXd a(k, k);
    for (Eigen::Index p = 0; p < k; ++p)
      for (Eigen::Index q = 0; q < k; ++q)
        a(p, q) = m.cov(live[static_cast<std::size_t>(p)], live[static_cast<std::size_t>(q)]) /
                  std::sqrt(m.mean[live[static_cast<std::size_t>(p)]] * m.mean[live[static_cast<std::size_t>(q)]]);
    sup = std::max(sup, max_eigenvalue(a));
  }
  return sup;
}

FBoundCheck f_bound_check(const ExactDistribution& d, double delta, std::span<const double> lambdas) {
  FBoundCheck out;
  for (double l : lambdas) {
    const double v = correlation_norm_f(d, l);
    const double b = 1.0 / (1.0 - (1.0 - delta) * l);
    out.lambdas.push_back(l);
    out.values.push_back(v);
    out.bounds.push_back(b);
    if (v > b + 1e-9) out.passed = false;
  }
  return out;
}

Eigen::MatrixXd log_generating_hessian(const ExactDistribution& d, std::span<const double> z) {
  const MomentData m = moments(tilted(d, z));
  const int n = d.ground_size;
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = (i == j ? -m.mean[i] * m.mean[i] : m.cov(i, j)) / (z[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(j)]);
  return h;
}

HessianCheck log_concavity_hessian_check(const ExactDistribution& d, int samples, std::uint64_t seed) {
  const int n = d.ground_size;
  std::vector<std::vector<double>> points;
  for (int k = 0; k <= 3; ++k) points.emplace_back(static_cast<std::size_t>(n), std::pow(10.0, -k));
  Rng rng = make_stream(seed, 0);
  std::uniform_real_distribution<double> expo(-2.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> z(static_cast<std::size_t>(n));
    for (double& v : z) v = std::pow(10.0, expo(rng));
    points.push_back(std::move(z));
  }
  HessianCheck out;
  for (const auto& z : points) {
    const double top = max_eigenvalue(log_generating_hessian(d, z));
    if (top > out.max_eigenvalue) {
      out.max_eigenvalue = top;
      out.witness = z;
    }
  }
  return out;
}

ChainReport chain_report(const std::string& instance, const WeightedFamily& f, std::span<const double> thetas,
                         Exec exec) {
  ChainReport r;
  r.instance = instance;
  r.certificate = certify(f, ExhaustiveStrategy{}, exec);
  const ExactDistribution d = enumerate(f);
  const KernelMatrix p = glauber_matrix(d, exec);
  r.mu_min = d.min_probability();
  r.gap = spectral_gap(p, d);
  r.tmix = tv_mixing_time(p, d);
  r.tmix_strict = tv_mixing_time(p, d, 0.25, TvCriterion::below);
  const double n = f.ground_size();
  const double rmax = *r.certificate.r_max;
  const auto& delta = r.certificate.feasible_delta;
  if (delta && *delta > 0.0) {
    r.gap_bound = *delta / ((1.0 + rmax) * n);
    r.tmix_bound_poincare = std::log(4.0 / r.mu_min) / *r.gap_bound;
    if (r.gap < *r.gap_bound - 1e-9) r.passed = false;
    if (static_cast<double>(r.tmix_strict) > *r.tmix_bound_poincare) r.passed = false;
    for (double theta : thetas) {
      const double one[] = {theta};
      r.margins.push_back(trickledown_sweep(d, one, *delta, exec));
      if (r.margins.back() < -1e-9) r.passed = false;
    }
  }
  if (r.certificate.condition5) {
    r.tmix_bound_mls = (1.0 + rmax) * n * (std::log(std::log(1.0 / r.mu_min)) + 4.0);
    if (static_cast<double>(r.tmix_strict) > *r.tmix_bound_mls) r.passed = false;
  }
  return r;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

nlohmann::json to_json(const DependencyReport& r) {
  nlohmann::json j;
  j["strategy"] = r.strategy;
  j["ground_size"] = r.ground_size;
  j["sets_checked"] = r.sets_checked;
  j["worst_max_eigenvalue"] = r.worst_eigenvalue;
  j["condition_strong"] = r.condition5;
  j["feasible_delta"] = optional_json(r.feasible_delta);
  j["observed_r_max"] = r.observed_r_max;
  j["r_max"] = optional_json(r.r_max);
  j["r_max_provenance"] = to_string(r.r_max_provenance);
  j["poincare_constant"] = optional_json(r.poincare_constant);
  j["mls_constant"] = optional_json(r.mls_constant);
  return j;
}

nlohmann::json to_json(const ChainReport& r) {
  nlohmann::json j;
  j["instance"] = r.instance;
  j["certificate"] = to_json(r.certificate);
  j["mu_min"] = r.mu_min;
  j["gap"] = r.gap;
  j["gap_bound"] = optional_json(r.gap_bound);
  j["tmix"] = r.tmix;
  j["tmix_strict"] = r.tmix_strict;
  nlohmann::json bound;
  bound["mls"] = optional_json(r.tmix_bound_mls);
  bound["poincare"] = optional_json(r.tmix_bound_poincare);
  j["tmix_bound"] = bound;
  j["margins"] = r.margins;
  j["passed"] = r.passed;
  return j;
}

}  // namespace fieldmix
