#include "fieldmix/dependency.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fieldmix/errors.hpp"
#include "fieldmix/linalg.hpp"

namespace fieldmix {

namespace {

constexpr std::size_t kExhaustiveCap = std::size_t{1} << 20;
constexpr double kDeltaPrecision = 1e-6;
constexpr int kDeltaMaxIterations = 40;

std::vector<int> nonmaximal_moves(const WeightedFamily& f, const SubsetState& s) {
  auto moves = available_moves(f, s);
  if (moves.empty()) throw DomainError("M_S and r_S are defined only for non-maximal S");
  return moves;
}

Eigen::MatrixXd slack_matrix(const DependencyMatrix& m, const MarginalRatios& r, double delta) {
  const Eigen::Index k = m.values.rows();
  Eigen::MatrixXd slack = -m.values;
  for (Eigen::Index i = 0; i < k; ++i) slack(i, i) += 1.0 + (1.0 - delta) / r.values[i];
  return slack;
}

}  // namespace

MarginalRatios marginal_ratios(const WeightedFamily& f, const SubsetState& s) {
  MarginalRatios out{s, nonmaximal_moves(f, s), {}};
  const double base = f.log_weight(s);
  out.values.resize(static_cast<Eigen::Index>(out.elements.size()));
  for (std::size_t k = 0; k < out.elements.size(); ++k) {
    out.values[static_cast<Eigen::Index>(k)] = std::exp(f.log_weight(s.with(out.elements[k])) - base);
  }
  return out;
}

DependencyMatrix dependency_matrix(const WeightedFamily& f, const SubsetState& s) {
  DependencyMatrix out{s, nonmaximal_moves(f, s), {}};
  const auto& el = out.elements;
  const Eigen::Index k = static_cast<Eigen::Index>(el.size());
  const double base = f.log_weight(s);
  std::vector<double> single(el.size());
  for (std::size_t a = 0; a < el.size(); ++a) single[a] = f.log_weight(s.with(el[a]));
  out.values = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const SubsetState sa = s.with(el[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = a + 1; b < k; ++b) {
      const double pair = f.log_weight(sa.with(el[static_cast<std::size_t>(b)]));
      // expm1(-inf) is exactly -1, which encodes an infeasible pair.
      const double v = std::expm1(pair + base - single[static_cast<std::size_t>(a)] -
                                  single[static_cast<std::size_t>(b)]);
      out.values(a, b) = v;
      out.values(b, a) = v;
    }
  }
  return out;
}

DependencyMatrix analytic_dependency_matrix(const WeightedFamily& f, const SubsetState& s) {
  if (!f.info().dependency) throw DomainError("family '" + f.info().tag + "' has no analytic M_S");
  DependencyMatrix out{s, nonmaximal_moves(f, s), {}};
  out.values = f.info().dependency(s, out.elements);
  return out;
}

MarginalRatios analytic_marginal_ratios(const WeightedFamily& f, const SubsetState& s) {
  if (!f.info().ratios) throw DomainError("family '" + f.info().tag + "' has no analytic r_S");
  MarginalRatios out{s, nonmaximal_moves(f, s), {}};
  out.values = f.info().ratios(s, out.elements);
  return out;
}

ConditionCheck check_condition5(const DependencyMatrix& m, double tol) {
  if (tol < 0.0) tol = eigen_tolerance(m.values);
  const double top = max_eigenvalue(m.values);
  return {top <= 1.0 + tol, top};
}

ConditionCheck check_condition5(const WeightedFamily& f, const SubsetState& s, double tol) {
  return check_condition5(dependency_matrix(f, s), tol);
}

ConditionCheck check_condition6(const DependencyMatrix& m, const MarginalRatios& r, double delta,
                                double tol) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
  const Eigen::MatrixXd slack = slack_matrix(m, r, delta);
  if (tol < 0.0) tol = eigen_tolerance(slack);
  const double bottom = min_eigenvalue(slack);
  return {bottom >= -tol, bottom};
}

ConditionCheck check_condition6(const WeightedFamily& f, const SubsetState& s, double delta, double tol) {
  return check_condition6(dependency_matrix(f, s), marginal_ratios(f, s), delta, tol);
}

std::optional<double> largest_feasible_delta(const DependencyMatrix& m, const MarginalRatios& r) {
  if (check_condition5(m).holds) return 1.0;
  if (!check_condition6(m, r, 0.0).holds) return std::nullopt;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kDeltaMaxIterations && hi - lo > kDeltaPrecision; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (check_condition6(m, r, mid).holds) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::optional<double> largest_feasible_delta(const WeightedFamily& f, const SubsetState& s) {
  return largest_feasible_delta(dependency_matrix(f, s), marginal_ratios(f, s));
}

std::string to_string(RmaxProvenance p) {
  switch (p) {
    case RmaxProvenance::exact: return "exact";
    case RmaxProvenance::analytic_bound: return "analytic bound";
    case RmaxProvenance::unavailable: return "analytic bound unavailable";
  }
  return "unknown";
}

namespace {

std::optional<ConditioningResult> examine(const WeightedFamily& f, const SubsetState& s) {
  if (available_moves(f, s).empty()) return std::nullopt;
  const DependencyMatrix m = dependency_matrix(f, s);
  const MarginalRatios r = marginal_ratios(f, s);
  ConditioningResult out;
  out.conditioning = s;
  out.max_eigenvalue = max_eigenvalue(m.values);
  out.feasible_delta = largest_feasible_delta(m, r);
  out.max_ratio = r.values.maxCoeff();
  out.moves = m.elements.size();
  return out;
}

}  // namespace

DependencyReport certify(const WeightedFamily& f, const CertifyStrategy& strategy, Exec exec) {
  const int n = f.ground_size();
  std::vector<SubsetState> sets;
  DependencyReport report;
  report.ground_size = n;
  if (std::holds_alternative<ExhaustiveStrategy>(strategy)) {
    report.strategy = "exhaustive";
    for (std::uint64_t mask : support_masks(f, kExhaustiveCap)) sets.push_back(SubsetState::from_mask(n, mask));
  } else {
    const auto& sampled = std::get<SampledStrategy>(strategy);
    report.strategy = "sampled";
    Rng rng = make_stream(sampled.seed, 0);
    std::unordered_set<SubsetState, SubsetHash> seen;
    sets.push_back(f.empty_set());
    seen.insert(f.empty_set());
    for (std::size_t k = 0; k < sampled.count; ++k) {
      SubsetState s = random_member(f, rng);
      if (is_maximal(f, s) && s.size() > 0) {
        const auto elems = s.elements();
        s.erase(elems[std::uniform_int_distribution<std::size_t>(0, elems.size() - 1)(rng)]);
      }
      if (seen.insert(s).second) sets.push_back(std::move(s));
    }
  }

  std::vector<std::optional<ConditioningResult>> results(sets.size());
  const long long count = static_cast<long long>(sets.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long long k = 0; k < count; ++k) results[static_cast<std::size_t>(k)] = examine(f, sets[static_cast<std::size_t>(k)]);
  } else {
    for (long long k = 0; k < count; ++k) results[static_cast<std::size_t>(k)] = examine(f, sets[static_cast<std::size_t>(k)]);
  }

  report.worst_eigenvalue = -std::numeric_limits<double>::infinity();
  report.feasible_delta = 1.0;
  for (auto& r : results) {
    if (!r) continue;
    ++report.sets_checked;
    report.worst_eigenvalue = std::max(report.worst_eigenvalue, r->max_eigenvalue);
    report.observed_r_max = std::max(report.observed_r_max, r->max_ratio);
    if (!r->feasible_delta || *r->feasible_delta < 1.0) report.condition5 = false;
    if (!r->feasible_delta) report.feasible_delta.reset();
    else if (report.feasible_delta) report.feasible_delta = std::min(*report.feasible_delta, *r->feasible_delta);
    report.per_set.push_back(std::move(*r));
  }
  if (report.sets_checked == 0) report.worst_eigenvalue = 0.0;

  if (report.strategy == "exhaustive") {
    report.r_max = report.observed_r_max;
    report.r_max_provenance = RmaxProvenance::exact;
  } else if (f.info().r_max_bound) {
    report.r_max = f.info().r_max_bound;
    report.r_max_provenance = RmaxProvenance::analytic_bound;
  }
  if (report.r_max) {
    const double scale = (1.0 + *report.r_max) * n;
    if (report.feasible_delta && *report.feasible_delta > 0.0) report.poincare_constant = *report.feasible_delta / scale;
    if (report.condition5) report.mls_constant = 1.0 / scale;
  }
  return report;
}

}  // namespace fieldmix
