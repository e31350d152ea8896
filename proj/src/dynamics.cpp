#include "fieldmix/dynamics.hpp"

#include <cassert>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "fieldmix/errors.hpp"

namespace fieldmix {

namespace {

double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

// Members X + T with T over `free` elements, in DFS order, with log-weights
// tilted by log(1 - theta) per added element.
void extensions(const WeightedFamily& f, const std::vector<int>& free, std::size_t from, SubsetState& cur,
                double log_field, double shift, std::vector<SubsetState>& sets, std::vector<double>& logw) {
  for (std::size_t k = from; k < free.size(); ++k) {
    cur.insert(free[k]);
    const double lw = f.log_weight(cur);
    if (lw != kNotMember) {
      sets.push_back(cur);
      logw.push_back(lw + shift + log_field);
      extensions(f, free, k + 1, cur, log_field, shift + log_field, sets, logw);
    }
    cur.erase(free[k]);
  }
}

}  // namespace

SubsetState glauber_step(const WeightedFamily& f, const SubsetState& s, Rng& rng) {
  const int n = f.ground_size();
  const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
  SubsetState out = s.without(i);
  const double base = f.log_weight(out);
  const double up = f.log_weight(out.with(i));
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (up != kNotMember && u < logistic(up - base)) out.insert(i);
  assert(f.contains(out));
  return out;
}

SubsetState field_step(const WeightedFamily& f, const SubsetState& s, double theta, Rng& rng, int limit) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
  std::bernoulli_distribution keep(theta);
  SubsetState x(f.ground_size());
  s.for_each([&](int i) {
    if (keep(rng)) x.insert(i);
  });
  std::vector<int> free;
  for (int i = 0; i < f.ground_size(); ++i)
    if (!x.contains(i) && f.contains(x.with(i))) free.push_back(i);
  if (static_cast<int>(free.size()) > limit) {
    throw CapabilityError("exact up step would enumerate over " + std::to_string(free.size()) +
                          " free elements (limit " + std::to_string(limit) + ")");
  }
  std::vector<SubsetState> sets{x};
  std::vector<double> logw{f.log_weight(x)};
  SubsetState cur = x;
  extensions(f, free, 0, cur, std::log1p(-theta), 0.0, sets, logw);
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(logw.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::exp(logw[k] - top);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  SubsetState out = sets[pick(rng)];
  assert(f.contains(out));
  return out;
}

namespace {

SubsetState step(const WeightedFamily& f, const SubsetState& s, const ChainKind& kind, Rng& rng) {
  if (const auto* fk = std::get_if<FieldKind>(&kind)) return field_step(f, s, fk->theta, rng);
  return glauber_step(f, s, rng);
}

Trajectory run_one(const WeightedFamily& f, const ChainConfig& cfg, const ChainKind& kind, int chain) {
  Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(chain));
  Trajectory t;
  t.chain = chain;
  SubsetState cur = cfg.initial;
  t.steps.push_back(0);
  t.states.push_back(cur);
  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    SubsetState next = step(f, cur, kind, rng);
    if (!(next == cur)) ++t.changes;
    cur = std::move(next);
    if (k % cfg.thin == 0) {
      t.steps.push_back(k);
      t.states.push_back(cur);
    }
  }
  return t;
}

double lag1_autocorrelation(const std::vector<SubsetState>& states) {
  const std::size_t n = states.size();
  if (n < 3) return 0.0;
  double mean = 0.0;
  for (const auto& s : states) mean += s.size();
  mean /= static_cast<double>(n);
  double var = 0.0;
  double cov = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = states[k].size() - mean;
    var += d * d;
    if (k + 1 < n) cov += d * (states[k + 1].size() - mean);
  }
  return var > 0.0 ? cov / var : 0.0;
}

}  // namespace

ChainRun run_chains(const WeightedFamily& f, const ChainConfig& cfg, const ChainKind& kind, Exec exec) {
  if (cfg.thin < 1) throw DomainError("thinning interval must be at least 1");
  if (cfg.chains < 1) throw DomainError("need at least one chain");
  if (!f.contains(cfg.initial)) throw DomainError("initial state is not a member of the family");
  ChainRun run;
  run.trajectories.resize(static_cast<std::size_t>(cfg.chains));
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < cfg.chains; ++c) run.trajectories[static_cast<std::size_t>(c)] = run_one(f, cfg, kind, c);
  } else {
    for (int c = 0; c < cfg.chains; ++c) run.trajectories[static_cast<std::size_t>(c)] = run_one(f, cfg, kind, c);
  }

  const int n = f.ground_size();
  ChainSummary& sum = run.summary;
  sum.mean_occupancy.assign(static_cast<std::size_t>(n), 0.0);
  std::size_t recorded = 0;
  std::size_t changes = 0;
  for (const auto& t : run.trajectories) {
    for (const auto& s : t.states) {
      s.for_each([&](int i) { sum.mean_occupancy[static_cast<std::size_t>(i)] += 1.0; });
      sum.mean_size += s.size();
    }
    recorded += t.states.size();
    changes += t.changes;
    sum.size_autocorrelation += lag1_autocorrelation(t.states);
  }
  for (double& m : sum.mean_occupancy) m /= static_cast<double>(recorded);
  sum.mean_size /= static_cast<double>(recorded);
  sum.size_autocorrelation /= cfg.chains;
  sum.change_rate = cfg.steps > 0 ? static_cast<double>(changes) / (static_cast<double>(cfg.steps) * cfg.chains) : 0.0;
  return run;
}

void write_trajectory_csv(std::ostream& out, const ChainRun& run) {
  out << "chain,step,bitmask_hex,size\n";
  for (const auto& t : run.trajectories)
    for (std::size_t k = 0; k < t.states.size(); ++k)
      out << t.chain << ',' << t.steps[k] << ',' << t.states[k].to_hex() << ',' << t.states[k].size() << '\n';
}

nlohmann::json summary_json(const ChainRun& run, const ChainConfig& cfg, const ChainKind& kind) {
  nlohmann::json j;
  if (const auto* fk = std::get_if<FieldKind>(&kind)) {
    j["kind"] = "field";
    j["theta"] = fk->theta;
  } else {
    j["kind"] = "glauber";
  }
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["thin"] = cfg.thin;
  j["chains"] = cfg.chains;
  j["initial"] = cfg.initial.to_hex();
  j["mean_occupancy"] = run.summary.mean_occupancy;
  j["mean_size"] = run.summary.mean_size;
  j["size_autocorrelation_lag1"] = run.summary.size_autocorrelation;
  j["change_rate"] = run.summary.change_rate;
  nlohmann::json finals = nlohmann::json::array();
  for (const auto& t : run.trajectories) finals.push_back(t.states.back().to_hex());
  j["final_states"] = finals;
  return j;
}

std::map<SubsetState, std::size_t> one_step_counts(const WeightedFamily& f, const SubsetState& start,
                                                   const ChainKind& kind, std::size_t trials,
                                                   std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::map<SubsetState, std::size_t> counts;
  for (std::size_t t = 0; t < trials; ++t) ++counts[step(f, start, kind, rng)];
  return counts;
}

ChiSquareResult chi_square_test(const std::vector<std::size_t>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size()) throw DomainError("observed and expected sizes differ");
  double total = 0.0;
  for (std::size_t c : observed) total += static_cast<double>(c);
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = expected[k] * total;
    if (expected[k] <= 0.0) {
      if (observed[k] > 0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        return r;
      }
      continue;
    }
    ++cells;
    const double d = static_cast<double>(observed[k]) - e;
    r.statistic += d * d / e;
  }
  r.degrees_of_freedom = cells - 1;
  if (r.degrees_of_freedom < 1) return r;
  boost::math::chi_squared dist(r.degrees_of_freedom);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace fieldmix
