#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fieldmix/dynamics.hpp"
#include "fieldmix/errors.hpp"
#include "fieldmix/exact.hpp"
#include "fieldmix/graph.hpp"
#include "fieldmix/matroid.hpp"
#include "fieldmix/models.hpp"
#include "oracle.hpp"

using namespace fieldmix;

namespace {

// |observed - expected| within k standard errors of a binomial frequency.
bool within_sigma(std::size_t hits, std::size_t trials, double p, double k = 3.0) {
  const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return std::abs(static_cast<double>(hits) / static_cast<double>(trials) - p) <= k * sd;
}

}  // namespace

TEST_CASE("glauber step on a single site") {
  const double lambda = 2.5;
  const WeightedFamily f = product_family({lambda / (1.0 + lambda)});
  Rng rng = make_stream(1, 0);
  std::size_t hits = 0;
  const std::size_t trials = 200000;
  for (std::size_t t = 0; t < trials; ++t) hits += glauber_step(f, f.empty_set(), rng).size();
  CHECK(within_sigma(hits, trials, lambda / (1.0 + lambda)));
}

TEST_CASE("glauber step on a single edge matches the exact kernel") {
  const WeightedFamily f = hardcore(complete_graph(2), 1.0);
  const ExactDistribution d = enumerate(f);
  const double p = glauber_matrix(d).p(0, 1);
  CHECK(p == doctest::Approx(0.25));
  Rng rng = make_stream(2, 0);
  std::size_t hits = 0;
  const std::size_t trials = 1000000;
  const SubsetState target = SubsetState::from_mask(2, 1);
  for (std::size_t t = 0; t < trials; ++t) hits += glauber_step(f, f.empty_set(), rng) == target ? 1 : 0;
  CHECK(within_sigma(hits, trials, p));
}

TEST_CASE("glauber step from a basis only removes or stays") {
  const WeightedFamily f = matroid_independent(MatroidOracle::graphic(complete_graph(4)), 1.0);
  const SubsetState basis = SubsetState::from_mask(6, 0b000111);
  REQUIRE(is_maximal(f, basis));
  Rng rng = make_stream(3, 0);
  for (int t = 0; t < 2000; ++t) CHECK(glauber_step(f, basis, rng).is_subset_of(basis));
}

TEST_CASE("field step on a single site") {
  const double lambda = 1.5;
  const double theta = 0.3;
  const WeightedFamily f = product_family({lambda / (1.0 + lambda)});
  Rng rng = make_stream(4, 0);
  std::size_t hits = 0;
  const std::size_t trials = 200000;
  for (std::size_t t = 0; t < trials; ++t) hits += field_step(f, f.empty_set(), theta, rng).size();
  const double expected = (1.0 - theta) * lambda / (1.0 + (1.0 - theta) * lambda);
  CHECK(within_sigma(hits, trials, expected));
  CHECK(field_matrix(enumerate(f), theta).p(0, 1) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("field chain is stationary on a single edge") {
  const WeightedFamily f = hardcore(complete_graph(2), 1.0);
  ChainConfig cfg;
  cfg.initial = f.empty_set();
  cfg.steps = 1000000;
  cfg.seed = 5;
  const ChainRun run = run_chains(f, cfg, FieldKind{0.5});
  const auto& states = run.trajectories[0].states;
  std::size_t in0 = 0;
  for (std::size_t k = 1; k < states.size(); ++k) in0 += states[k].contains(0) ? 1 : 0;
  // Successive states are correlated; the field gap is 1/2, so inflate the
  // standard error by the integrated autocorrelation factor (1 + rho)/(1 - rho) = 3.
  const double sd = std::sqrt(3.0 * (1.0 / 3.0) * (2.0 / 3.0) / static_cast<double>(cfg.steps));
  CHECK(std::abs(static_cast<double>(in0) / cfg.steps - 1.0 / 3.0) <= 3.0 * sd);
  CHECK(run.summary.mean_occupancy[0] == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("field step refuses oversized up steps") {
  const WeightedFamily f = product_family(std::vector<double>(26, 0.5));
  Rng rng = make_stream(6, 0);
  CHECK_THROWS_AS(field_step(f, f.empty_set(), 0.5, rng), CapabilityError);
  CHECK_NOTHROW(field_step(f, f.empty_set(), 0.5, rng, 26));
  CHECK_THROWS_AS(field_step(f, f.empty_set(), 1.0, rng), DomainError);
}

TEST_CASE("run_chains contract") {
  const WeightedFamily f = hardcore(random_regular(64, 3, 1), 0.49);
  ChainConfig cfg;
  cfg.initial = f.empty_set();
  cfg.seed = 77;
  cfg.steps = 0;
  const ChainRun empty = run_chains(f, cfg, GlauberKind{});
  REQUIRE(empty.trajectories.size() == 1);
  CHECK(empty.trajectories[0].states.size() == 1);
  CHECK(empty.trajectories[0].states[0] == cfg.initial);

  cfg.steps = 20000;
  cfg.chains = 3;
  cfg.thin = 10;
  const ChainRun a = run_chains(f, cfg, GlauberKind{}, Exec::parallel);
  const ChainRun b = run_chains(f, cfg, GlauberKind{}, Exec::serial);
  REQUIRE(a.trajectories.size() == 3);
  for (int c = 0; c < 3; ++c) {
    CHECK(a.trajectories[c].states == b.trajectories[c].states);
    CHECK(a.trajectories[c].states.size() == 2001);
    for (const auto& s : a.trajectories[c].states) CHECK(f.contains(s));
  }
  CHECK_FALSE(a.trajectories[0].states == a.trajectories[1].states);
  // Smoke check only: the mean density settles well inside (0, 1/2).
  CHECK(a.summary.mean_size > 5.0);
  CHECK(a.summary.mean_size < 32.0);

  std::ostringstream x, y;
  write_trajectory_csv(x, a);
  write_trajectory_csv(y, b);
  CHECK(x.str() == y.str());
  CHECK(summary_json(a, cfg, GlauberKind{}).dump() == summary_json(b, cfg, GlauberKind{}).dump());
  CHECK(summary_json(a, cfg, GlauberKind{})["seed"] == 77);
}

TEST_CASE("trajectory csv format") {
  const WeightedFamily f = hardcore(complete_graph(2), 1.0);
  ChainConfig cfg;
  cfg.initial = SubsetState::from_mask(2, 2);
  cfg.steps = 2;
  cfg.seed = 1;
  std::ostringstream out;
  write_trajectory_csv(out, run_chains(f, cfg, GlauberKind{}));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "chain,step,bitmask_hex,size");
  std::getline(in, line);
  CHECK(line == "0,0,0000000000000002,1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("empirical one-step kernels match exact kernels") {
  const std::vector<WeightedFamily> families{hardcore(complete_graph(2), 1.0), hardcore(path_graph(3), 0.7),
                                             matroid_independent(MatroidOracle::uniform(3, 2), 1.3)};
  std::uint64_t seed = 100;
  for (const auto& f : families) {
    const ExactDistribution d = enumerate(f);
    REQUIRE(d.size() <= 12);
    for (const ChainKind& kind : {ChainKind{GlauberKind{}}, ChainKind{FieldKind{0.35}}}) {
      const auto k = std::holds_alternative<GlauberKind>(kind) ? glauber_matrix(d) : field_matrix(d, 0.35);
      for (std::size_t a = 0; a < d.size(); ++a) {
        const auto counts = one_step_counts(f, SubsetState::from_mask(d.ground_size, d.states[a]), kind, 100000, seed++);
        std::vector<std::size_t> observed(d.size(), 0);
        for (const auto& [s, c] : counts) observed[*d.index_of(s.mask())] = c;
        std::vector<double> expected(d.size());
        for (std::size_t b = 0; b < d.size(); ++b) expected[b] = k.p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        CHECK(chi_square_test(observed, expected).p_value > 0.001);
      }
    }
  }
}

TEST_CASE("chi-square test") {
  const auto fair = chi_square_test({5000, 5000}, {0.5, 0.5});
  CHECK(fair.statistic == 0.0);
  CHECK(fair.degrees_of_freedom == 1);
  CHECK(fair.p_value == doctest::Approx(1.0));
  // Oracle: chi2 = 2 * 100^2 / 5000 = 4 on 1 dof, p = erfc(sqrt(2)).
  const auto biased = chi_square_test({5100, 4900}, {0.5, 0.5});
  CHECK(biased.statistic == doctest::Approx(4.0));
  CHECK(biased.p_value == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-10));
  CHECK(chi_square_test({10, 1}, {1.0, 0.0}).p_value == 0.0);
}
