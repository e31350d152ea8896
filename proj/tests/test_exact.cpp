#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "fieldmix/dependency.hpp"
#include "fieldmix/errors.hpp"
#include "fieldmix/exact.hpp"
#include "fieldmix/graph.hpp"
#include "fieldmix/matroid.hpp"
#include "fieldmix/models.hpp"
#include "oracle.hpp"

using namespace fieldmix;

namespace {

const std::vector<double> kThetas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

const std::vector<std::pair<int, int>> kEdge{{0, 1}};
const std::vector<std::pair<int, int>> kK3{{0, 1}, {0, 2}, {1, 2}};

ExactDistribution hardcore_dist(int n, const std::vector<std::pair<int, int>>& edges, double lambda) {
  return enumerate(hardcore(Graph(n, edges), lambda));
}

}  // namespace

TEST_CASE("enumeration") {
  const auto edge = hardcore_dist(2, kEdge, 1.0);
  CHECK(edge.states == std::vector<std::uint64_t>{0, 1, 2});
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(edge.prob[k] == doctest::Approx(1.0 / 3.0));
  const auto k3 = hardcore_dist(3, kK3, 1.0);
  CHECK(k3.size() == 4);
  CHECK(k3.prob.maxCoeff() == doctest::Approx(0.25));
  CHECK(k3.index_of(3) == std::nullopt);
  CHECK(k3.index_of(4) == 3u);
  CHECK(enumerate(product_family({0.5, 0.5, 0.5})).size() == 8);
  CHECK_THROWS_AS(enumerate(product_family(std::vector<double>(12, 0.5)), 1000), CapabilityError);
}

TEST_CASE("moments") {
  const std::vector<double> p{0.2, 0.6, 0.9};
  const auto pm = moments(enumerate(product_family(p)));
  for (int i = 0; i < 3; ++i) {
    CHECK(pm.mean[i] == doctest::Approx(p[static_cast<std::size_t>(i)]));
    CHECK(pm.cov(i, i) == doctest::Approx(p[static_cast<std::size_t>(i)] * (1 - p[static_cast<std::size_t>(i)])));
  }
  CHECK(pm.cov(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

  const double lambda = 3.0;
  const auto one = moments(enumerate(product_family({lambda / (1 + lambda)})));
  CHECK(one.mean[0] == doctest::Approx(lambda / (1 + lambda)));
  CHECK(one.cov(0, 0) == doctest::Approx(lambda / ((1 + lambda) * (1 + lambda))));

  const auto edge = moments(hardcore_dist(2, kEdge, 1.0));
  CHECK(edge.cov(0, 1) == doctest::Approx(-1.0 / 9.0));

  // Tilted and conditioned moments against direct enumeration.
  const auto d = hardcore_dist(4, {{0, 1}, {1, 2}, {2, 3}}, 1.0);
  const auto c = moments(d, 0.5, std::uint64_t{1});
  // Conditioned on {0}: ground {1,2,3} with 1 blocked; members {}, {2}, {3} weight 1, 0.5, 0.5.
  CHECK(c.mean.size() == 3);
  CHECK(c.mean[0] == doctest::Approx(0.0));
  CHECK(c.mean[1] == doctest::Approx(0.25));
  CHECK(c.cov(1, 2) == doctest::Approx(-0.25 * 0.25));
}

TEST_CASE("tilting and conditioning distributions") {
  const auto d = hardcore_dist(3, {{0, 1}, {1, 2}}, 1.0);
  const auto t = tilted(d, 2.0);
  CHECK(t.prob[*t.index_of(5)] == doctest::Approx(4.0 / (1 + 2 + 2 + 2 + 4)));
  std::vector<int> labels;
  const auto c = conditioned(d, 1, &labels);
  CHECK(labels == std::vector<int>{1, 2});
  CHECK(c.states == std::vector<std::uint64_t>{0, 2});
  CHECK(non_maximal_states(d) == std::vector<std::uint64_t>{0, 1, 4});
}

TEST_CASE("glauber kernel") {
  const auto d = hardcore_dist(2, kEdge, 1.0);
  const auto k = glauber_matrix(d);
  Eigen::MatrixXd expected(3, 3);
  expected << 0.5, 0.25, 0.25,
              0.25, 0.75, 0.0,
              0.25, 0.0, 0.75;
  CHECK((k.p - expected).cwiseAbs().maxCoeff() <= 1e-15);

  const double lambda = 0.4;
  const auto one = enumerate(product_family({lambda / (1 + lambda)}));
  const auto k1 = glauber_matrix(one);
  for (int r = 0; r < 2; ++r) {
    CHECK(k1.p(r, 0) == doctest::Approx(1 / (1 + lambda)));
    CHECK(k1.p(r, 1) == doctest::Approx(lambda / (1 + lambda)));
  }
  CHECK(spectral_gap(k1, one) == doctest::Approx(1.0));
  CHECK(tv_mixing_time(k1, one) == 1);

  // Serial and parallel construction agree exactly; both match the oracle.
  const auto big = enumerate(hardcore(random_regular(12, 3, 12), 0.4));
  const auto a = glauber_matrix(big, Exec::serial);
  const auto b = glauber_matrix(big, Exec::parallel);
  CHECK((a.p - b.p).cwiseAbs().maxCoeff() == 0.0);
  const auto table = oracle::table(12, oracle::independent_sets(random_regular(12, 3, 12).edges(), 0.4));
  CHECK((a.p - oracle::glauber(table)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("field kernel") {
  const auto d = hardcore_dist(3, kK3, 0.5);
  const auto table = oracle::table(3, oracle::independent_sets(kK3, 0.5));
  for (double theta : {0.1, 0.5, 0.9}) {
    const auto k = field_matrix(d, theta);
    CHECK((k.p - oracle::field(table, theta)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((k.p - down_kernel(d, theta).p * up_kernel(d, theta).p).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // Frozen from the oracle: row of the empty set at theta = 1/2.
  const auto k = field_matrix(d, 0.5);
  CHECK(k.p(0, 0) == doctest::Approx(4.0 / 7.0));
  CHECK(k.p(0, 1) == doctest::Approx(1.0 / 7.0));

  const auto frozen = field_matrix(hardcore_dist(2, kEdge, 1.0), 1.0 - 1e-6);
  CHECK((frozen.p - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK_THROWS_AS(field_matrix(d, 0.0), DomainError);
}

TEST_CASE("property: kernel invariants") {
  const std::vector<WeightedFamily> families{hardcore(petersen_graph(), 0.7), monomer_dimer(complete_graph(4), 1.2),
                                             dpp({random_psd_kernel(5, 4, 2), 0.5}),
                                             random_cluster(MatroidOracle::graphic(complete_graph(4)), 0.4, 1.0)};
  for (const auto& f : families) {
    const auto d = enumerate(f);
    std::vector<KernelMatrix> ks{glauber_matrix(d)};
    for (double t : {0.1, 0.5, 0.9}) ks.push_back(field_matrix(d, t));
    for (const auto& k : ks) {
      const auto g = diagnose(k, d);
      CHECK(g.row_sum_error <= 1e-12);
      CHECK(g.min_entry >= 0.0);
      CHECK(g.stationarity <= 1e-10);
      CHECK(g.reversibility <= 1e-12);
    }
    const auto m = moments(d);
    for (Eigen::Index i = 0; i < m.mean.size(); ++i) CHECK(m.cov(i, i) == m.mean[i] * (1.0 - m.mean[i]));
  }
}

TEST_CASE("spectral gaps and mixing times against the oracle") {
  struct Case {
    int n;
    std::vector<std::pair<int, int>> edges;
    double lambda;
    double gap;
    std::uint64_t tmix;
  };
  // Gaps and mixing times computed by the brute-force oracle and frozen here.
  const std::vector<Case> cases{{2, kEdge, 1.0, 0.25, 3},
                                {3, kK3, 1.0, 1.0 / 6.0, 6},
                                {3, kK3, 0.5, 2.0 / 9.0, 4},
                                {4, {{0, 1}, {1, 2}, {2, 3}}, 1.0, 0.09412754953531677, 10},
                                {5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, 1.0, 0.0806472914668942, 13},
                                {4, {{0, 1}, {0, 2}, {0, 3}}, 1.0, 0.0971812693369184, 13}};
  for (const auto& c : cases) {
    const auto d = hardcore_dist(c.n, c.edges, c.lambda);
    const auto k = glauber_matrix(d);
    const auto table = oracle::table(c.n, oracle::independent_sets(c.edges, c.lambda));
    CHECK(spectral_gap(k, d) == doctest::Approx(c.gap).epsilon(1e-10));
    CHECK(spectral_gap(k, d) == doctest::Approx(oracle::gap(oracle::glauber(table), table.prob)).epsilon(1e-10));
    CHECK(tv_mixing_time(k, d) == c.tmix);
    CHECK(tv_mixing_time(k, d) == static_cast<std::uint64_t>(oracle::tmix(k.p, d.prob)));
    CHECK(tv_mixing_time(k, d, 0.25, TvCriterion::below) == static_cast<std::uint64_t>(oracle::tmix(k.p, d.prob, true)));
  }
  const auto forests = enumerate(matroid_independent(MatroidOracle::graphic(complete_graph(4)), 1.0));
  CHECK(forests.size() == 38);
  CHECK(spectral_gap(glauber_matrix(forests), forests) == doctest::Approx(0.10148401053402323).epsilon(1e-10));
  CHECK(tv_mixing_time(glauber_matrix(forests), forests) == 13);

  const auto edge = hardcore_dist(2, kEdge, 1.0);
  for (auto [theta, gap] : {std::pair{0.1, 0.9}, std::pair{0.5, 0.5}, std::pair{0.9, 0.1}})
    CHECK(spectral_gap(field_matrix(edge, theta), edge) == doctest::Approx(gap).epsilon(1e-10));
  CHECK(tv_distance(glauber_matrix(edge), edge, 0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("mixing-time bound under the strong condition") {
  for (const auto& f : {matroid_independent(MatroidOracle::graphic(complete_graph(4)), 1.0),
                        hardcore(complete_graph(3), 1.0), dpp({random_psd_kernel(5, 5, 9), 1.0})}) {
    const auto cert = certify(f, ExhaustiveStrategy{});
    REQUIRE(cert.condition5);
    const auto d = enumerate(f);
    const double bound = (1.0 + *cert.r_max) * f.ground_size() * (std::log(std::log(1.0 / d.min_probability())) + 4.0);
    CHECK(static_cast<double>(tv_mixing_time(glauber_matrix(d), d)) <= bound);
  }
}

TEST_CASE("trickle-down inequality") {
  const auto p = enumerate(product_family({0.3, 0.5, 0.8}));
  for (double theta : {0.1, 0.5, 0.9}) CHECK(trickledown_margin(p, 0, theta, 1.0) >= -1e-12);
  const auto edge = hardcore_dist(2, kEdge, 1.0);
  CHECK(trickledown_margin(edge, 0, 0.5, 1.0) >= -1e-9);
  for (double l : {0.25, 0.5, 1.0}) CHECK(trickledown_sweep(hardcore_dist(3, kK3, l), kThetas, 1.0) >= -1e-9);
  // With delta above the certified value the inequality eventually breaks.
  const auto star = hardcore_dist(4, {{0, 1}, {0, 2}, {0, 3}}, 1.0);
  CHECK(trickledown_sweep(star, kThetas, 2.0 - std::sqrt(3.0)) >= -1e-9);
  const double serial = trickledown_sweep(star, kThetas, 0.25, Exec::serial);
  CHECK(serial == trickledown_sweep(star, kThetas, 0.25, Exec::parallel));
}

TEST_CASE("trickle-down equation") {
  for (const auto& d : {enumerate(product_family({0.3, 0.5, 0.8})), enumerate(product_family({0.6})),
                        hardcore_dist(2, kEdge, 1.0), hardcore_dist(3, kK3, 0.5)}) {
    const auto t = verify_trickledown_equation(d);
    CHECK(t.relative_residual <= 1e-4);
  }
  const auto t = verify_trickledown_equation(hardcore_dist(2, kEdge, 1.0));
  CHECK(t.order == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("field gap bound") {
  const auto p = enumerate(product_family({0.3, 0.7}));
  for (double theta : kThetas) {
    const auto c = field_gap_bound_check(p, theta, 1.0);
    CHECK(c.bound == doctest::Approx(1.0 - theta));
    CHECK(c.passed);
  }
  const auto edge = field_gap_bound_check(hardcore_dist(2, kEdge, 1.0), 0.5, 1.0);
  CHECK(edge.gap >= 0.5 - 1e-12);
  const auto c4 = enumerate(matroid_independent(MatroidOracle::graphic(cycle_graph(4)), 1.0));
  for (double theta : kThetas) CHECK(field_gap_bound_check(c4, theta, 1.0).passed);
}

TEST_CASE("comparison limit") {
  const auto edge = verify_comparison_limit(hardcore_dist(2, kEdge, 1.0));
  CHECK(edge.adjacent_pairs == 4);
  CHECK(edge.max_relative_error <= 0.05);
  CHECK(edge.max_nonadjacent_slope <= 1e-3);
  const auto one = verify_comparison_limit(enumerate(product_family({0.7})));
  CHECK(one.adjacent_pairs == 2);
  CHECK(one.max_relative_error <= 1e-6);
  const auto k3 = verify_comparison_limit(hardcore_dist(3, kK3, 0.5));
  CHECK(k3.max_relative_error <= 0.05);
}

TEST_CASE("correlation norm f") {
  const double w = 1.7;
  const auto one = enumerate(product_family({w / (1 + w)}));
  for (double l : {0.1, 0.5, 1.0}) CHECK(correlation_norm_f(one, l) == doctest::Approx(1.0 / (1.0 + l * w)));
  const auto k3 = hardcore_dist(3, kK3, 1.0);
  CHECK(correlation_norm_f(k3, 1e-8) == doctest::Approx(1.0).epsilon(1e-6));
  const std::vector<double> grid{0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
  const auto c = f_bound_check(k3, 1.0, grid);
  CHECK(c.passed);
  for (std::size_t k = 1; k < c.values.size(); ++k) CHECK(c.values[k] >= c.values[k - 1] - 1e-12);
  for (std::size_t k = 0; k < c.values.size(); ++k) CHECK(c.values[k] <= c.bounds[k] + 1e-12);
}

TEST_CASE("log-concavity Hessian") {
  const auto p = enumerate(product_family({0.3, 0.5}));
  const std::vector<double> z{0.7, 2.0};
  const Eigen::MatrixXd h = log_generating_hessian(p, z);
  CHECK(h(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(h(0, 0) < 0.0);
  CHECK(h(1, 1) < 0.0);

  // Finite-difference oracle on log g for K_{1,3} hardcore.
  const auto star = hardcore_dist(4, {{0, 1}, {0, 2}, {0, 3}}, 1.0);
  const std::vector<double> z0{0.4, 1.3, 0.8, 2.2};
  auto log_g = [&](std::vector<double> x) {
    double g = 0.0;
    for (std::size_t a = 0; a < star.size(); ++a) {
      double term = star.prob[static_cast<Eigen::Index>(a)];
      for (int i = 0; i < 4; ++i)
        if ((star.states[a] >> i) & 1u) term *= x[static_cast<std::size_t>(i)];
      g += term;
    }
    return std::log(g);
  };
  const Eigen::MatrixXd hs = log_generating_hessian(star, z0);
  const double e = 1e-4;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      auto at = [&](double di, double dj) {
        std::vector<double> x = z0;
        x[i] += di;
        x[j] += dj;
        return log_g(x);
      };
      const double fd = (at(e, e) - at(e, -e) - at(-e, e) + at(-e, -e)) / (4 * e * e);
      CHECK(hs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == doctest::Approx(fd).epsilon(1e-5));
    }

  const auto bad = log_concavity_hessian_check(star, 50, 1);
  CHECK(bad.max_eigenvalue > 0.0);
  CHECK(bad.witness.size() == 4);
  const auto forests = enumerate(matroid_independent(MatroidOracle::graphic(complete_graph(4)), 1.0));
  CHECK(log_concavity_hessian_check(forests, 20, 2).max_eigenvalue <= 1e-8);
}

TEST_CASE("chain report") {
  const auto r = chain_report("forests-k4", matroid_independent(MatroidOracle::graphic(complete_graph(4)), 1.0), kThetas);
  CHECK(r.passed);
  CHECK(r.gap >= *r.gap_bound);
  CHECK(static_cast<double>(r.tmix_strict) <= *r.tmix_bound_mls);
  CHECK(static_cast<double>(r.tmix) <= *r.tmix_bound_poincare);
  const auto j = to_json(r);
  for (const char* key : {"instance", "certificate", "gap", "gap_bound", "tmix", "tmix_bound", "margins"})
    CHECK(j.contains(key));
  CHECK(j["certificate"]["condition_strong"] == true);

  std::ostringstream csv;
  const auto d = hardcore_dist(2, kEdge, 1.0);
  write_kernel_csv(csv, glauber_matrix(d), d);
  CHECK(csv.str() == "from,0x0,0x1,0x2\n0x0,0.5,0.25,0.25\n0x1,0.25,0.75,0\n0x2,0.25,0,0.75\n");
}
