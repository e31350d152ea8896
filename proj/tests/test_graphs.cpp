#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "fieldmix/errors.hpp"
#include "fieldmix/graph.hpp"
#include "fieldmix/rng.hpp"
#include "oracle.hpp"

using namespace fieldmix;

TEST_CASE("named graphs") {
  CHECK(complete_graph(4).edge_count() == 6);
  CHECK(cycle_graph(5).is_regular());
  CHECK(path_graph(4).max_degree() == 2);
  CHECK(star_graph(3).degree(0) == 3);
  CHECK(complete_bipartite(2, 3).edge_count() == 6);
  const Graph p = petersen_graph();
  CHECK(p.vertex_count() == 10);
  CHECK(p.edge_count() == 15);
  CHECK(p.is_regular());
  CHECK(p.max_degree() == 3);
}

TEST_CASE("simple graph contract") {
  Graph g(3);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(g.add_edge(1, 0), DomainError);
  CHECK_THROWS_AS(g.add_edge(2, 2), DomainError);
  CHECK_THROWS_AS(g.add_edge(0, 3), DomainError);
  CHECK(g.has_edge(1, 0));
  CHECK(g.edges().front() == std::pair{0, 1});
}

TEST_CASE("random regular graphs") {
  CHECK(random_regular(4, 3, 99) == complete_graph(4));
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Graph g = random_regular(6 + 2 * static_cast<int>(seed % 5), 3, seed);
    CHECK(g.is_regular());
    CHECK(g.max_degree() == 3);
  }
  const Graph a = random_regular(40, 4, 7);
  CHECK(a == random_regular(40, 4, 7));
  CHECK_FALSE(a == random_regular(40, 4, 8));
  try {
    random_regular(5, 3, 1);
    FAIL("expected a parity error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("nΔ must be even") != std::string::npos);
  }
  CHECK_THROWS_AS(random_regular(3, 3, 1), DomainError);
}

TEST_CASE("spectrum examples") {
  CHECK(min_adjacency_eigenvalue(complete_graph(2)) == doctest::Approx(-1.0));
  CHECK(min_adjacency_eigenvalue(complete_bipartite(3, 3)) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(min_adjacency_eigenvalue(petersen_graph()) == doctest::Approx(-2.0).epsilon(1e-12));
  const auto r = adjacency_spectrum(petersen_graph());
  CHECK(r.max == doctest::Approx(3.0));
  CHECK(r.method == "dense");
  const Graph empty(3);
  CHECK(min_adjacency_eigenvalue(empty) == 0.0);
}

TEST_CASE("dense and iterative spectra agree") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Graph g = random_regular(120, 3, seed);
    const auto d = adjacency_spectrum(g, SpectrumMethod::dense);
    const auto l = adjacency_spectrum(g, SpectrumMethod::iterative);
    CHECK(l.method == "iterative");
    CHECK(std::abs(d.min - l.min) <= 1e-6);
    CHECK(std::abs(d.max - l.max) <= 1e-6);
    CHECK(l.residual <= 1e-8);
  }
  const Graph big = random_regular(700, 3, 4);
  const auto a = adjacency_spectrum(big);
  CHECK(a.method == "iterative");
  CHECK(a.max == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(a.min - adjacency_spectrum(big, SpectrumMethod::dense).min) <= 1e-6);
  // Bipartite graphs put lambda_min at exactly -Delta.
  CHECK(adjacency_spectrum(complete_bipartite(3, 3), SpectrumMethod::iterative).min == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("property: Cauchy interlacing on induced subgraphs") {
  const Graph g = random_regular(30, 3, 11);
  const double lmin = min_adjacency_eigenvalue(g);
  Rng rng = make_stream(11, 0);
  std::bernoulli_distribution keep(0.5);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> vs;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (keep(rng)) vs.push_back(v);
    CHECK(min_adjacency_eigenvalue(g.induced(vs)) >= lmin - 1e-9);
  }
}

TEST_CASE("line graphs") {
  CHECK(line_graph(path_graph(3)) == complete_graph(2));
  CHECK(line_graph(complete_graph(3)) == complete_graph(3));
  const Graph l = line_graph(star_graph(3));
  CHECK(l == complete_graph(3));
  CHECK(min_adjacency_eigenvalue(l) >= -2.0);
  // Line-graph vertex i is edge i of the source graph.
  const Graph p4 = path_graph(4);
  const Graph lp = line_graph(p4);
  CHECK(lp.has_edge(0, 1));
  CHECK(lp.has_edge(1, 2));
  CHECK_FALSE(lp.has_edge(0, 2));
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    CHECK(min_adjacency_eigenvalue(line_graph(random_regular(20, 3, seed))) >= -2.0 - 1e-9);
}

TEST_CASE("edge list format") {
  CHECK(parse_edge_list("2 1\n0 1") == complete_graph(2));
  CHECK(parse_edge_list("3 3\n0 1\n1 2\n0 2") == complete_graph(3));
  CHECK_THROWS_AS(parse_edge_list("2 2\n0 1\n0 1"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("3 2\n0 1"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("3 1\n0 x"), ParseError);
  CHECK(serialize(complete_graph(4)) == "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_regular(30, 5, seed);
    CHECK(parse_edge_list(serialize(g)) == g);
  }
}
