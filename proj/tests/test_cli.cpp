#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "fieldmix/config.hpp"
#include "fieldmix/experiment.hpp"
#include "fieldmix/graph.hpp"
#include "fieldmix/suite.hpp"

using namespace fieldmix;

namespace {

Settings flags(std::initializer_list<std::pair<std::string, std::string>> kv) {
  Settings s;
  for (const auto& [k, v] : kv) s.set("flag." + k, v);
  return s;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("graph specs") {
  CHECK(load_graph("complete:4") == complete_graph(4));
  CHECK(load_graph("cycle:5") == cycle_graph(5));
  CHECK(load_graph("path:3") == path_graph(3));
  CHECK(load_graph("star:3") == star_graph(3));
  CHECK(load_graph("bipartite:2:3") == complete_bipartite(2, 3));
  CHECK(load_graph("petersen") == petersen_graph());
  CHECK(load_graph("random-regular:10:3:4") == random_regular(10, 3, 4));
  const auto path = temp_file("fieldmix_k3.txt", "3 3\n0 1\n1 2\n0 2\n");
  CHECK(load_graph(path.string()) == complete_graph(3));
  CHECK_THROWS_AS(load_graph("complete:x"), ConfigError);
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.txt"), ConfigError);
}

TEST_CASE("settings precedence") {
  const auto ini = temp_file("fieldmix_cfg.ini",
                             "seed = 3\n[model]\nname = hardcore\ngraph = cycle:5\nlambda = 0.5\n"
                             "[check]\nlambda = 0.7\n[sample]\nsteps = 10\n");
  Settings s = Settings::from_ini_file(ini.string());
  CHECK(s.number("check", "lambda", 0) == 0.7);
  CHECK(s.number("sample", "lambda", 0) == 0.5);
  CHECK(s.seed("sample") == 3u);
  s.set("flag.lambda", "0.9");
  CHECK(s.number("check", "lambda", 0) == 0.9);
  CHECK(s.grid("mix", "theta", {0.5}) == std::vector<double>{0.5});
  s.set("flag.theta", "0.2, 0.4");
  CHECK(s.grid("mix", "theta", {}) == std::vector<double>{0.2, 0.4});
  s.set("flag.theta", "");
  CHECK_THROWS_AS(s.grid("mix", "theta", {}), ConfigError);
  s.set("flag.seed", "-4");
  CHECK_THROWS_AS(s.seed("sample"), ConfigError);
  CHECK_THROWS_AS(Settings::from_ini_file("/nonexistent.ini"), ConfigError);
}

TEST_CASE("gen-graph") {
  const auto k4 = run_task("gen-graph", flags({{"n", "4"}, {"degree", "3"}, {"seed", "11"}}));
  CHECK(k4.body == "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
  CHECK(k4.exit_code == 0);
  CHECK_THROWS_WITH_AS(run_task("gen-graph", flags({{"n", "5"}, {"degree", "3"}, {"seed", "1"}})),
                       doctest::Contains("nΔ must be even"), DomainError);
  CHECK_THROWS_AS(run_task("gen-graph", flags({{"n", "6"}, {"degree", "3"}})), ConfigError);
  const auto g = run_task("gen-graph", flags({{"n", "50"}, {"degree", "3"}, {"seed", "8"}}));
  CHECK(parse_edge_list(g.body) == random_regular(50, 3, 8));
}

TEST_CASE("check reports per-model thresholds") {
  const auto gen = run_task("gen-graph", flags({{"n", "100"}, {"degree", "3"}, {"seed", "2024"}}));
  const auto path = temp_file("fieldmix_rr100.txt", gen.body);
  const auto hc = nlohmann::json::parse(
      run_task("check", flags({{"model", "hardcore"}, {"graph", path.string()}, {"lambda", "0.45"}, {"seed", "1"}})).body);
  const double neg = hc["analytic"]["neg_lambda_min"];
  CHECK(std::abs(neg - 2.0 * std::sqrt(2.0)) < 0.3);
  CHECK(hc["analytic"]["lambda_limit"].get<double>() == doctest::Approx(1.0 / (neg - 1.0)));
  CHECK(hc["certificate"]["strategy"] == "sampled");
  CHECK(hc["seed"] == 1);

  const auto md = nlohmann::json::parse(
      run_task("check", flags({{"model", "monomer-dimer"}, {"graph", "petersen"}, {"lambda", "0.5"}, {"delta", "0.5"}})).body);
  CHECK(md["analytic"]["inequality"] == "lambda <= 1 - delta");
  CHECK(md["analytic"]["lambda_limit"] == 0.5);
  CHECK(md["certificate"]["feasible_delta"].get<double>() >= 0.5 - 1e-6);

  const auto ho = nlohmann::json::parse(
      run_task("check", flags({{"model", "holant"}, {"graph", "complete:4"}, {"signature", "1,2,4,8"}})).body);
  CHECK(ho["analytic"]["unconditional"] == true);
  CHECK(ho["analytic"]["q"].get<double>() >= 0.5);

  CHECK_THROWS_AS(run_task("check", flags({{"model", "hardcore"}})), ConfigError);
  CHECK_THROWS_AS(run_task("check", flags({{"model", "bogus"}, {"graph", "cycle:4"}})), ConfigError);
  CHECK_THROWS_AS(run_task("check", flags({{"model", "hardcore"}, {"graph", "cycle:4"}, {"lambda", "-1"}})), ConfigError);
  CHECK_THROWS_AS(run_task("check", flags({{"model", "hardcore"}, {"graph", path.string()}})), ConfigError);
}

TEST_CASE("models from settings") {
  const auto kernel = temp_file("fieldmix_kernel.csv", "2,1\n1,2\n");
  CHECK(build_model(flags({{"model", "dpp"}, {"kernel", kernel.string()}, {"alpha", "0.5"}}), "check").family.ground_size() == 2);
  CHECK(build_model(flags({{"model", "dpp"}, {"kernel", "random:5:3"}, {"seed", "1"}}), "check").family.ground_size() == 5);
  CHECK(build_model(flags({{"model", "random-cluster"}, {"graph", "complete:4"}, {"q", "0.5"}}), "check").family.ground_size() == 6);
  CHECK(build_model(flags({{"model", "matroid"}, {"matroid", "uniform:5:2"}}), "check").family.ground_size() == 5);
  CHECK(build_model(flags({{"model", "b-matching"}, {"graph", "cycle:4"}, {"b", "2"}}), "check").family.ground_size() == 4);
  CHECK(build_model(flags({{"model", "two-spin"}, {"graph", "cycle:5"}, {"beta", "0.5"}, {"gamma", "1.2"}}), "check").name == "two-spin");
  CHECK(build_model(flags({{"model", "product"}, {"probabilities", "0.2,0.5"}}), "check").family.ground_size() == 2);
  const auto bad = temp_file("fieldmix_bad_kernel.csv", "2,1\n0,2\n");
  CHECK_THROWS_AS(build_model(flags({{"model", "dpp"}, {"kernel", bad.string()}}), "check"), ConfigError);
}

TEST_CASE("exact, sample and mix reports") {
  const auto base = flags({{"model", "hardcore"}, {"graph", "complete:2"}, {"lambda", "1"}});
  const auto ex = run_task("exact", base);
  CHECK(ex.exit_code == 0);
  const auto ej = nlohmann::json::parse(ex.body);
  CHECK(ej["gap"].get<double>() == doctest::Approx(0.25));
  CHECK(ej["tmix"] == 3);

  Settings csv = base;
  csv.set("flag.format", "csv");
  CHECK(run_task("exact", csv).body.rfind("from,0x0,0x1,0x2\n", 0) == 0);

  Settings s = base;
  s.set("flag.steps", "50");
  s.set("flag.chains", "2");
  s.set("flag.seed", "9");
  s.set("flag.kind", "field");
  s.set("flag.theta", "0.4");
  const auto a = run_task("sample", s);
  CHECK(a.body == run_task("sample", s).body);
  CHECK(nlohmann::json::parse(a.body)["seed"] == 9);
  s.set("flag.format", "csv");
  CHECK(run_task("sample", s).body.rfind("chain,step,bitmask_hex,size\n", 0) == 0);
  s.set("flag.kind", "metropolis");
  CHECK_THROWS_AS(run_task("sample", s), ConfigError);
  CHECK_THROWS_AS(run_task("sample", base), ConfigError);

  Settings m = base;
  m.set("flag.theta", "0.5");
  const auto mj = nlohmann::json::parse(run_task("mix", m).body);
  CHECK(mj["rows"].size() == 2);
  CHECK(mj["rows"][1]["gap"].get<double>() == doctest::Approx(0.5));
  m.set("flag.format", "csv");
  CHECK(run_task("mix", m).body.rfind("kind,theta,gap,tmix\nglauber,0,0.25,3\n", 0) == 0);
}

TEST_CASE("verify-suite task") {
  const auto only = run_task("verify-suite", flags({{"filter", "trickledown"}}));
  const auto j = nlohmann::json::parse(only.body);
  CHECK(j["criteria"].size() == 2);
  CHECK(j["criteria"][0]["name"] == "trickledown-inequality");
  CHECK(j["criteria"][1]["name"] == "trickledown-equation");
  CHECK(only.exit_code == 0);
  CHECK(only.body == run_task("verify-suite", flags({{"filter", "trickledown"}})).body);

  const auto fault = run_task("verify-suite", flags({{"filter", "kernel-correctness"}, {"inject-fault", "true"}}));
  CHECK(fault.exit_code != 0);
  CHECK(nlohmann::json::parse(fault.body)["criteria"][0]["passed"] == false);
  CHECK_THROWS_AS(run_task("verify-suite", flags({{"filter", "nothing-matches"}})), ConfigError);
}

TEST_CASE("criterion registry") {
  const auto& list = list_criteria();
  REQUIRE(list.size() == 13);
  for (std::size_t k = 0; k < list.size(); ++k) CHECK(list[k].id == static_cast<int>(k) + 1);
  CHECK(matches_filter(list[0], ""));
  CHECK(matches_filter(list[4], "trickledown"));
  CHECK(matches_filter(list[4], "5"));
  CHECK_FALSE(matches_filter(list[0], "gap"));
  CHECK_THROWS_AS(run_criterion(99, SuiteOptions{}), DomainError);
}
