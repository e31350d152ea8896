#include "fieldmix/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fieldmix/dependency.hpp"
#include "fieldmix/dynamics.hpp"
#include "fieldmix/exact.hpp"
#include "fieldmix/matroid.hpp"
#include "fieldmix/models.hpp"
#include "fieldmix/suite.hpp"

namespace fieldmix {

namespace {

constexpr int kExhaustiveLimit = 20;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + " expects an integer, got '" + text + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Eigen::MatrixXd read_kernel_csv(const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::stringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_number_list(line));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw ConfigError("kernel file '" + path + "' is empty");
  Eigen::MatrixXd l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw ConfigError("kernel file '" + path + "' is not square");
    for (Eigen::Index j = 0; j < n; ++j) l(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, l.cwiseAbs().maxCoeff()))
    throw ConfigError("kernel in '" + path + "' is not symmetric");
  return l;
}

std::string model_name(const Settings& s, const std::string& task) {
  std::string name = s.text(task, "model", "");
  if (name.empty()) name = s.text(task, "name", "");
  if (name.empty()) throw ConfigError("no model given (set --model or [model] name)");
  return name;
}

Graph require_graph(const Settings& s, const std::string& task) {
  const auto spec = s.lookup(task, "graph");
  if (!spec) throw ConfigError("model requires a graph (--graph)");
  return load_graph(*spec);
}

double positive(const Settings& s, const std::string& task, const std::string& key, double fallback) {
  const double v = s.number(task, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive and finite");
  return v;
}

std::uint64_t require_seed(const Settings& s, const std::string& task) {
  const auto seed = s.seed(task);
  if (!seed) throw ConfigError("task '" + task + "' is randomized and needs --seed");
  return *seed;
}

std::vector<double> default_thetas() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json analytic_threshold(const BuiltModel& m, const Settings& s, const std::string& task) {
  nlohmann::json j;
  const double lambda = m.descriptor.value("lambda", 1.0);
  const double delta = s.number(task, "delta", 0.0);
  if (delta < 0.0 || delta > 1.0) throw ConfigError("delta must lie in [0, 1]");
  if (m.name == "hardcore") {
    const HardcoreThreshold t = hardcore_threshold(*m.graph, lambda);
    j["lambda_min"] = t.lambda_min;
    j["neg_lambda_min"] = -t.lambda_min;
    j["spectrum_method"] = t.spectrum_method;
    j["implied_delta"] = t.delta;
    j["certified"] = t.certified;
    j["delta"] = delta;
    j["lambda_limit"] = hardcore_lambda_star(t.lambda_min, delta);
    j["inequality"] = "lambda <= (1 - delta) / (-lambda_min - 1)";
  } else if (m.name == "monomer-dimer") {
    j["lambda_min_line_graph_lower_bound"] = -2.0;
    j["implied_delta"] = std::max(0.0, 1.0 - lambda);
    j["certified"] = lambda < 1.0;
    j["delta"] = delta;
    j["lambda_limit"] = 1.0 - delta;
    j["inequality"] = "lambda <= 1 - delta";
  } else if (m.name == "holant" || m.name == "b-matching") {
    std::vector<Signature> sigs;
    for (const auto& v : m.descriptor.at("signature")) sigs.emplace_back(v.get<std::vector<double>>());
    const HolantCertificate c = holant_certificate(*m.graph, sigs, lambda, delta);
    j["q"] = std::isinf(c.qr.q) ? nlohmann::json("inf") : nlohmann::json(c.qr.q);
    j["r"] = c.qr.r;
    j["unconditional"] = c.unconditional;
    j["delta"] = delta;
    j["lambda_limit"] = optional_json(c.lambda_limit);
    j["certified"] = c.certified;
    j["constant"] = c.constant;
    j["inequality"] = c.inequality;
  } else if (m.name == "random-cluster") {
    j["mls_constant"] = random_cluster_mls_constant(m.family.ground_size(), m.descriptor.at("q"), lambda);
    j["certified"] = m.descriptor.at("q").get<double>() <= 1.0;
  } else if (m.name == "dpp") {
    j["r_max_bound"] = optional_json(m.family.info().r_max_bound);
    if (m.family.info().r_max_bound)
      j["mls_constant"] = 1.0 / ((1.0 + *m.family.info().r_max_bound) * m.family.ground_size());
    j["certified"] = m.descriptor.at("alpha").get<double>() <= 1.0;
  } else if (m.name == "two-spin") {
    const TwoSpinParams p{m.descriptor.at("beta"), m.descriptor.at("gamma"), lambda};
    const TwoSpinCertificate c = two_spin_certificate(*m.graph, p, delta);
    j["regime"] = c.regime;
    j["lambda_star"] = c.lambda_star;
    j["max_degree"] = c.max_degree;
    j["regular"] = c.regular;
    j["flag"] = c.flag;
    j["delta"] = delta;
    j["lambda_limit"] = optional_json(c.lambda_limit);
    j["constant"] = c.constant;
  } else {
    j["certified"] = true;
    j["note"] = "no analytic threshold for this model";
  }
  return j;
}

TaskOutcome gen_graph(const Settings& s) {
  const long long n = s.integer("gen-graph", "n", -1);
  const long long d = s.integer("gen-graph", "degree", -1);
  if (n < 0 || d < 0) throw ConfigError("gen-graph needs n and degree");
  const Graph g = random_regular(static_cast<int>(n), static_cast<int>(d), require_seed(s, "gen-graph"));
  return {serialize(g), 0};
}

TaskOutcome check(const Settings& s) {
  const BuiltModel m = build_model(s, "check");
  nlohmann::json j;
  j["task"] = "check";
  j["model"] = m.descriptor;
  j["analytic"] = analytic_threshold(m, s, "check");
  DependencyReport r;
  if (m.family.ground_size() <= kExhaustiveLimit) {
    r = certify(m.family, ExhaustiveStrategy{});
  } else {
    const std::uint64_t seed = require_seed(s, "check");
    j["seed"] = seed;
    const auto count = s.integer("check", "samples", 50);
    if (count <= 0) throw ConfigError("samples must be positive");
    r = certify(m.family, SampledStrategy{static_cast<std::size_t>(count), seed});
  }
  auto cert = to_json(r);
  cert.erase("per_set");
  j["certificate"] = cert;
  return {j.dump(2) + "\n", 0};
}

TaskOutcome exact(const Settings& s) {
  const BuiltModel m = build_model(s, "exact");
  const std::string format = s.text("exact", "format", "json");
  if (format == "csv") {
    const ExactDistribution d = enumerate(m.family);
    std::ostringstream out;
    write_kernel_csv(out, glauber_matrix(d), d);
    return {out.str(), 0};
  }
  if (format != "json") throw ConfigError("format must be json or csv");
  const auto thetas = s.grid("exact", "theta", default_thetas());
  const ChainReport r = chain_report(m.descriptor.value("instance", m.name), m.family, thetas);
  nlohmann::json j = to_json(r);
  j["model"] = m.descriptor;
  j["certificate"].erase("per_set");
  return {j.dump(2) + "\n", r.passed ? 0 : 1};
}

TaskOutcome sample(const Settings& s) {
  const BuiltModel m = build_model(s, "sample");
  ChainConfig cfg;
  cfg.initial = m.family.empty_set();
  const long long steps = s.integer("sample", "steps", 1000);
  const long long chains = s.integer("sample", "chains", 1);
  const long long thin = s.integer("sample", "thin", 1);
  if (steps < 0 || chains < 1 || thin < 1) throw ConfigError("steps >= 0, chains >= 1 and thin >= 1 are required");
  cfg.steps = static_cast<std::size_t>(steps);
  cfg.chains = static_cast<int>(chains);
  cfg.thin = static_cast<std::size_t>(thin);
  cfg.seed = require_seed(s, "sample");
  const std::string kind_name = s.text("sample", "kind", "glauber");
  ChainKind kind;
  if (kind_name == "glauber") {
    kind = GlauberKind{};
  } else if (kind_name == "field") {
    const double theta = s.number("sample", "theta", 0.5);
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0, 1)");
    kind = FieldKind{theta};
  } else {
    throw ConfigError("kind must be glauber or field");
  }
  const ChainRun run = run_chains(m.family, cfg, kind);
  const std::string format = s.text("sample", "format", "json");
  if (format == "csv") {
    std::ostringstream out;
    write_trajectory_csv(out, run);
    return {out.str(), 0};
  }
  if (format != "json") throw ConfigError("format must be json or csv");
  nlohmann::json j = summary_json(run, cfg, kind);
  j["model"] = m.descriptor;
  return {j.dump(2) + "\n", 0};
}

TaskOutcome mix(const Settings& s) {
  const BuiltModel m = build_model(s, "mix");
  const ExactDistribution d = enumerate(m.family);
  const auto thetas = s.grid("mix", "theta", default_thetas());
  struct Row {
    std::string kind;
    double theta;
    double gap;
    std::uint64_t tmix;
  };
  std::vector<Row> rows;
  const KernelMatrix g = glauber_matrix(d);
  rows.push_back({"glauber", 0.0, spectral_gap(g, d), tv_mixing_time(g, d)});
  for (double t : thetas) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("theta values must lie in (0, 1)");
    const KernelMatrix k = field_matrix(d, t);
    rows.push_back({"field", t, spectral_gap(k, d), tv_mixing_time(k, d)});
  }
  if (s.text("mix", "format", "json") == "csv") {
    std::ostringstream out;
    out << std::setprecision(17) << "kind,theta,gap,tmix\n";
    for (const auto& r : rows) out << r.kind << ',' << r.theta << ',' << r.gap << ',' << r.tmix << '\n';
    return {out.str(), 0};
  }
  nlohmann::json j;
  j["model"] = m.descriptor;
  j["states"] = d.size();
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back({{"kind", r.kind}, {"theta", r.theta}, {"gap", r.gap}, {"tmix", r.tmix}});
  return {j.dump(2) + "\n", 0};
}

TaskOutcome verify_suite(const Settings& s) {
  SuiteOptions o;
  o.filter = s.text("verify-suite", "filter", "");
  if (const auto seed = s.seed("verify-suite")) o.seed = *seed;
  const std::string fault = s.text("verify-suite", "inject-fault", "false");
  o.inject_fault = fault == "true" || fault == "1" || fault == "yes";
  const auto results = run_suite(o);
  if (results.empty()) throw ConfigError("filter '" + o.filter + "' matches no criterion");
  const nlohmann::json j = to_json(results, o);
  return {j.dump(2) + "\n", j["all_passed"].get<bool>() ? 0 : 1};
}

}  // namespace

Graph load_graph(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.empty() ? spec : parts[0];
  auto arg = [&](std::size_t k) {
    if (k >= parts.size()) throw ConfigError("graph '" + spec + "' is missing a parameter");
    return parse_int(parts[k], "graph '" + spec + "'");
  };
  auto arity = [&](std::size_t k) {
    if (parts.size() != k + 1) throw ConfigError("graph '" + spec + "' expects " + std::to_string(k) + " parameters");
  };
  if (kind == "complete") return arity(1), complete_graph(arg(1));
  if (kind == "cycle") return arity(1), cycle_graph(arg(1));
  if (kind == "path") return arity(1), path_graph(arg(1));
  if (kind == "star") return arity(1), star_graph(arg(1));
  if (kind == "bipartite") return arity(2), complete_bipartite(arg(1), arg(2));
  if (kind == "petersen") return arity(0), petersen_graph();
  if (kind == "random-regular") {
    arity(3);
    if (parts[3].empty() || parts[3].front() == '-') throw ConfigError("graph seed must be nonnegative");
    return random_regular(arg(1), arg(2), std::stoull(parts[3]));
  }
  if (!std::filesystem::exists(spec)) throw ConfigError("graph file '" + spec + "' does not exist");
  return parse_edge_list(read_file(spec));
}

BuiltModel build_model(const Settings& s, const std::string& task) {
  const std::string name = model_name(s, task);
  nlohmann::json desc{{"name", name}};
  auto with_graph = [&]() {
    Graph g = require_graph(s, task);
    desc["graph"] = *s.lookup(task, "graph");
    return g;
  };
  if (name == "hardcore") {
    const Graph g = with_graph();
    const double l = positive(s, task, "lambda", 1.0);
    desc["lambda"] = l;
    return {name, hardcore(g, l), g, desc};
  }
  if (name == "monomer-dimer" || name == "matching") {
    const Graph g = with_graph();
    const double l = positive(s, task, "lambda", 1.0);
    desc["name"] = "monomer-dimer";
    desc["lambda"] = l;
    return {"monomer-dimer", monomer_dimer(g, l), g, desc};
  }
  if (name == "b-matching") {
    const Graph g = with_graph();
    const double l = positive(s, task, "lambda", 1.0);
    const long long b = s.integer(task, "b", 2);
    if (b < 1) throw ConfigError("b must be at least 1");
    desc["lambda"] = l;
    desc["b"] = b;
    desc["signature"] = nlohmann::json::array({b_matching_signature(static_cast<int>(b)).values()});
    return {name, b_matching(g, static_cast<int>(b), l), g, desc};
  }
  if (name == "holant") {
    const Graph g = with_graph();
    const double l = positive(s, task, "lambda", 1.0);
    const auto text = s.lookup(task, "signature");
    if (!text) throw ConfigError("holant needs a signature list (e.g. 1,2,4,8)");
    std::vector<Signature> sigs;
    nlohmann::json sj = nlohmann::json::array();
    for (const auto& part : split(*text, ';')) {
      sigs.emplace_back(parse_number_list(part));
      sj.push_back(sigs.back().values());
    }
    if (sigs.empty()) throw ConfigError("holant signature list is empty");
    desc["lambda"] = l;
    desc["signature"] = sj;
    return {name, holant(g, sigs, l), g, desc};
  }
  if (name == "matroid" || name == "random-cluster") {
    const std::string kind = s.text(task, "matroid", "graphic");
    std::optional<Graph> graph;
    std::optional<MatroidOracle> m;
    desc["matroid"] = kind;
    if (kind == "graphic") {
      graph = with_graph();
      m = MatroidOracle::graphic(*graph);
    } else if (kind.rfind("uniform:", 0) == 0) {
      const auto parts = split(kind, ':');
      if (parts.size() != 3) throw ConfigError("matroid uniform:N:R expected");
      m = MatroidOracle::uniform(parse_int(parts[1], "matroid size"), parse_int(parts[2], "matroid rank"));
    } else {
      throw ConfigError("matroid must be graphic or uniform:N:R");
    }
    const double l = positive(s, task, "lambda", 1.0);
    desc["lambda"] = l;
    if (name == "matroid") return {name, matroid_independent(*m, l), graph, desc};
    const double q = positive(s, task, "q", 1.0);
    desc["q"] = q;
    return {name, random_cluster(*m, q, l), graph, desc};
  }
  if (name == "dpp") {
    const auto kernel = s.lookup(task, "kernel");
    if (!kernel) throw ConfigError("dpp needs a kernel (CSV path or random:N:RANK)");
    const double alpha = positive(s, task, "alpha", 1.0);
    Eigen::MatrixXd l;
    if (kernel->rfind("random:", 0) == 0) {
      const auto parts = split(*kernel, ':');
      if (parts.size() != 3) throw ConfigError("kernel random:N:RANK expected");
      l = random_psd_kernel(parse_int(parts[1], "kernel size"), parse_int(parts[2], "kernel rank"),
                            require_seed(s, task));
      desc["seed"] = *s.seed(task);
    } else {
      l = read_kernel_csv(*kernel);
    }
    desc["kernel"] = *kernel;
    desc["alpha"] = alpha;
    return {name, dpp({l, alpha}), std::nullopt, desc};
  }
  if (name == "two-spin" || name == "ising") {
    const Graph g = with_graph();
    const double beta = s.number(task, "beta", 1.0);
    const double gamma = positive(s, task, "gamma", 1.0);
    const double l = positive(s, task, "lambda", 1.0);
    if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
    desc["name"] = "two-spin";
    desc["beta"] = beta;
    desc["gamma"] = gamma;
    desc["lambda"] = l;
    return {"two-spin", two_spin(g, {beta, gamma, l}), g, desc};
  }
  if (name == "product") {
    const auto text = s.lookup(task, "probabilities");
    if (!text) throw ConfigError("product needs probabilities (e.g. 0.3,0.5)");
    const auto p = parse_number_list(*text);
    for (double x : p)
      if (!(x > 0.0 && x < 1.0)) throw ConfigError("probabilities must lie in (0, 1)");
    desc["probabilities"] = p;
    return {name, product_family(p), std::nullopt, desc};
  }
  throw ConfigError("unknown model '" + name + "'");
}

TaskOutcome run_task(const std::string& task, const Settings& s) {
  if (task == "gen-graph") return gen_graph(s);
  if (task == "check") return check(s);
  if (task == "exact") return exact(s);
  if (task == "sample") return sample(s);
  if (task == "mix") return mix(s);
  if (task == "verify-suite") return verify_suite(s);
  throw ConfigError("unknown task '" + task + "'");
}

}  // namespace fieldmix
