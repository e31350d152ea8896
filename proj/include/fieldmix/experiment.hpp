#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "fieldmix/config.hpp"
#include "fieldmix/family.hpp"
#include "fieldmix/graph.hpp"

namespace fieldmix {

/// A graph file path, or one of complete:N, cycle:N, path:N, star:L,
/// bipartite:A:B, petersen, random-regular:N:D:SEED.
Graph load_graph(const std::string& spec);

struct BuiltModel {
  std::string name;
  WeightedFamily family;
  std::optional<Graph> graph;
  nlohmann::json descriptor;
};

/// Builds the model named by "model.name" (hardcore, monomer-dimer, b-matching,
/// holant, matroid, random-cluster, dpp, two-spin, product).
BuiltModel build_model(const Settings& s, const std::string& task);

struct TaskOutcome {
  /// Report body: JSON text, CSV, or an edge list.
  std::string body;
  int exit_code = 0;
};

/// Runs gen-graph, check, exact, sample, mix or verify-suite. Throws
/// ConfigError for invalid settings.
TaskOutcome run_task(const std::string& task, const Settings& s);

}  // namespace fieldmix
