#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fieldmix/execution.hpp"
#include "fieldmix/family.hpp"

namespace fieldmix {

struct CorpusEntry {
  std::string name;
  WeightedFamily family;
};

/// Desk-scale instances of every model, used by the verification battery.
std::vector<CorpusEntry> default_corpus();

struct SuiteOptions {
  /// Comma-separated name fragments or ids; empty runs everything.
  std::string filter;
  std::uint64_t seed = 20240917;
  /// Perturbs one row of a transition matrix before the kernel checks.
  bool inject_fault = false;
  Exec exec = Exec::parallel;
};

struct CriterionInfo {
  int id = 0;
  std::string name;
  std::string summary;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  nlohmann::json data;
};

const std::vector<CriterionInfo>& list_criteria();
bool matches_filter(const CriterionInfo& c, const std::string& filter);

/// Runs one criterion. Capability errors turn into a skipped result.
CriterionResult run_criterion(int id, const SuiteOptions& options);
std::vector<CriterionResult> run_suite(const SuiteOptions& options);

nlohmann::json to_json(const std::vector<CriterionResult>& results, const SuiteOptions& options);

}  // namespace fieldmix
