// Runs every acceptance criterion once, prints one PASS/FAIL line per
// criterion and exits nonzero if any fails or exceeds its time limit.

#include <chrono>
#include <cstdio>
#include <map>

#include "fieldmix/suite.hpp"

int main() {
  using Clock = std::chrono::steady_clock;
  // Wall-clock limits in seconds; criteria without an entry share the suite budget.
  const std::map<int, double> limits{{1, 60.0}, {2, 60.0}, {12, 180.0}, {13, 60.0}};
  constexpr double kSuiteLimit = 300.0;

  fieldmix::SuiteOptions options;
  options.exec = fieldmix::Exec::serial;
  int failures = 0;
  const auto suite_start = Clock::now();
  for (const auto& c : fieldmix::list_criteria()) {
    const auto start = Clock::now();
    const fieldmix::CriterionResult r = fieldmix::run_criterion(c.id, options);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const auto limit = limits.find(c.id);
    const bool in_time = limit == limits.end() || seconds <= limit->second;
    const bool ok = r.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s %2d %-24s %7.2fs  %s%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                r.skipped ? "skipped: " : "", r.detail.c_str());
    if (!in_time) std::printf("     time limit %.0fs exceeded\n", limit->second);
  }
  const double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
  const bool suite_in_time = total <= kSuiteLimit;
  if (!suite_in_time) ++failures;
  std::printf("%s suite total %.2fs (limit %.0fs), %d failure(s)\n", failures == 0 ? "PASS" : "FAIL", total,
              kSuiteLimit, failures);
  return failures == 0 ? 0 : 1;
}
