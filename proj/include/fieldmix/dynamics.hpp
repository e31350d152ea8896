#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fieldmix/execution.hpp"
#include "fieldmix/family.hpp"
#include "fieldmix/rng.hpp"

namespace fieldmix {

/// Default cap on the ground size left after the down step of field dynamics.
inline constexpr int kFieldEnumerationLimit = 24;

/// One Glauber move: pick i uniformly, drop it, re-add it with probability
/// w(S'+i) / (w(S') + w(S'+i)).
SubsetState glauber_step(const WeightedFamily& f, const SubsetState& s, Rng& rng);

/// One field-dynamics move: keep each element with probability theta, then
/// draw X' >= X from (1 - theta) * mu^X by exact enumeration. Throws
/// CapabilityError when more than `limit` elements remain free.
SubsetState field_step(const WeightedFamily& f, const SubsetState& s, double theta, Rng& rng,
                       int limit = kFieldEnumerationLimit);

struct GlauberKind {};
struct FieldKind {
  double theta = 0.5;
};
using ChainKind = std::variant<GlauberKind, FieldKind>;

struct ChainConfig {
  SubsetState initial;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::size_t thin = 1;
  int chains = 1;
};

struct Trajectory {
  int chain = 0;
  /// Step index of each recorded state; step 0 is the initial state.
  std::vector<std::size_t> steps;
  std::vector<SubsetState> states;
  /// Steps whose outcome differed from the current state.
  std::size_t changes = 0;
};

struct ChainSummary {
  std::vector<double> mean_occupancy;
  double mean_size = 0.0;
  /// Lag-1 autocorrelation of |S_t| over recorded states, averaged over chains.
  double size_autocorrelation = 0.0;
  double change_rate = 0.0;
};

struct ChainRun {
  std::vector<Trajectory> trajectories;
  ChainSummary summary;
};

/// Independent chains; chain c draws from make_stream(cfg.seed, c), so the
/// output does not depend on the execution mode.
ChainRun run_chains(const WeightedFamily& f, const ChainConfig& cfg, const ChainKind& kind,
                    Exec exec = Exec::parallel);

/// CSV with header "chain,step,bitmask_hex,size".
void write_trajectory_csv(std::ostream& out, const ChainRun& run);
nlohmann::json summary_json(const ChainRun& run, const ChainConfig& cfg, const ChainKind& kind);

/// Outcome counts of `trials` independent single steps from `start`.
std::map<SubsetState, std::size_t> one_step_counts(const WeightedFamily& f, const SubsetState& start,
                                                   const ChainKind& kind, std::size_t trials,
                                                   std::uint64_t seed);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit. Cells with zero expected probability must be
/// empty, otherwise the p-value is 0.
ChiSquareResult chi_square_test(const std::vector<std::size_t>& observed, const std::vector<double>& expected);

}  // namespace fieldmix
