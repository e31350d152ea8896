#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fieldmix/rng.hpp"
#include "fieldmix/subset.hpp"

namespace fieldmix {

inline constexpr double kNotMember = -std::numeric_limits<double>::infinity();

/// Closed-form M_S over the given available moves (in that order).
using DependencyHook = std::function<Eigen::MatrixXd(const SubsetState&, std::span<const int>)>;
/// Closed-form r_S over the given available moves.
using RatioHook = std::function<Eigen::VectorXd(const SubsetState&, std::span<const int>)>;

/// Optional analytic metadata a model constructor attaches to its family.
struct ModelInfo {
  std::string tag = "generic";
  std::optional<double> r_max_bound;
  DependencyHook dependency;
  RatioHook ratios;
};

/// A positively weighted downward-closed family over {0, ..., n-1}.
///
/// The family is an immutable log-weight oracle: finite values mark members,
/// `kNotMember` (-inf) marks everything else. Copies share the oracle.
class WeightedFamily {
 public:
  using LogWeightFn = std::function<double(const SubsetState&)>;

  WeightedFamily(int n, LogWeightFn log_weight, ModelInfo info = {});

  int ground_size() const noexcept { return n_; }
  double log_weight(const SubsetState& s) const;
  bool contains(const SubsetState& s) const { return log_weight(s) != kNotMember; }

  const ModelInfo& info() const noexcept { return *info_; }
  WeightedFamily with_info(ModelInfo info) const;

  SubsetState empty_set() const { return SubsetState(n_); }

 private:
  int n_;
  std::shared_ptr<const LogWeightFn> fn_;
  std::shared_ptr<const ModelInfo> info_;
};

/// V_S: elements outside S whose addition stays in the family.
/// Throws DomainError when S is not a member.
std::vector<int> available_moves(const WeightedFamily& f, const SubsetState& s);
bool is_maximal(const WeightedFamily& f, const SubsetState& s);

/// lambda * mu: log-weights shifted by sum of log(lambda_i) over members of S.
WeightedFamily tilt(const WeightedFamily& f, std::span<const double> lambda);
WeightedFamily tilt(const WeightedFamily& f, double lambda);

/// mu^S over the ground set [n] \ S, re-indexed densely in increasing order.
/// `labels` (optional out) receives the original index of each new element.
WeightedFamily conditional(const WeightedFamily& f, const SubsetState& s,
                           std::vector<int>* labels = nullptr);

/// nu(S) proportional to mu(S)^alpha on the same support.
WeightedFamily power(const WeightedFamily& f, double alpha);

/// nu(S) proportional to phi(|S|) mu(S); phi given by its values phi(0..).
/// Sizes with phi = 0 (or beyond the table) leave the support.
WeightedFamily size_reweight(const WeightedFamily& f, std::vector<double> phi);

/// Greedy random member: draws a target size uniformly from {0, ..., n}, then
/// adds uniformly random available elements until it reaches that size or a
/// maximal set.
SubsetState random_member(const WeightedFamily& f, Rng& rng);

/// Probes downward closedness on random members and random subsets of them.
/// Returns the first violating subset found.
std::optional<SubsetState> find_downward_closure_violation(const WeightedFamily& f, int probes,
                                                           std::uint64_t seed);

/// Every member as a bit mask, in increasing mask order. Requires n <= 64.
/// Throws CapabilityError once more than `cap` members are found.
std::vector<std::uint64_t> support_masks(const WeightedFamily& f, std::size_t cap);

}  // namespace fieldmix
