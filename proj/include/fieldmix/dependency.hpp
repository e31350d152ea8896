#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fieldmix/execution.hpp"
#include "fieldmix/family.hpp"

namespace fieldmix {

/// r_S over V_S: r_S(i) = mu(S + i) / mu(S).
struct MarginalRatios {
  SubsetState conditioning;
  std::vector<int> elements;
  Eigen::VectorXd values;
};

/// M_S over V_S. Entry (i, j) is w(S+i+j) w(S) / (w(S+i) w(S+j)) - 1, with
/// exactly -1 whenever S+i+j leaves the family, and a zero diagonal.
struct DependencyMatrix {
  SubsetState conditioning;
  std::vector<int> elements;
  Eigen::MatrixXd values;
};

MarginalRatios marginal_ratios(const WeightedFamily& f, const SubsetState& s);
DependencyMatrix dependency_matrix(const WeightedFamily& f, const SubsetState& s);

/// The model's closed-form hooks evaluated at S. Throw DomainError if the
/// family carries no such hook.
DependencyMatrix analytic_dependency_matrix(const WeightedFamily& f, const SubsetState& s);
MarginalRatios analytic_marginal_ratios(const WeightedFamily& f, const SubsetState& s);

struct ConditionCheck {
  bool holds = false;
  /// lambda_max(M_S) for the strong condition; lambda_min of the slack matrix
  /// I + (1 - delta) diag(r_S)^-1 - M_S for the weak one.
  double eigenvalue = 0.0;
};

/// M_S <= I: lambda_max(M_S) <= 1 + tol. A negative tol selects the default
/// relative tolerance (eigen_tolerance).
ConditionCheck check_condition5(const DependencyMatrix& m, double tol = -1.0);
ConditionCheck check_condition5(const WeightedFamily& f, const SubsetState& s, double tol = -1.0);

/// M_S <= I + (1 - delta) diag(r_S)^-1.
ConditionCheck check_condition6(const DependencyMatrix& m, const MarginalRatios& r, double delta,
                                double tol = -1.0);
ConditionCheck check_condition6(const WeightedFamily& f, const SubsetState& s, double delta,
                                double tol = -1.0);

/// Largest delta in [0, 1] for which the weak condition holds at S, to 1e-6
/// by bisection; 1 when the strong condition holds; nullopt when it fails
/// already at delta = 0.
std::optional<double> largest_feasible_delta(const DependencyMatrix& m, const MarginalRatios& r);
std::optional<double> largest_feasible_delta(const WeightedFamily& f, const SubsetState& s);

struct ExhaustiveStrategy {};
struct SampledStrategy {
  std::size_t count = 0;
  std::uint64_t seed = 0;
};
using CertifyStrategy = std::variant<ExhaustiveStrategy, SampledStrategy>;

enum class RmaxProvenance { exact, analytic_bound, unavailable };
std::string to_string(RmaxProvenance p);

struct ConditioningResult {
  SubsetState conditioning;
  double max_eigenvalue = 0.0;
  std::optional<double> feasible_delta;
  double max_ratio = 0.0;
  std::size_t moves = 0;
};

/// Conditions aggregated over non-maximal conditionings.
struct DependencyReport {
  std::string strategy;
  int ground_size = 0;
  std::size_t sets_checked = 0;
  std::vector<ConditioningResult> per_set;
  double worst_eigenvalue = 0.0;
  bool condition5 = true;
  /// Minimum of the per-set feasible deltas; nullopt if some set admits none.
  std::optional<double> feasible_delta;
  double observed_r_max = 0.0;
  std::optional<double> r_max;
  RmaxProvenance r_max_provenance = RmaxProvenance::unavailable;
  /// delta / ((1 + r_max) n), when a positive delta and r_max are available.
  std::optional<double> poincare_constant;
  /// 1 / ((1 + r_max) n), when the strong condition holds everywhere checked.
  std::optional<double> mls_constant;
};

DependencyReport certify(const WeightedFamily& f, const CertifyStrategy& strategy,
                         Exec exec = Exec::parallel);

}  // namespace fieldmix
