#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "fieldmix/dependency.hpp"
#include "fieldmix/execution.hpp"
#include "fieldmix/family.hpp"

namespace fieldmix {

inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 24;
/// Dense transition matrices are built only up to this many states.
inline constexpr std::size_t kMatrixStateCap = 4096;

/// A fully enumerated distribution. States are bit masks in increasing order.
struct ExactDistribution {
  int ground_size = 0;
  std::vector<std::uint64_t> states;
  std::vector<double> log_weights;
  Eigen::VectorXd prob;
  double log_partition = 0.0;

  std::size_t size() const noexcept { return states.size(); }
  std::optional<std::size_t> index_of(std::uint64_t mask) const;
  double min_probability() const { return prob.minCoeff(); }

  /// Normalizes the given (sorted, distinct) states and log-weights.
  static ExactDistribution from_log_weights(int n, std::vector<std::uint64_t> states,
                                            std::vector<double> log_weights);
};

ExactDistribution enumerate(const WeightedFamily& f, std::size_t cap = kEnumerationCap);

/// lambda * mu on the same states.
ExactDistribution tilted(const ExactDistribution& d, std::span<const double> lambda);
ExactDistribution tilted(const ExactDistribution& d, double lambda);

/// mu^S on [n] \ S, re-indexed densely; `labels` receives original indices.
ExactDistribution conditioned(const ExactDistribution& d, std::uint64_t s,
                              std::vector<int>* labels = nullptr);

/// Non-maximal states of d (states with at least one member superset).
std::vector<std::uint64_t> non_maximal_states(const ExactDistribution& d);

struct MomentData {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Two-pass moments; the covariance diagonal is set to m_i (1 - m_i).
MomentData moments(const ExactDistribution& d);
/// Moments of the optionally tilted and conditioned distribution, in the
/// coordinates of the conditioned ground set.
MomentData moments(const ExactDistribution& d, std::optional<double> tilt,
                   std::optional<std::uint64_t> conditioning);

enum class KernelKind { glauber, field, down, up };
std::string to_string(KernelKind k);

struct KernelMatrix {
  KernelKind kind = KernelKind::glauber;
  double theta = 0.0;
  Eigen::MatrixXd p;
};

KernelMatrix glauber_matrix(const ExactDistribution& d, Exec exec = Exec::parallel);
/// P_{1->theta}(S, T) = theta^|T| (1 - theta)^(|S| - |T|) for T a subset of S.
KernelMatrix down_kernel(const ExactDistribution& d, double theta);
/// Q_{theta->1}(X, X + T) proportional to mu(X + T) (1 - theta)^|T|.
KernelMatrix up_kernel(const ExactDistribution& d, double theta);
/// down_kernel * up_kernel.
KernelMatrix field_matrix(const ExactDistribution& d, double theta);

struct KernelDiagnostics {
  double row_sum_error = 0.0;
  double min_entry = 0.0;
  /// ||mu P - mu||_1.
  double stationarity = 0.0;
  /// max |mu(S) P(S,T) - mu(T) P(T,S)|.
  double reversibility = 0.0;
};
KernelDiagnostics diagnose(const KernelMatrix& k, const ExactDistribution& d);

/// CSV whose header and first column are the state bitmasks in hex.
void write_kernel_csv(std::ostream& out, const KernelMatrix& k, const ExactDistribution& d);

/// 1 - second largest eigenvalue of diag(mu)^1/2 P diag(mu)^-1/2.
double spectral_gap(const KernelMatrix& k, const ExactDistribution& d);

/// at_most: first t with TV <= eps (the default); below: first t with TV < eps.
enum class TvCriterion { at_most, below };
/// Worst-start total variation distance after t steps.
double tv_distance(const KernelMatrix& k, const ExactDistribution& d, std::uint64_t t);
/// Smallest t meeting the criterion, by doubling and then bisection.
std::uint64_t tv_mixing_time(const KernelMatrix& k, const ExactDistribution& d, double eps = 0.25,
                             TvCriterion criterion = TvCriterion::at_most);

// ---- verification ------------------------------------------------------------

/// lambda_min(c diag(m) - Cov) for (1 - theta) * mu^S, c = 1/(1 - (1-delta)(1-theta)).
double trickledown_margin(const ExactDistribution& d, std::uint64_t s, double theta, double delta);
/// Minimum margin over all non-maximal S and the given thetas.
double trickledown_sweep(const ExactDistribution& d, std::span<const double> thetas, double delta,
                         Exec exec = Exec::parallel);

struct TrickledownEquation {
  std::vector<double> h;
  /// ||(Sigma - E[Cov(Y_1 | Y_h)]) / h - Sigma Pi^+ Sigma||_max for each h.
  std::vector<double> errors;
  double residual = 0.0;
  double relative_residual = 0.0;
  /// Least-squares slope of log error against log h.
  double order = 0.0;
};
TrickledownEquation verify_trickledown_equation(const ExactDistribution& d,
                                                std::span<const double> h = {});

struct FieldGapCheck {
  double gap = 0.0;
  double bound = 0.0;
  bool passed = false;
};
FieldGapCheck field_gap_bound_check(const ExactDistribution& d, double theta, double delta);

struct ComparisonLimit {
  std::size_t adjacent_pairs = 0;
  double max_relative_error = 0.0;
  /// Largest extrapolated slope among pairs with |S delta T| >= 2.
  double max_nonadjacent_slope = 0.0;
};
ComparisonLimit verify_comparison_limit(const ExactDistribution& d, std::span<const double> eps = {});

/// sup over non-maximal S of the spectral radius of diag(m)^-1 Cov for
/// lambda * mu^S (zero-mean coordinates dropped).
double correlation_norm_f(const ExactDistribution& d, double lambda);

struct FBoundCheck {
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> bounds;
  bool passed = true;
};
FBoundCheck f_bound_check(const ExactDistribution& d, double delta, std::span<const double> lambdas);

struct HessianCheck {
  double max_eigenvalue = -std::numeric_limits<double>::infinity();
  std::vector<double> witness;
};
/// Hessian of log g_mu at random positive points z (log-uniform in
/// [10^-2, 10]) plus the diagonal points z = 10^-k 1.
HessianCheck log_concavity_hessian_check(const ExactDistribution& d, int samples, std::uint64_t seed);
/// Hessian of log g_mu at a single point.
Eigen::MatrixXd log_generating_hessian(const ExactDistribution& d, std::span<const double> z);

struct ChainReport {
  std::string instance;
  DependencyReport certificate;
  double mu_min = 0.0;
  double gap = 0.0;
  std::optional<double> gap_bound;
  std::uint64_t tmix = 0;
  /// Mixing time under the strict TV < 1/4 criterion.
  std::uint64_t tmix_strict = 0;
  std::optional<double> tmix_bound_mls;
  std::optional<double> tmix_bound_poincare;
  std::vector<double> margins;
  bool passed = true;
};
ChainReport chain_report(const std::string& instance, const WeightedFamily& f,
                         std::span<const double> thetas = {}, Exec exec = Exec::parallel);
nlohmann::json to_json(const ChainReport& r);
nlohmann::json to_json(const DependencyReport& r);

}  // namespace fieldmix
