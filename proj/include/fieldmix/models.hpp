#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fieldmix/family.hpp"
#include "fieldmix/graph.hpp"
#include "fieldmix/matroid.hpp"

namespace fieldmix {

// ---- hardcore and matchings -------------------------------------------------

/// lambda-weighted independent sets of g. Analytic M_S = -A restricted to V_S.
WeightedFamily hardcore(const Graph& g, double lambda);

struct HardcoreThreshold {
  double lambda_min = 0.0;
  std::string spectrum_method;
  /// Largest delta with lambda <= (1 - delta) / (-lambda_min - 1); may be <= 0.
  double delta = 0.0;
  bool certified = false;
};

/// (1 - delta) / (-lambda_min - 1); +inf when -lambda_min <= 1.
double hardcore_lambda_star(double lambda_min, double delta);
HardcoreThreshold hardcore_threshold(const Graph& g, double lambda);

/// lambda-weighted matchings: hardcore on the line graph.
WeightedFamily monomer_dimer(const Graph& g, double lambda);

// ---- Holant -------------------------------------------------------------------

/// f(0), f(1), ...; values beyond the stored table are 0.
class Signature {
 public:
  explicit Signature(std::vector<double> values);
  double operator()(int k) const {
    return k >= 0 && static_cast<std::size_t>(k) < values_.size() ? values_[static_cast<std::size_t>(k)] : 0.0;
  }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Signature 1[k <= b].
Signature b_matching_signature(int b);

/// One signature per vertex, or a single one shared by all vertices.
WeightedFamily holant(const Graph& g, const std::vector<Signature>& f, double lambda);
WeightedFamily b_matching(const Graph& g, int b, double lambda);

struct HolantQR {
  /// +inf when no ratio with a nonzero denominator exists.
  double q = 0.0;
  double r = 0.0;
};
HolantQR holant_qr(const Graph& g, const std::vector<Signature>& f);

struct HolantCertificate {
  HolantQR qr;
  bool unconditional = false;
  /// (1 - delta) / ((1 - 2Q) R^2) when Q < 1/2.
  std::optional<double> lambda_limit;
  bool certified = false;
  /// MLS constant 1/((1+R)m) or Poincare constant delta/((1+R)m).
  double constant = 0.0;
  std::string inequality;
};
HolantCertificate holant_certificate(const Graph& g, const std::vector<Signature>& f, double lambda,
                                     double delta);

/// Diagonal 1 - g_S(u) - g_S(v) over the moves e = {u, v}.
Eigen::VectorXd holant_slack_diagonal(const Graph& g, const std::vector<Signature>& f,
                                      const SubsetState& s, std::span<const int> moves);

// ---- matroids -----------------------------------------------------------------

/// lambda-weighted independent sets of m.
WeightedFamily matroid_independent(const MatroidOracle& m, double lambda);
/// mu(S) proportional to q^-rk(S) lambda^|S| on all subsets; q in (0, 1].
WeightedFamily random_cluster(const MatroidOracle& m, double q, double lambda);
double random_cluster_mls_constant(int n, double q, double lambda);

// ---- DPP ------------------------------------------------------------------------

struct DppKernel {
  Eigen::MatrixXd l;
  double alpha = 1.0;
};

/// mu(S) proportional to det(L_SS)^alpha over sets with L_SS positive definite.
WeightedFamily dpp(const DppKernel& kernel);
/// B B^T / rank with B an n x rank Gaussian matrix.
Eigen::MatrixXd random_psd_kernel(int n, int rank, std::uint64_t seed);

// ---- two-spin ------------------------------------------------------------------

struct TwoSpinParams {
  double beta = 1.0;
  double gamma = 1.0;
  double lambda = 1.0;
  bool antiferromagnetic() const { return beta * gamma < 1.0; }
};

/// w(S) = beta^m1 gamma^m0 lambda^|S| over all subsets of vertices.
WeightedFamily two_spin(const Graph& g, const TwoSpinParams& p);

struct TwoSpinCertificate {
  /// 1: MLS regime, 2: Poincare regime with the given delta, 0: neither.
  int regime = 0;
  double lambda_star = 0.0;
  int max_degree = 0;
  bool regular = true;
  std::string flag;
  std::optional<double> lambda_limit;
  double constant = 0.0;
};
TwoSpinCertificate two_spin_certificate(const Graph& g, const TwoSpinParams& p, double delta);

// ---- product -----------------------------------------------------------------------

/// Independent inclusions with probabilities p_i in (0, 1).
WeightedFamily product_family(const std::vector<double>& p);

}  // namespace fieldmix
