#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fieldmix/graph.hpp"
#include "fieldmix/subset.hpp"

namespace fieldmix {

/// Rank oracle of a matroid on {0, ..., n-1}. Rank calls are reentrant.
class MatroidOracle {
 public:
  static MatroidOracle uniform(int n, int rank);
  /// Edges of g (by edge id) are the elements.
  static MatroidOracle graphic(const Graph& g);
  /// Columns of `vectors` are the elements; rank is numerical with relative
  /// threshold `tol`.
  static MatroidOracle linear(const Eigen::MatrixXd& vectors, double tol = 1e-9);

  int ground_size() const noexcept { return n_; }
  const std::string& kind() const noexcept { return kind_; }
  int rank(const SubsetState& s) const { return rank_(s); }
  bool independent(const SubsetState& s) const { return rank(s) == s.size(); }

  /// Parallel classes of the contraction M/S. Entry e is a class id shared by
  /// exactly the elements parallel to e; -1 marks members of S and loops of M/S.
  std::vector<int> parallel_classes(const SubsetState& s) const;

 private:
  MatroidOracle(int n, std::string kind, std::function<int(const SubsetState&)> rank);

  int n_;
  std::string kind_;
  std::function<int(const SubsetState&)> rank_;
  std::shared_ptr<const Graph> graph_;
};

/// Random probes of rank(empty) = 0, unit increments, monotonicity and
/// submodularity. Returns a description of the first violation.
std::optional<std::string> find_matroid_axiom_violation(const MatroidOracle& m, int trials,
                                                        std::uint64_t seed);

}  // namespace fieldmix
