#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fieldmix {

/// Simple undirected graph. Edge ids follow insertion order.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  void add_edge(int u, int v);

  int vertex_count() const noexcept { return static_cast<int>(adj_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  int max_degree() const;
  bool is_regular() const;
  bool has_edge(int u, int v) const;

  Eigen::MatrixXd adjacency_matrix() const;
  /// Subgraph induced on `vertices`, relabelled by position.
  Graph induced(const std::vector<int>& vertices) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph path_graph(int n);
Graph star_graph(int leaves);
Graph complete_bipartite(int a, int b);
Graph petersen_graph();

/// Configuration model: pair up degree stubs uniformly and restart on any
/// loop or repeated edge. Throws GenerationError after 10000 restarts.
Graph random_regular(int n, int degree, std::uint64_t seed);

/// Vertices are the edges of g (same ids); adjacent when they share an endpoint.
Graph line_graph(const Graph& g);

/// Text format: "n m" header, then m lines "u v".
Graph parse_edge_list(const std::string& text);
std::string serialize(const Graph& g);

enum class SpectrumMethod { automatic, dense, iterative };

struct SpectrumResult {
  double min = 0.0;
  double max = 0.0;
  /// Largest ||A v - lambda v|| / ||v|| over the two reported pairs.
  double residual = 0.0;
  std::string method;
  int iterations = 0;
};

/// Extreme adjacency eigenvalues. Dense up to 512 vertices, Lanczos beyond.
SpectrumResult adjacency_spectrum(const Graph& g, SpectrumMethod method = SpectrumMethod::automatic);
double min_adjacency_eigenvalue(const Graph& g);

}  // namespace fieldmix
