#include "fieldmix/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Sparse>

#include "fieldmix/errors.hpp"
#include "fieldmix/rng.hpp"

namespace fieldmix {

Graph::Graph(int n) {
  if (n < 0) throw DomainError("vertex count must be nonnegative");
  adj_.resize(static_cast<std::size_t>(n));
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(int u, int v) {
  const int n = vertex_count();
  if (u < 0 || v < 0 || u >= n || v >= n) throw DomainError("edge endpoint out of range");
  if (u == v) throw DomainError("loops are not allowed");
  if (has_edge(u, v)) throw DomainError("repeated edge");
  auto& au = adj_[static_cast<std::size_t>(u)];
  auto& av = adj_[static_cast<std::size_t>(v)];
  au.insert(std::lower_bound(au.begin(), au.end(), v), v);
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  edges_.emplace_back(u, v);
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

bool Graph::is_regular() const {
  return std::all_of(adj_.begin(), adj_.end(),
                     [&](const auto& a) { return a.size() == adj_.front().size(); });
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = neighbors(u);
  return std::binary_search(a.begin(), a.end(), v);
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(vertex_count(), vertex_count());
  for (const auto& [u, v] : edges_) a(u, v) = a(v, u) = 1.0;
  return a;
}

Graph Graph::induced(const std::vector<int>& vertices) const {
  std::vector<int> pos(adj_.size(), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) pos.at(static_cast<std::size_t>(vertices[k])) = static_cast<int>(k);
  Graph h(static_cast<int>(vertices.size()));
  for (const auto& [u, v] : edges_) {
    const int a = pos[static_cast<std::size_t>(u)];
    const int b = pos[static_cast<std::size_t>(v)];
    if (a >= 0 && b >= 0) h.add_edge(a, b);
  }
  return h;
}

bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw DomainError("a cycle needs at least 3 vertices");
  Graph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph path_graph(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

Graph complete_bipartite(int a, int b) {
  Graph g(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
  return g;
}

Graph petersen_graph() {
  Graph g(10);
  for (int k = 0; k < 5; ++k) {
    g.add_edge(k, (k + 1) % 5);
    g.add_edge(k, k + 5);
    g.add_edge(5 + k, 5 + (k + 2) % 5);
  }
  return g;
}

Graph random_regular(int n, int degree, std::uint64_t seed) {
  if (n < 1 || degree < 0) throw DomainError("need n >= 1 and degree >= 0");
  if ((static_cast<long long>(n) * degree) % 2 != 0) {
    throw DomainError("nΔ must be even (n=" + std::to_string(n) + ", Δ=" + std::to_string(degree) + ")");
  }
  if (degree >= n) throw DomainError("degree must be smaller than n");
  constexpr int kMaxRestarts = 10000;
  Rng rng = make_stream(seed, 0);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(degree));
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(degree), v);
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    bool simple = true;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      int u = stubs[k];
      int v = stubs[k + 1];
      if (u > v) std::swap(u, v);
      if (u == v || !seen.emplace(u, v).second) {
        simple = false;
        break;
      }
      edges.emplace_back(u, v);
    }
    if (simple) {
      std::sort(edges.begin(), edges.end());
      return Graph(n, edges);
    }
  }
  throw GenerationError("configuration model: no simple graph after 10000 restarts");
}

Graph line_graph(const Graph& g) {
  Graph l(g.edge_count());
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(g.vertex_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edges()[static_cast<std::size_t>(e)];
    incident[static_cast<std::size_t>(u)].push_back(e);
    incident[static_cast<std::size_t>(v)].push_back(e);
  }
  for (const auto& list : incident)
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b)
        if (!l.has_edge(list[a], list[b])) l.add_edge(list[a], list[b]);
  return l;
}

namespace {

bool read_ints(const std::string& line, std::vector<long long>& out) {
  std::istringstream in(line);
  out.clear();
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(tok, &used));
    } catch (const std::exception&) {
      return false;
    }
    if (used != tok.size()) return false;
  }
  return true;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<long long> nums;
  long long n = -1;
  long long m = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (!read_ints(line, nums) || nums.size() != 2 || nums[0] < 0 || nums[1] < 0) {
      throw ParseError(lineno, "expected header \"n m\"");
    }
    n = nums[0];
    m = nums[1];
    break;
  }
  if (n < 0) throw ParseError(lineno, "missing header");
  Graph g(static_cast<int>(n));
  long long read = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (!read_ints(line, nums) || nums.size() != 2) throw ParseError(lineno, "expected \"u v\"");
    const long long u = nums[0];
    const long long v = nums[1];
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex out of range");
    if (u == v) throw ParseError(lineno, "loop edge");
    if (g.has_edge(static_cast<int>(u), static_cast<int>(v))) throw ParseError(lineno, "duplicate edge");
    if (read == m) throw ParseError(lineno, "more edges than declared");
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
    ++read;
  }
  if (read != m) throw ParseError(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(read));
  return g;
}

std::string serialize(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

namespace {

constexpr int kDenseLimit = 512;
constexpr double kResidualTol = 1e-8;

SpectrumResult dense_spectrum(const Graph& g) {
  const Eigen::MatrixXd a = g.adjacency_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolve failed", NAN, 0);
  const Eigen::Index last = a.rows() - 1;
  SpectrumResult r;
  r.min = es.eigenvalues()[0];
  r.max = es.eigenvalues()[last];
  r.residual = std::max((a * es.eigenvectors().col(0) - r.min * es.eigenvectors().col(0)).norm(),
                        (a * es.eigenvectors().col(last) - r.max * es.eigenvectors().col(last)).norm());
  r.method = "dense";
  return r;
}

// Lanczos with full reorthogonalization; extreme Ritz pairs are checked
// against the true residual before returning.
SpectrumResult lanczos_spectrum(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& [u, v] : g.edges()) {
    trips.emplace_back(u, v, 1.0);
    trips.emplace_back(v, u, 1.0);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());

  Rng rng = make_stream(0x5eed, static_cast<std::uint64_t>(n));
  std::normal_distribution<double> normal;
  auto random_unit = [&](const Eigen::MatrixXd& basis, int k) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    return Eigen::VectorXd(v / v.norm());
  };

  const int cap = std::min(n, 1500);
  Eigen::MatrixXd q(n, cap);
  std::vector<double> alpha;
  std::vector<double> beta;
  q.col(0) = random_unit(q, 0);
  double worst = INFINITY;
  int k = 0;
  while (k < cap) {
    Eigen::VectorXd w = a * q.col(k);
    alpha.push_back(q.col(k).dot(w));
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) w -= q.col(j).dot(w) * q.col(j);
    ++k;
    const double b = w.norm();
    const bool check = k == cap || k % 10 == 0 || b < 1e-12;
    if (check) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
      for (int i = 0; i < k; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
      for (int i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const Eigen::VectorXd ymin = es.eigenvectors().col(0);
      const Eigen::VectorXd ymax = es.eigenvectors().col(k - 1);
      const double estimate = b * std::max(std::abs(ymin[k - 1]), std::abs(ymax[k - 1]));
      if (estimate < kResidualTol || k == cap) {
        const Eigen::VectorXd vmin = q.leftCols(k) * ymin;
        const Eigen::VectorXd vmax = q.leftCols(k) * ymax;
        SpectrumResult r;
        r.min = es.eigenvalues()[0];
        r.max = es.eigenvalues()[k - 1];
        r.residual = std::max((a * vmin - r.min * vmin).norm() / vmin.norm(),
                              (a * vmax - r.max * vmax).norm() / vmax.norm());
        r.method = "iterative";
        r.iterations = k;
        worst = r.residual;
        if (r.residual <= kResidualTol) return r;
      }
    }
    if (k == cap) break;
    if (b < 1e-12) {
      // Invariant subspace reached: continue from a fresh orthogonal direction.
      beta.push_back(0.0);
      q.col(k) = random_unit(q, k);
    } else {
      beta.push_back(b);
      q.col(k) = w / b;
    }
  }
  throw NumericError("Lanczos did not converge", worst, k);
}

}  // namespace

SpectrumResult adjacency_spectrum(const Graph& g, SpectrumMethod method) {
  if (g.vertex_count() == 0) throw DomainError("spectrum of an empty vertex set");
  if (method == SpectrumMethod::automatic) {
    method = g.vertex_count() <= kDenseLimit ? SpectrumMethod::dense : SpectrumMethod::iterative;
  }
  return method == SpectrumMethod::dense ? dense_spectrum(g) : lanczos_spectrum(g);
}

double min_adjacency_eigenvalue(const Graph& g) { return adjacency_spectrum(g).min; }

}  // namespace fieldmix
