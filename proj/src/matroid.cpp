#include "fieldmix/matroid.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "fieldmix/errors.hpp"
#include "fieldmix/rng.hpp"

namespace fieldmix {

namespace {

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
  std::vector<int> parent;
};

}  // namespace

MatroidOracle::MatroidOracle(int n, std::string kind, std::function<int(const SubsetState&)> rank)
    : n_(n), kind_(std::move(kind)), rank_(std::move(rank)) {}

MatroidOracle MatroidOracle::uniform(int n, int r) {
  if (n < 1 || r < 0 || r > n) throw DomainError("uniform matroid needs 0 <= r <= n, n >= 1");
  return MatroidOracle(n, "uniform", [r](const SubsetState& s) { return std::min(s.size(), r); });
}

MatroidOracle MatroidOracle::graphic(const Graph& g) {
  if (g.edge_count() < 1) throw DomainError("graphic matroid needs at least one edge");
  auto shared = std::make_shared<const Graph>(g);
  MatroidOracle m(g.edge_count(), "graphic", [shared](const SubsetState& s) {
    UnionFind uf(shared->vertex_count());
    int r = 0;
    s.for_each([&](int e) {
      const auto [u, v] = shared->edges()[static_cast<std::size_t>(e)];
      if (uf.unite(u, v)) ++r;
    });
    return r;
  });
  m.graph_ = shared;
  return m;
}

MatroidOracle MatroidOracle::linear(const Eigen::MatrixXd& vectors, double tol) {
  if (vectors.cols() < 1) throw DomainError("linear matroid needs at least one vector");
  const Eigen::MatrixXd cols = vectors;
  return MatroidOracle(static_cast<int>(cols.cols()), "linear", [cols, tol](const SubsetState& s) {
    if (s.empty()) return 0;
    Eigen::MatrixXd sub(cols.rows(), s.size());
    int k = 0;
    s.for_each([&](int e) { sub.col(k++) = cols.col(e); });
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(tol);
    return static_cast<int>(qr.rank());
  });
}

std::vector<int> MatroidOracle::parallel_classes(const SubsetState& s) const {
  std::vector<int> cls(static_cast<std::size_t>(n_), -1);
  if (graph_) {
    // Contract S, then classify the remaining edges by their endpoint components.
    UnionFind uf(graph_->vertex_count());
    s.for_each([&](int e) {
      const auto [u, v] = graph_->edges()[static_cast<std::size_t>(e)];
      uf.unite(u, v);
    });
    std::map<std::pair<int, int>, int> ids;
    for (int e = 0; e < n_; ++e) {
      if (s.contains(e)) continue;
      const auto [u, v] = graph_->edges()[static_cast<std::size_t>(e)];
      int a = uf.find(u);
      int b = uf.find(v);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      cls[static_cast<std::size_t>(e)] = ids.try_emplace({a, b}, static_cast<int>(ids.size())).first->second;
    }
    return cls;
  }
  const int base = rank(s);
  std::vector<int> live;
  for (int e = 0; e < n_; ++e)
    if (!s.contains(e) && rank(s.with(e)) == base + 1) live.push_back(e);
  int next = 0;
  for (std::size_t a = 0; a < live.size(); ++a) {
    const int e = live[a];
    if (cls[static_cast<std::size_t>(e)] >= 0) continue;
    cls[static_cast<std::size_t>(e)] = next;
    const SubsetState se = s.with(e);
    for (std::size_t b = a + 1; b < live.size(); ++b) {
      const int f = live[b];
      if (cls[static_cast<std::size_t>(f)] < 0 && rank(se.with(f)) == base + 1) cls[static_cast<std::size_t>(f)] = next;
    }
    ++next;
  }
  return cls;
}

std::optional<std::string> find_matroid_axiom_violation(const MatroidOracle& m, int trials,
                                                        std::uint64_t seed) {
  const int n = m.ground_size();
  if (m.rank(SubsetState(n)) != 0) return "rank of the empty set is nonzero";
  Rng rng = make_stream(seed, 0);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> pick(0, n - 1);
  auto random_set = [&] {
    SubsetState s(n);
    for (int i = 0; i < n; ++i)
      if (coin(rng)) s.insert(i);
    return s;
  };
  for (int t = 0; t < trials; ++t) {
    const SubsetState a = random_set();
    const SubsetState b = random_set();
    const int e = pick(rng);
    const int ra = m.rank(a);
    const int rae = m.rank(a.with(e));
    if (ra < 0 || ra > a.size()) return "rank out of [0, |A|] at " + a.to_hex();
    if (rae < ra || rae > ra + 1) return "rank increment not in {0, 1} at " + a.to_hex();
    SubsetState uni(n);
    SubsetState inter(n);
    for (int i = 0; i < n; ++i) {
      if (a.contains(i) || b.contains(i)) uni.insert(i);
      if (a.contains(i) && b.contains(i)) inter.insert(i);
    }
    const int rb = m.rank(b);
    const int ru = m.rank(uni);
    if (ru < std::max(ra, rb)) return "rank not monotone at " + uni.to_hex();
    if (ru + m.rank(inter) > ra + rb) return "rank not submodular at " + a.to_hex() + ", " + b.to_hex();
  }
  return std::nullopt;
}

}  // namespace fieldmix
