#include "fieldmix/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "fieldmix/errors.hpp"
#include "fieldmix/linalg.hpp"
#include "fieldmix/rng.hpp"

namespace fieldmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(name) + " must be positive and finite");
}

Eigen::VectorXd constant_ratios(std::span<const int> moves, double value) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(moves.size()), value);
}

}  // namespace

// ---- hardcore -----------------------------------------------------------------

WeightedFamily hardcore(const Graph& g, double lambda) {
  require_positive(lambda, "lambda");
  if (g.vertex_count() < 1) throw DomainError("hardcore model needs a vertex");
  auto graph = std::make_shared<const Graph>(g);
  const double log_lambda = std::log(lambda);
  auto fn = [graph, log_lambda](const SubsetState& s) {
    bool independent = true;
    s.for_each([&](int v) {
      for (int u : graph->neighbors(v))
        if (u > v && s.contains(u)) independent = false;
    });
    return independent ? s.size() * log_lambda : kNotMember;
  };
  ModelInfo info;
  info.tag = "hardcore";
  info.r_max_bound = lambda;
  info.dependency = [graph](const SubsetState&, std::span<const int> moves) {
    const Eigen::Index k = static_cast<Eigen::Index>(moves.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = a + 1; b < k; ++b)
        if (graph->has_edge(moves[static_cast<std::size_t>(a)], moves[static_cast<std::size_t>(b)])) m(a, b) = m(b, a) = -1.0;
    return m;
  };
  info.ratios = [lambda](const SubsetState&, std::span<const int> moves) { return constant_ratios(moves, lambda); };
  return WeightedFamily(g.vertex_count(), std::move(fn), std::move(info));
}

double hardcore_lambda_star(double lambda_min, double delta) {
  const double gap = -lambda_min - 1.0;
  return gap <= 0.0 ? kInf : (1.0 - delta) / gap;
}

HardcoreThreshold hardcore_threshold(const Graph& g, double lambda) {
  require_positive(lambda, "lambda");
  HardcoreThreshold t;
  if (g.edge_count() == 0) {
    t.delta = 1.0;
    t.certified = true;
    t.spectrum_method = "none";
    return t;
  }
  const SpectrumResult spec = adjacency_spectrum(g);
  t.lambda_min = spec.min;
  t.spectrum_method = spec.method;
  t.delta = std::min(1.0, 1.0 - lambda * std::max(0.0, -spec.min - 1.0));
  t.certified = t.delta > 0.0;
  return t;
}

WeightedFamily monomer_dimer(const Graph& g, double lambda) {
  if (g.edge_count() < 1) throw DomainError("matchings need at least one edge");
  WeightedFamily f = hardcore(line_graph(g), lambda);
  ModelInfo info = f.info();
  info.tag = "monomer-dimer";
  return f.with_info(std::move(info));
}

// ---- Holant -------------------------------------------------------------------

Signature::Signature(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty() || !(values_[0] > 0.0)) throw DomainError("signature needs f(0) > 0");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("signature values must be finite and nonnegative");
  bool ended = false;
  for (double v : values_) {
    if (v == 0.0) ended = true;
    else if (ended) throw DomainError("signature has an internal zero");
  }
  for (std::size_t k = 1; k + 1 < values_.size(); ++k) {
    const double lhs = values_[k] * values_[k];
    const double rhs = values_[k - 1] * values_[k + 1];
    if (lhs < rhs * (1.0 - 1e-12)) throw DomainError("signature is not log-concave at k = " + std::to_string(k));
  }
}

Signature b_matching_signature(int b) {
  if (b < 1) throw DomainError("b must be at least 1");
  return Signature(std::vector<double>(static_cast<std::size_t>(b) + 1, 1.0));
}

namespace {

struct HolantData {
  Graph graph;
  std::vector<Signature> sigs;
  const Signature& at(int v) const { return sigs.size() == 1 ? sigs.front() : sigs[static_cast<std::size_t>(v)]; }

  std::vector<int> loads(const SubsetState& s) const {
    std::vector<int> k(static_cast<std::size_t>(graph.vertex_count()), 0);
    s.for_each([&](int e) {
      const auto [u, v] = graph.edges()[static_cast<std::size_t>(e)];
      ++k[static_cast<std::size_t>(u)];
      ++k[static_cast<std::size_t>(v)];
    });
    return k;
  }

  double g_value(int u, int k) const {
    if (k + 2 > graph.degree(u)) return 0.0;
    const Signature& f = at(u);
    return f(k) * f(k + 2) / (f(k + 1) * f(k + 1));
  }
};

std::shared_ptr<const HolantData> make_holant_data(const Graph& g, const std::vector<Signature>& f) {
  if (g.edge_count() < 1) throw DomainError("Holant instance needs at least one edge");
  if (f.size() != 1 && static_cast<int>(f.size()) != g.vertex_count()) {
    throw DomainError("need one signature per vertex or a single shared one");
  }
  return std::make_shared<const HolantData>(HolantData{g, f});
}

int shared_vertex(const Graph& g, int e1, int e2) {
  const auto [a, b] = g.edges()[static_cast<std::size_t>(e1)];
  const auto [c, d] = g.edges()[static_cast<std::size_t>(e2)];
  if (a == c || a == d) return a;
  if (b == c || b == d) return b;
  return -1;
}

}  // namespace

WeightedFamily holant(const Graph& g, const std::vector<Signature>& f, double lambda) {
  require_positive(lambda, "lambda");
  auto data = make_holant_data(g, f);
  const double log_lambda = std::log(lambda);
  auto fn = [data, log_lambda](const SubsetState& s) {
    const auto k = data->loads(s);
    double total = s.size() * log_lambda;
    for (int v = 0; v < data->graph.vertex_count(); ++v) {
      const double fv = data->at(v)(k[static_cast<std::size_t>(v)]);
      if (fv == 0.0) return kNotMember;
      total += std::log(fv);
    }
    return total;
  };
  const HolantQR qr = holant_qr(g, f);
  ModelInfo info;
  info.tag = "holant";
  info.r_max_bound = lambda * qr.r * qr.r;
  info.dependency = [data](const SubsetState& s, std::span<const int> moves) {
    const auto k = data->loads(s);
    const Eigen::Index n = static_cast<Eigen::Index>(moves.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a + 1; b < n; ++b) {
        const int u = shared_vertex(data->graph, moves[static_cast<std::size_t>(a)], moves[static_cast<std::size_t>(b)]);
        if (u >= 0) m(a, b) = m(b, a) = data->g_value(u, k[static_cast<std::size_t>(u)]) - 1.0;
      }
    return m;
  };
  info.ratios = [data, lambda](const SubsetState& s, std::span<const int> moves) {
    const auto k = data->loads(s);
    Eigen::VectorXd r(static_cast<Eigen::Index>(moves.size()));
    for (std::size_t a = 0; a < moves.size(); ++a) {
      const auto [u, v] = data->graph.edges()[static_cast<std::size_t>(moves[a])];
      const int ku = k[static_cast<std::size_t>(u)];
      const int kv = k[static_cast<std::size_t>(v)];
      const Signature& fu = data->at(u);
      const Signature& fv = data->at(v);
      r[static_cast<Eigen::Index>(a)] = lambda * fu(ku + 1) * fv(kv + 1) / (fu(ku) * fv(kv));
    }
    return r;
  };
  return WeightedFamily(g.edge_count(), std::move(fn), std::move(info));
}

WeightedFamily b_matching(const Graph& g, int b, double lambda) {
  WeightedFamily f = holant(g, {b_matching_signature(b)}, lambda);
  ModelInfo info = f.info();
  info.tag = b == 1 ? "matching" : "b-matching";
  return f.with_info(std::move(info));
}

HolantQR holant_qr(const Graph& g, const std::vector<Signature>& f) {
  auto data = make_holant_data(g, f);
  HolantQR out{kInf, 0.0};
  for (int u = 0; u < g.vertex_count(); ++u) {
    const Signature& s = data->at(u);
    const int d = g.degree(u);
    for (int k = 0; k + 2 <= d; ++k) {
      if (s(k + 1) == 0.0) continue;
      out.q = std::min(out.q, s(k) * s(k + 2) / (s(k + 1) * s(k + 1)));
    }
    if (d >= 1) out.r = std::max(out.r, s(1) / s(0));
  }
  return out;
}

HolantCertificate holant_certificate(const Graph& g, const std::vector<Signature>& f, double lambda,
                                     double delta) {
  HolantCertificate c;
  c.qr = holant_qr(g, f);
  const double m = g.edge_count();
  if (c.qr.q >= 0.5) {
    c.unconditional = true;
    c.certified = true;
    c.constant = 1.0 / ((1.0 + c.qr.r) * m);
    c.inequality = "modified log-Sobolev";
    return c;
  }
  c.lambda_limit = (1.0 - delta) / ((1.0 - 2.0 * c.qr.q) * c.qr.r * c.qr.r);
  c.certified = delta > 0.0 && delta < 1.0 && lambda <= *c.lambda_limit;
  c.constant = c.certified ? delta / ((1.0 + c.qr.r) * m) : 0.0;
  c.inequality = "Poincare";
  return c;
}

Eigen::VectorXd holant_slack_diagonal(const Graph& g, const std::vector<Signature>& f,
                                      const SubsetState& s, std::span<const int> moves) {
  auto data = make_holant_data(g, f);
  const auto k = data->loads(s);
  Eigen::VectorXd d(static_cast<Eigen::Index>(moves.size()));
  for (std::size_t a = 0; a < moves.size(); ++a) {
    const auto [u, v] = g.edges()[static_cast<std::size_t>(moves[a])];
    d[static_cast<Eigen::Index>(a)] =
        1.0 - data->g_value(u, k[static_cast<std::size_t>(u)]) - data->g_value(v, k[static_cast<std::size_t>(v)]);
  }
  return d;
}

// ---- matroids -----------------------------------------------------------------

WeightedFamily matroid_independent(const MatroidOracle& m, double lambda) {
  require_positive(lambda, "lambda");
  const double log_lambda = std::log(lambda);
  auto fn = [m, log_lambda](const SubsetState& s) { return m.independent(s) ? s.size() * log_lambda : kNotMember; };
  ModelInfo info;
  info.tag = "matroid-" + m.kind();
  info.r_max_bound = lambda;
  info.dependency = [m](const SubsetState& s, std::span<const int> moves) {
    const auto cls = m.parallel_classes(s);
    const Eigen::Index k = static_cast<Eigen::Index>(moves.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = a + 1; b < k; ++b) {
        const int ca = cls[static_cast<std::size_t>(moves[static_cast<std::size_t>(a)])];
        if (ca >= 0 && ca == cls[static_cast<std::size_t>(moves[static_cast<std::size_t>(b)])]) out(a, b) = out(b, a) = -1.0;
      }
    return out;
  };
  info.ratios = [lambda](const SubsetState&, std::span<const int> moves) { return constant_ratios(moves, lambda); };
  return WeightedFamily(m.ground_size(), std::move(fn), std::move(info));
}

WeightedFamily random_cluster(const MatroidOracle& m, double q, double lambda) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("random cluster model needs q in (0, 1]");
  require_positive(lambda, "lambda");
  const double log_q = std::log(q);
  const double log_lambda = std::log(lambda);
  auto fn = [m, log_q, log_lambda](const SubsetState& s) { return -m.rank(s) * log_q + s.size() * log_lambda; };
  ModelInfo info;
  info.tag = "random-cluster-" + m.kind();
  info.r_max_bound = lambda / q;
  info.dependency = [m, q](const SubsetState& s, std::span<const int> moves) {
    const auto cls = m.parallel_classes(s);
    const Eigen::Index k = static_cast<Eigen::Index>(moves.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = a + 1; b < k; ++b) {
        const int ca = cls[static_cast<std::size_t>(moves[static_cast<std::size_t>(a)])];
        if (ca >= 0 && ca == cls[static_cast<std::size_t>(moves[static_cast<std::size_t>(b)])]) out(a, b) = out(b, a) = q - 1.0;
      }
    return out;
  };
  info.ratios = [m, q, lambda](const SubsetState& s, std::span<const int> moves) {
    const auto cls = m.parallel_classes(s);
    Eigen::VectorXd r(static_cast<Eigen::Index>(moves.size()));
    for (std::size_t a = 0; a < moves.size(); ++a)
      r[static_cast<Eigen::Index>(a)] = cls[static_cast<std::size_t>(moves[a])] >= 0 ? lambda / q : lambda;
    return r;
  };
  return WeightedFamily(m.ground_size(), std::move(fn), std::move(info));
}

double random_cluster_mls_constant(int n, double q, double lambda) {
  return std::max(1.0 / (1.0 + lambda / q), 1.0 / (1.0 + 1.0 / lambda)) / n;
}

// ---- DPP ------------------------------------------------------------------------

namespace {

struct DppData {
  Eigen::MatrixXd l;
  double alpha;
  double pivot_floor;

  // Cholesky of L_SS; log det, or -inf once a pivot drops below the floor.
  double log_det(const std::vector<int>& idx) const {
    const std::size_t k = idx.size();
    Eigen::MatrixXd c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = l(idx[a], idx[b]);
    double total = 0.0;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
      double pivot = c(j, j) - c.row(j).head(j).squaredNorm();
      if (!(pivot >= pivot_floor)) return kNotMember;
      const double root = std::sqrt(pivot);
      c(j, j) = root;
      for (Eigen::Index i = j + 1; i < static_cast<Eigen::Index>(k); ++i) {
        c(i, j) = (c(i, j) - c.row(i).head(j).dot(c.row(j).head(j))) / root;
      }
      total += std::log(pivot);
    }
    return total;
  }

  // Schur complement of L_SS in L over the given outside indices.
  Eigen::MatrixXd schur(const SubsetState& s, std::span<const int> outside) const {
    const auto in = s.elements();
    const Eigen::Index p = static_cast<Eigen::Index>(in.size());
    const Eigen::Index q = static_cast<Eigen::Index>(outside.size());
    Eigen::MatrixXd lvv(q, q);
    for (Eigen::Index a = 0; a < q; ++a)
      for (Eigen::Index b = 0; b < q; ++b) lvv(a, b) = l(outside[static_cast<std::size_t>(a)], outside[static_cast<std::size_t>(b)]);
    if (p == 0) return lvv;
    Eigen::MatrixXd lss(p, p);
    Eigen::MatrixXd lsv(p, q);
    for (Eigen::Index a = 0; a < p; ++a) {
      for (Eigen::Index b = 0; b < p; ++b) lss(a, b) = l(in[static_cast<std::size_t>(a)], in[static_cast<std::size_t>(b)]);
      for (Eigen::Index b = 0; b < q; ++b) lsv(a, b) = l(in[static_cast<std::size_t>(a)], outside[static_cast<std::size_t>(b)]);
    }
    return lvv - lsv.transpose() * lss.llt().solve(lsv);
  }
};

}  // namespace

WeightedFamily dpp(const DppKernel& kernel) {
  const Eigen::MatrixXd& l = kernel.l;
  if (l.rows() < 1 || l.rows() != l.cols()) throw DomainError("DPP kernel must be square and nonempty");
  if (!(kernel.alpha >= 0.0 && kernel.alpha <= 1.0)) throw DomainError("DPP exponent must lie in [0, 1]");
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, max_norm(l))) {
    throw DomainError("DPP kernel must be symmetric");
  }
  if (min_eigenvalue(l) < -1e-10 * std::max(1.0, max_norm(l))) throw DomainError("DPP kernel must be PSD");
  const int n = static_cast<int>(l.rows());
  auto data = std::make_shared<const DppData>(DppData{l, kernel.alpha, 1e-10 * l.trace() / n});
  auto fn = [data](const SubsetState& s) {
    const double ld = data->log_det(s.elements());
    return ld == kNotMember ? kNotMember : data->alpha * ld;
  };
  ModelInfo info;
  info.tag = "dpp";
  info.r_max_bound = std::pow(l.diagonal().maxCoeff(), kernel.alpha);
  info.dependency = [data](const SubsetState& s, std::span<const int> moves) {
    const Eigen::MatrixXd nmat = data->schur(s, moves);
    const Eigen::Index k = nmat.rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = a + 1; b < k; ++b) {
        const double coupling = nmat(a, b) * nmat(a, b) / (nmat(a, a) * nmat(b, b));
        const double pivot = nmat(b, b) - nmat(a, b) * nmat(a, b) / nmat(a, a);
        const double v = pivot < data->pivot_floor ? -1.0 : std::pow(std::max(0.0, 1.0 - coupling), data->alpha) - 1.0;
        m(a, b) = m(b, a) = v;
      }
    return m;
  };
  info.ratios = [data](const SubsetState& s, std::span<const int> moves) {
    const Eigen::MatrixXd nmat = data->schur(s, moves);
    Eigen::VectorXd r(nmat.rows());
    for (Eigen::Index a = 0; a < nmat.rows(); ++a) r[a] = std::pow(nmat(a, a), data->alpha);
    return r;
  };
  return WeightedFamily(n, std::move(fn), std::move(info));
}

Eigen::MatrixXd random_psd_kernel(int n, int rank, std::uint64_t seed) {
  if (n < 1 || rank < 1) throw DomainError("kernel size and rank must be positive");
  Rng rng = make_stream(seed, 0);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd b(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = normal(rng);
  Eigen::MatrixXd l = b * b.transpose() / rank;
  return 0.5 * (l + l.transpose());
}

// ---- two-spin ------------------------------------------------------------------

WeightedFamily two_spin(const Graph& g, const TwoSpinParams& p) {
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) throw DomainError("beta must be nonnegative");
  require_positive(p.gamma, "gamma");
  require_positive(p.lambda, "lambda");
  if (g.vertex_count() < 1) throw DomainError("two-spin system needs a vertex");
  auto graph = std::make_shared<const Graph>(g);
  const double log_beta = p.beta > 0.0 ? std::log(p.beta) : kNotMember;
  const double log_gamma = std::log(p.gamma);
  const double log_lambda = std::log(p.lambda);
  auto fn = [graph, log_beta, log_gamma, log_lambda](const SubsetState& s) {
    int m1 = 0;
    int m0 = 0;
    for (const auto& [u, v] : graph->edges()) {
      const bool a = s.contains(u);
      const bool b = s.contains(v);
      if (a && b) ++m1;
      else if (!a && !b) ++m0;
    }
    if (m1 > 0 && log_beta == kNotMember) return kNotMember;
    return (m1 > 0 ? m1 * log_beta : 0.0) + m0 * log_gamma + s.size() * log_lambda;
  };
  const double bg = p.beta * p.gamma;
  ModelInfo info;
  info.tag = "two-spin";
  double rmax = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int d = g.degree(v);
    rmax = std::max(rmax, p.lambda * std::max(1.0, std::pow(bg, d)) / std::pow(p.gamma, d));
  }
  info.r_max_bound = rmax;
  info.dependency = [graph, bg](const SubsetState&, std::span<const int> moves) {
    const Eigen::Index k = static_cast<Eigen::Index>(moves.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = a + 1; b < k; ++b)
        if (graph->has_edge(moves[static_cast<std::size_t>(a)], moves[static_cast<std::size_t>(b)])) m(a, b) = m(b, a) = bg - 1.0;
    return m;
  };
  info.ratios = [graph, bg, p](const SubsetState& s, std::span<const int> moves) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(moves.size()));
    for (std::size_t a = 0; a < moves.size(); ++a) {
      const int i = moves[a];
      int inside = 0;
      for (int u : graph->neighbors(i)) inside += s.contains(u) ? 1 : 0;
      r[static_cast<Eigen::Index>(a)] = p.lambda * std::pow(bg, inside) / std::pow(p.gamma, graph->degree(i));
    }
    return r;
  };
  return WeightedFamily(g.vertex_count(), std::move(fn), std::move(info));
}

TwoSpinCertificate two_spin_certificate(const Graph& g, const TwoSpinParams& p, double delta) {
  TwoSpinCertificate c;
  c.max_degree = g.max_degree();
  c.regular = g.is_regular();
  c.lambda_star = g.edge_count() > 0 ? -min_adjacency_eigenvalue(g) : 0.0;
  if (!c.regular) c.flag = "regular-only theorem, heuristic extension";
  if (!p.antiferromagnetic()) c.flag += std::string(c.flag.empty() ? "" : "; ") + "not antiferromagnetic";
  const double scale = 1.0 + p.lambda / std::pow(p.gamma, c.max_degree);
  const double n = g.vertex_count();
  const double strength = 1.0 - p.beta * p.gamma;
  if (c.lambda_star <= 0.0 || strength <= 1.0 / c.lambda_star) {
    c.regime = 1;
    c.constant = 1.0 / (scale * n);
    return c;
  }
  c.lambda_limit = (1.0 - delta) * std::pow(p.gamma, c.max_degree) / (strength * c.lambda_star - 1.0);
  if (delta > 0.0 && delta < 1.0 && p.lambda <= *c.lambda_limit) {
    c.regime = 2;
    c.constant = delta / (scale * n);
  }
  return c;
}

// ---- product -----------------------------------------------------------------------

WeightedFamily product_family(const std::vector<double>& p) {
  if (p.empty()) throw DomainError("product family needs at least one element");
  auto odds = std::make_shared<std::vector<double>>();
  for (double x : p) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("product probabilities must lie in (0, 1)");
    odds->push_back(x / (1.0 - x));
  }
  auto fn = [odds](const SubsetState& s) {
    double total = 0.0;
    s.for_each([&](int i) { total += std::log((*odds)[static_cast<std::size_t>(i)]); });
    return total;
  };
  ModelInfo info;
  info.tag = "product";
  info.r_max_bound = *std::max_element(odds->begin(), odds->end());
  info.dependency = [](const SubsetState&, std::span<const int> moves) {
    const Eigen::Index k = static_cast<Eigen::Index>(moves.size());
    return Eigen::MatrixXd::Zero(k, k).eval();
  };
  info.ratios = [odds](const SubsetState&, std::span<const int> moves) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(moves.size()));
    for (std::size_t a = 0; a < moves.size(); ++a) r[static_cast<Eigen::Index>(a)] = (*odds)[static_cast<std::size_t>(moves[a])];
    return r;
  };
  return WeightedFamily(static_cast<int>(p.size()), std::move(fn), std::move(info));
}

}  // namespace fieldmix
