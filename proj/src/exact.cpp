#include "fieldmix/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>

#include "fieldmix/errors.hpp"
#include "fieldmix/linalg.hpp"

namespace fieldmix {

namespace {

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

// Compress the bits of x selected by `keep` into the low positions.
std::uint64_t extract_bits(std::uint64_t x, std::uint64_t keep) {
  std::uint64_t out = 0;
  int pos = 0;
  while (keep != 0) {
    const int b = std::countr_zero(keep);
    if ((x >> b) & 1u) out |= bit(pos);
    ++pos;
    keep &= keep - 1;
  }
  return out;
}

void require_matrix_size(const ExactDistribution& d) {
  if (d.size() > kMatrixStateCap) {
    throw CapabilityError("dense kernels are limited to " + std::to_string(kMatrixStateCap) + " states, got " +
                          std::to_string(d.size()));
  }
}

double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

std::optional<std::size_t> ExactDistribution::index_of(std::uint64_t mask) const {
  const auto it = std::lower_bound(states.begin(), states.end(), mask);
  if (it == states.end() || *it != mask) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

ExactDistribution ExactDistribution::from_log_weights(int n, std::vector<std::uint64_t> states,
                                                      std::vector<double> log_weights) {
  if (states.empty() || states.size() != log_weights.size()) throw DomainError("need matching, nonempty state lists");
  ExactDistribution d;
  d.ground_size = n;
  d.states = std::move(states);
  d.log_weights = std::move(log_weights);
  const double top = *std::max_element(d.log_weights.begin(), d.log_weights.end());
  double z = 0.0;
  for (double lw : d.log_weights) z += std::exp(lw - top);
  d.log_partition = top + std::log(z);
  d.prob.resize(static_cast<Eigen::Index>(d.states.size()));
  for (std::size_t k = 0; k < d.states.size(); ++k) {
    d.prob[static_cast<Eigen::Index>(k)] = std::exp(d.log_weights[k] - d.log_partition);
  }
  return d;
}

ExactDistribution enumerate(const WeightedFamily& f, std::size_t cap) {
  const int n = f.ground_size();
  if (n > 64) throw CapabilityError("exact enumeration needs at most 64 elements");
  auto masks = support_masks(f, cap);
  std::vector<double> lw;
  lw.reserve(masks.size());
  for (std::uint64_t m : masks) lw.push_back(f.log_weight(SubsetState::from_mask(n, m)));
  return ExactDistribution::from_log_weights(n, std::move(masks), std::move(lw));
}

ExactDistribution tilted(const ExactDistribution& d, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != d.ground_size) throw DomainError("tilt length does not match");
  std::vector<double> logs;
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("tilt entries must be positive and finite");
    logs.push_back(std::log(l));
  }
  std::vector<double> lw = d.log_weights;
  for (std::size_t k = 0; k < d.states.size(); ++k) {
    std::uint64_t x = d.states[k];
    while (x != 0) {
      lw[k] += logs[static_cast<std::size_t>(std::countr_zero(x))];
      x &= x - 1;
    }
  }
  return ExactDistribution::from_log_weights(d.ground_size, d.states, std::move(lw));
}

ExactDistribution tilted(const ExactDistribution& d, double lambda) {
  std::vector<double> v(static_cast<std::size_t>(d.ground_size), lambda);
  return tilted(d, v);
}

ExactDistribution conditioned(const ExactDistribution& d, std::uint64_t s, std::vector<int>* labels) {
  if (!d.index_of(s)) throw DomainError("conditioning set is outside the support");
  const std::uint64_t full = d.ground_size == 64 ? ~std::uint64_t{0} : bit(d.ground_size) - 1;
  const std::uint64_t keep = full & ~s;
  if (keep == 0) throw DomainError("conditioning on the full ground set leaves nothing");
  if (labels) {
    labels->clear();
    for (int i = 0; i < d.ground_size; ++i)
      if ((keep >> i) & 1u) labels->push_back(i);
  }
  std::vector<std::uint64_t> states;
  std::vector<double> lw;
  for (std::size_t k = 0; k < d.states.size(); ++k) {
    if ((d.states[k] & s) == s) {
      states.push_back(extract_bits(d.states[k], keep));
      lw.push_back(d.log_weights[k]);
    }
  }
  // Compression preserves the order of masks sharing the bits of s.
  return ExactDistribution::from_log_weights(std::popcount(keep), std::move(states), std::move(lw));
}

std::vector<std::uint64_t> non_maximal_states(const ExactDistribution& d) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x : d.states) {
    for (int i = 0; i < d.ground_size; ++i) {
      if (!((x >> i) & 1u) && d.index_of(x | bit(i))) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

MomentData moments(const ExactDistribution& d) {
  const int n = d.ground_size;
  MomentData m;
  m.mean = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < d.size(); ++k) {
    std::uint64_t x = d.states[k];
    while (x != 0) {
      m.mean[std::countr_zero(x)] += d.prob[static_cast<Eigen::Index>(k)];
      x &= x - 1;
    }
  }
  m.cov = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd dev(n);
  for (std::size_t k = 0; k < d.size(); ++k) {
    for (int i = 0; i < n; ++i) dev[i] = static_cast<double>((d.states[k] >> i) & 1u) - m.mean[i];
    m.cov.noalias() += d.prob[static_cast<Eigen::Index>(k)] * dev * dev.transpose();
  }
  m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();
  for (int i = 0; i < n; ++i) m.cov(i, i) = m.mean[i] * (1.0 - m.mean[i]);
  return m;
}

MomentData moments(const ExactDistribution& d, std::optional<double> tilt,
                   std::optional<std::uint64_t> conditioning) {
  ExactDistribution cur = conditioning ? conditioned(d, *conditioning) : d;
  if (tilt) cur = tilted(cur, *tilt);
  return moments(cur);
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::glauber: return "glauber";
    case KernelKind::field: return "field";
    case KernelKind::down: return "down";
    case KernelKind::up: return "up";
  }
  return "unknown";
}

KernelMatrix glauber_matrix(const ExactDistribution& d, Exec exec) {
  require_matrix_size(d);
  const int n = d.ground_size;
  const Eigen::Index size = static_cast<Eigen::Index>(d.size());
  KernelMatrix k{KernelKind::glauber, 0.0, Eigen::MatrixXd::Zero(size, size)};
  auto fill_row = [&](Eigen::Index a) {
    const std::uint64_t x = d.states[static_cast<std::size_t>(a)];
    for (int i = 0; i < n; ++i) {
      const std::uint64_t down = x & ~bit(i);
      const std::size_t di = *d.index_of(down);
      const auto ui = d.index_of(down | bit(i));
      const double p_add = ui ? logistic(d.log_weights[*ui] - d.log_weights[di]) : 0.0;
      k.p(a, static_cast<Eigen::Index>(di)) += (1.0 - p_add) / n;
      if (ui) k.p(a, static_cast<Eigen::Index>(*ui)) += p_add / n;
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index a = 0; a < size; ++a) fill_row(a);
  } else {
    for (Eigen::Index a = 0; a < size; ++a) fill_row(a);
  }
  return k;
}

namespace {

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
}

}  // namespace

KernelMatrix down_kernel(const ExactDistribution& d, double theta) {
  require_theta(theta);
  require_matrix_size(d);
  const Eigen::Index size = static_cast<Eigen::Index>(d.size());
  KernelMatrix k{KernelKind::down, theta, Eigen::MatrixXd::Zero(size, size)};
  const double log_keep = std::log(theta);
  const double log_drop = std::log1p(-theta);
  for (Eigen::Index a = 0; a < size; ++a) {
    const std::uint64_t x = d.states[static_cast<std::size_t>(a)];
    const int sx = std::popcount(x);
    // Enumerate every submask t of x, x included.
    std::uint64_t t = x;
    while (true) {
      const int st = std::popcount(t);
      k.p(a, static_cast<Eigen::Index>(*d.index_of(t))) = std::exp(st * log_keep + (sx - st) * log_drop);
      if (t == 0) break;
      t = (t - 1) & x;
    }
  }
  return k;
}

KernelMatrix up_kernel(const ExactDistribution& d, double theta) {
  require_theta(theta);
  require_matrix_size(d);
  const Eigen::Index size = static_cast<Eigen::Index>(d.size());
  KernelMatrix k{KernelKind::up, theta, Eigen::MatrixXd::Zero(size, size)};
  const double log_field = std::log1p(-theta);
  for (Eigen::Index a = 0; a < size; ++a) {
    const std::uint64_t x = d.states[static_cast<std::size_t>(a)];
    const int sx = std::popcount(x);
    double total = 0.0;
    for (Eigen::Index b = 0; b < size; ++b) {
      const std::uint64_t y = d.states[static_cast<std::size_t>(b)];
      if ((y & x) != x) continue;
      const double w = std::exp(d.log_weights[static_cast<std::size_t>(b)] - d.log_weights[static_cast<std::size_t>(a)] +
                                (std::popcount(y) - sx) * log_field);
      k.p(a, b) = w;
      total += w;
    }
    k.p.row(a) /= total;
  }
  return k;
}

KernelMatrix field_matrix(const ExactDistribution& d, double theta) {
  const KernelMatrix down = down_kernel(d, theta);
  const KernelMatrix up = up_kernel(d, theta);
  return {KernelKind::field, theta, down.p * up.p};
}

void write_kernel_csv(std::ostream& out, const KernelMatrix& k, const ExactDistribution& d) {
  out << "from";
  for (std::uint64_t s : d.states) out << ",0x" << std::hex << s << std::dec;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index a = 0; a < k.p.rows(); ++a) {
    out << "0x" << std::hex << d.states[static_cast<std::size_t>(a)] << std::dec;
    for (Eigen::Index b = 0; b < k.p.cols(); ++b) out << ',' << k.p(a, b);
    out << '\n';
  }
}

KernelDiagnostics diagnose(const KernelMatrix& k, const ExactDistribution& d) {
  KernelDiagnostics out;
  out.row_sum_error = (k.p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  out.min_entry = k.p.minCoeff();
  const Eigen::RowVectorXd mu = d.prob.transpose();
  out.stationarity = (mu * k.p - mu).cwiseAbs().sum();
  const Eigen::MatrixXd flow = d.prob.asDiagonal() * k.p;
  out.reversibility = (flow - flow.transpose()).cwiseAbs().maxCoeff();
  return out;
}

double spectral_gap(const KernelMatrix& k, const ExactDistribution& d) {
  if (k.kind != KernelKind::glauber && k.kind != KernelKind::field) {
    throw DomainError("spectral gap needs a reversible kernel (glauber or field)");
  }
  if (d.size() == 1) return 1.0;
  const Eigen::VectorXd root = d.prob.cwiseSqrt();
  const Eigen::MatrixXd a = root.asDiagonal() * k.p * root.cwiseInverse().asDiagonal();
  const Eigen::VectorXd ev = symmetric_eigenvalues(a);
  return 1.0 - ev[ev.size() - 2];
}

namespace {

double worst_tv(const Eigen::MatrixXd& pt, const ExactDistribution& d) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < pt.rows(); ++a) {
    worst = std::max(worst, 0.5 * (pt.row(a).transpose() - d.prob).cwiseAbs().sum());
  }
  return worst;
}

}  // namespace

double tv_distance(const KernelMatrix& k, const ExactDistribution& d, std::uint64_t t) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(k.p.rows(), k.p.cols());
  Eigen::MatrixXd base = k.p;
  while (t != 0) {
    if (t & 1u) result = (result * base).eval();
    t >>= 1;
    if (t != 0) base = (base * base).eval();
  }
  return worst_tv(result, d);
}

std::uint64_t tv_mixing_time(const KernelMatrix& k, const ExactDistribution& d, double eps,
                             TvCriterion criterion) {
  auto meets = [&](const Eigen::MatrixXd& pt) {
    const double tv = worst_tv(pt, d);
    return criterion == TvCriterion::at_most ? tv <= eps : tv < eps;
  };
  const Eigen::Index size = k.p.rows();
  if (meets(Eigen::MatrixXd::Identity(size, size))) return 0;
  std::vector<Eigen::MatrixXd> powers{k.p};  // powers[j] = P^(2^j)
  if (meets(powers.back())) return 1;
  constexpr int kMaxDoublings = 62;
  while (true) {
    if (static_cast<int>(powers.size()) > kMaxDoublings) {
      throw NumericError("TV distance did not reach the threshold", worst_tv(powers.back(), d),
                         static_cast<int>(powers.size()));
    }
    powers.push_back(powers.back() * powers.back());
    if (meets(powers.back())) break;
  }
  // P^lo fails and P^(2 lo) meets; extend lo by decreasing powers of two.
  const std::size_t top = powers.size() - 1;
  std::uint64_t lo = std::uint64_t{1} << (top - 1);
  Eigen::MatrixXd cur = powers[top - 1];
  for (std::size_t j = top - 1; j-- > 0;) {
    Eigen::MatrixXd cand = cur * powers[j];
    if (!meets(cand)) {
      cur = std::move(cand);
      lo += std::uint64_t{1} << j;
    }
  }
  return lo + 1;
}

}  // namespace fieldmix
