#include "fieldmix/family.hpp"

#include <algorithm>

#include "fieldmix/errors.hpp"

namespace fieldmix {

WeightedFamily::WeightedFamily(int n, LogWeightFn log_weight, ModelInfo info)
    : n_(n),
      fn_(std::make_shared<const LogWeightFn>(std::move(log_weight))),
      info_(std::make_shared<const ModelInfo>(std::move(info))) {
  if (n < 1) throw DomainError("ground set must have at least one element");
  if (!*fn_) throw DomainError("weight oracle is empty");
  const double empty = (*fn_)(SubsetState(n));
  if (!std::isfinite(empty)) throw DomainError("the empty set must be a member with finite weight");
}

double WeightedFamily::log_weight(const SubsetState& s) const {
  if (s.width() != n_) {
    throw DomainError("subset width " + std::to_string(s.width()) + " does not match ground size " +
                      std::to_string(n_));
  }
  const double v = (*fn_)(s);
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
    throw DomainError("weight oracle returned a non-extended-real value");
  }
  return v;
}

WeightedFamily WeightedFamily::with_info(ModelInfo info) const {
  WeightedFamily out = *this;
  out.info_ = std::make_shared<const ModelInfo>(std::move(info));
  return out;
}

std::vector<int> available_moves(const WeightedFamily& f, const SubsetState& s) {
  if (!f.contains(s)) throw DomainError("conditioning set is not a member of the family");
  std::vector<int> moves;
  for (int i = 0; i < f.ground_size(); ++i) {
    if (!s.contains(i) && f.contains(s.with(i))) moves.push_back(i);
  }
  return moves;
}

bool is_maximal(const WeightedFamily& f, const SubsetState& s) {
  if (!f.contains(s)) throw DomainError("conditioning set is not a member of the family");
  for (int i = 0; i < f.ground_size(); ++i) {
    if (!s.contains(i) && f.contains(s.with(i))) return false;
  }
  return true;
}

WeightedFamily tilt(const WeightedFamily& f, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != f.ground_size()) {
    throw DomainError("tilt vector length does not match the ground set");
  }
  auto logs = std::make_shared<std::vector<double>>();
  double max_lambda = 0.0;
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("tilt entries must be positive and finite");
    logs->push_back(std::log(l));
    max_lambda = std::max(max_lambda, l);
  }
  auto inner = f;
  auto fn = [inner, logs](const SubsetState& s) {
    const double base = inner.log_weight(s);
    if (base == kNotMember) return kNotMember;
    double shift = 0.0;
    s.for_each([&](int i) { shift += (*logs)[static_cast<std::size_t>(i)]; });
    return base + shift;
  };
  ModelInfo info = f.info();
  info.tag = f.info().tag + "+tilt";
  if (info.r_max_bound) *info.r_max_bound *= max_lambda;
  if (f.info().ratios) {
    info.ratios = [inner, logs](const SubsetState& s, std::span<const int> moves) {
      Eigen::VectorXd r = inner.info().ratios(s, moves);
      for (std::size_t k = 0; k < moves.size(); ++k) {
        r[static_cast<Eigen::Index>(k)] *= std::exp((*logs)[static_cast<std::size_t>(moves[k])]);
      }
      return r;
    };
  }
  return WeightedFamily(f.ground_size(), std::move(fn), std::move(info));
}

WeightedFamily tilt(const WeightedFamily& f, double lambda) {
  std::vector<double> v(static_cast<std::size_t>(f.ground_size()), lambda);
  return tilt(f, v);
}

WeightedFamily conditional(const WeightedFamily& f, const SubsetState& s, std::vector<int>* labels) {
  if (!f.contains(s)) throw DomainError("conditioning set is not a member of the family");
  const int n = f.ground_size();
  auto map = std::make_shared<std::vector<int>>();
  for (int i = 0; i < n; ++i) {
    if (!s.contains(i)) map->push_back(i);
  }
  if (labels) *labels = *map;
  if (map->empty()) throw DomainError("conditioning on the full ground set leaves nothing");
  const int m = static_cast<int>(map->size());
  auto lift = [s, map](const SubsetState& t) {
    SubsetState u = s;
    t.for_each([&](int i) { u.insert((*map)[static_cast<std::size_t>(i)]); });
    return u;
  };
  auto inner = f;
  auto fn = [inner, lift](const SubsetState& t) { return inner.log_weight(lift(t)); };

  ModelInfo info = f.info();
  info.tag = f.info().tag + "|cond";
  auto lift_moves = [map](std::span<const int> moves) {
    std::vector<int> out;
    out.reserve(moves.size());
    for (int i : moves) out.push_back((*map)[static_cast<std::size_t>(i)]);
    return out;
  };
  if (f.info().dependency) {
    info.dependency = [inner, lift, lift_moves](const SubsetState& t, std::span<const int> moves) {
      return inner.info().dependency(lift(t), lift_moves(moves));
    };
  }
  if (f.info().ratios) {
    info.ratios = [inner, lift, lift_moves](const SubsetState& t, std::span<const int> moves) {
      return inner.info().ratios(lift(t), lift_moves(moves));
    };
  }
  return WeightedFamily(m, std::move(fn), std::move(info));
}

WeightedFamily power(const WeightedFamily& f, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("power exponent must lie in [0, 1]");
  auto inner = f;
  auto fn = [inner, alpha](const SubsetState& s) {
    const double v = inner.log_weight(s);
    return v == kNotMember ? kNotMember : alpha * v;
  };
  ModelInfo info = f.info();
  info.tag = f.info().tag + "^alpha";
  if (info.r_max_bound) info.r_max_bound = std::pow(*info.r_max_bound, alpha);
  if (f.info().dependency) {
    info.dependency = [inner, alpha](const SubsetState& s, std::span<const int> moves) {
      Eigen::MatrixXd m = inner.info().dependency(s, moves);
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          if (i == j) continue;
          const double base = 1.0 + m(i, j);
          m(i, j) = base <= 0.0 ? -1.0 : std::pow(base, alpha) - 1.0;
        }
      }
      return m;
    };
  }
  if (f.info().ratios) {
    info.ratios = [inner, alpha](const SubsetState& s, std::span<const int> moves) {
      return Eigen::VectorXd(inner.info().ratios(s, moves).array().pow(alpha));
    };
  }
  return WeightedFamily(f.ground_size(), std::move(fn), std::move(info));
}

WeightedFamily size_reweight(const WeightedFamily& f, std::vector<double> phi) {
  if (phi.empty() || !(phi[0] > 0.0)) throw DomainError("phi(0) must be positive");
  bool seen_zero = false;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (phi[k] < 0.0 || !std::isfinite(phi[k])) throw DomainError("phi must be finite and nonnegative");
    if (phi[k] == 0.0) seen_zero = true;
    else if (seen_zero) throw DomainError("phi has an internal zero");
    if (k >= 1 && k + 1 < phi.size() && phi[k] * phi[k] < phi[k - 1] * phi[k + 1]) {
      throw DomainError("phi is not log-concave");
    }
  }
  auto table = std::make_shared<const std::vector<double>>(std::move(phi));
  auto at = [table](int k) {
    return k < static_cast<int>(table->size()) ? (*table)[static_cast<std::size_t>(k)] : 0.0;
  };
  auto inner = f;
  auto fn = [inner, at](const SubsetState& s) {
    const double v = inner.log_weight(s);
    const double p = at(s.size());
    if (v == kNotMember || p == 0.0) return kNotMember;
    return v + std::log(p);
  };
  ModelInfo info = f.info();
  info.tag = f.info().tag + "*phi";
  info.r_max_bound.reset();
  if (f.info().dependency) {
    info.dependency = [inner, at](const SubsetState& s, std::span<const int> moves) {
      Eigen::MatrixXd m = inner.info().dependency(s, moves);
      const int k = s.size();
      const double c = at(k + 2) * at(k) / (at(k + 1) * at(k + 1));
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          if (i != j) m(i, j) = c * (1.0 + m(i, j)) - 1.0;
        }
      }
      return m;
    };
  }
  if (f.info().ratios) {
    info.ratios = [inner, at](const SubsetState& s, std::span<const int> moves) {
      const int k = s.size();
      return Eigen::VectorXd(inner.info().ratios(s, moves) * (at(k + 1) / at(k)));
    };
  }
  return WeightedFamily(f.ground_size(), std::move(fn), std::move(info));
}

SubsetState random_member(const WeightedFamily& f, Rng& rng) {
  SubsetState s = f.empty_set();
  const int target = std::uniform_int_distribution<int>(0, f.ground_size())(rng);
  for (int k = 0; k < target; ++k) {
    const auto moves = available_moves(f, s);
    if (moves.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    s.insert(moves[pick(rng)]);
  }
  return s;
}

std::optional<SubsetState> find_downward_closure_violation(const WeightedFamily& f, int probes,
                                                           std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  std::bernoulli_distribution keep(0.5);
  for (int p = 0; p < probes; ++p) {
    const SubsetState t = random_member(f, rng);
    SubsetState s = f.empty_set();
    t.for_each([&](int i) {
      if (keep(rng)) s.insert(i);
    });
    if (!f.contains(s)) return s;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> support_masks(const WeightedFamily& f, std::size_t cap) {
  const int n = f.ground_size();
  if (n > 64) throw CapabilityError("exact enumeration requires at most 64 ground elements");
  std::vector<std::uint64_t> out;
  // Each member is reached exactly once by adding elements in increasing order.
  std::vector<std::pair<std::uint64_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [mask, next] = stack.back();
    stack.pop_back();
    out.push_back(mask);
    if (out.size() > cap) {
      throw CapabilityError("support exceeds the enumeration cap of " + std::to_string(cap) + " states");
    }
    for (int i = n - 1; i >= next; --i) {
      const std::uint64_t m = mask | (std::uint64_t{1} << i);
      if (f.contains(SubsetState::from_mask(n, m))) stack.emplace_back(m, i + 1);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fieldmix
