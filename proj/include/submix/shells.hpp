#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "submix/set_function.hpp"

namespace submix {

inline constexpr double kUnboundedThreshold =
    std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Instance features: the per-ground-set parameters a shell is instantiated
// against. Channels are keyed by string ids referenced from ShellSpec.
// ---------------------------------------------------------------------------

struct SimilarityMatrix {
  int n = 0;
  std::vector<double> a;  // row-major n*n

  SimilarityMatrix() = default;
  explicit SimilarityMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }

  void validate() const {
    for (int i = 0; i < n; ++i) {
      bool row_zero = true;
      for (int j = 0; j < n; ++j) {
        const double x = at(i, j);
        if (!(x >= 0.0))
          throw std::invalid_argument("similarity entries must be nonnegative");
        if (x != at(j, i))
          throw std::invalid_argument("similarity matrix must be symmetric");
        if (x > 0.0) row_zero = false;
      }
      if (!row_zero && !(at(i, i) > 0.0))
        throw std::invalid_argument(
            "similarity diagonal must be positive on nonzero rows");
    }
  }
};

struct Partition {
  std::vector<std::vector<int>> clusters;

  int cluster_count() const { return static_cast<int>(clusters.size()); }

  // Disjoint and exhaustive over 0..n-1.
  void validate(int n) const {
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      for (int v : clusters[k]) {
        if (v < 0 || v >= n)
          throw std::invalid_argument("partition element outside ground set");
        if (owner[static_cast<std::size_t>(v)] != -1)
          throw std::invalid_argument("partition clusters overlap at element " +
                                      std::to_string(v));
        owner[static_cast<std::size_t>(v)] = static_cast<int>(k);
      }
    }
    for (int v = 0; v < n; ++v)
      if (owner[static_cast<std::size_t>(v)] == -1)
        throw std::invalid_argument("partition does not cover element " +
                                    std::to_string(v));
  }
};

struct InstanceFeatures {
  std::map<std::string, std::vector<double>> rewards;       // r_i in [0,1]
  std::map<std::string, SimilarityMatrix> similarities;     // symmetric, >= 0
  std::map<std::string, Partition> partitions;              // disjoint cover of V
  std::map<std::string, std::vector<double>> aux_costs;     // >= 0

  void add_rewards(const std::string& id, std::vector<double> r) {
    for (double x : r)
      if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("reward channel '" + id +
                                    "' has value outside [0,1]");
    rewards[id] = std::move(r);
  }
  void add_similarity(const std::string& id, SimilarityMatrix m) {
    m.validate();
    similarities[id] = std::move(m);
  }
  void add_partition(const std::string& id, Partition p, int ground_size) {
    p.validate(ground_size);
    partitions[id] = std::move(p);
  }
  void add_aux_costs(const std::string& id, std::vector<double> c) {
    for (double x : c)
      if (!(x >= 0.0))
        throw std::invalid_argument("aux cost channel '" + id +
                                    "' has negative value");
    aux_costs[id] = std::move(c);
  }
};

// ---------------------------------------------------------------------------
// Shell specs: the alpha-parameters of one abstract shell. Instantiable
// against any (GroundSet, InstanceFeatures) pair. The catalog is closed:
// submodularity is an argument made per family, not per config.
// ---------------------------------------------------------------------------

enum class ShellFamily { Modular, Diversity, ClusteredFacility, Fidelity, Truncation };

inline const char* family_name(ShellFamily f) {
  switch (f) {
    case ShellFamily::Modular: return "modular";
    case ShellFamily::Diversity: return "diversity";
    case ShellFamily::ClusteredFacility: return "clustered_facility";
    case ShellFamily::Fidelity: return "fidelity";
    case ShellFamily::Truncation: return "truncation";
  }
  return "?";
}

inline ShellFamily family_from_name(const std::string& s) {
  if (s == "modular") return ShellFamily::Modular;
  if (s == "diversity") return ShellFamily::Diversity;
  if (s == "clustered_facility") return ShellFamily::ClusteredFacility;
  if (s == "fidelity") return ShellFamily::Fidelity;
  if (s == "truncation") return ShellFamily::Truncation;
  throw ConfigError("unknown shell family '" + s + "'");
}

struct ShellSpec {
  ShellFamily family = ShellFamily::Modular;
  double curvature = 1.0;                  // diversity: a in [0,1]
  double saturation = 1.0;                 // fidelity: alpha in (0,1]
  double threshold = kUnboundedThreshold;  // truncation: alpha in (0,inf]
  std::string rewards;     // reward channel (modular, diversity, clustered facility)
  std::string clustering;  // partition channel (diversity, clustered facility)
  std::string similarity;  // similarity channel (fidelity)
  std::string costs;       // aux cost channel (truncation)

  std::string label() const;

  bool operator==(const ShellSpec&) const = default;

  static ShellSpec modular(std::string reward_id) {
    ShellSpec s;
    s.family = ShellFamily::Modular;
    s.rewards = std::move(reward_id);
    return s;
  }
  static ShellSpec diversity(double a, std::string clustering_id,
                             std::string reward_id) {
    ShellSpec s;
    s.family = ShellFamily::Diversity;
    s.curvature = a;
    s.clustering = std::move(clustering_id);
    s.rewards = std::move(reward_id);
    return s;
  }
  static ShellSpec clustered_facility(std::string clustering_id,
                                      std::string reward_id) {
    ShellSpec s;
    s.family = ShellFamily::ClusteredFacility;
    s.clustering = std::move(clustering_id);
    s.rewards = std::move(reward_id);
    return s;
  }
  static ShellSpec fidelity(double alpha, std::string similarity_id) {
    ShellSpec s;
    s.family = ShellFamily::Fidelity;
    s.saturation = alpha;
    s.similarity = std::move(similarity_id);
    return s;
  }
  static ShellSpec truncation(double alpha, std::string cost_id) {
    ShellSpec s;
    s.family = ShellFamily::Truncation;
    s.threshold = alpha;
    s.costs = std::move(cost_id);
    return s;
  }
};

inline std::string ShellSpec::label() const {
  std::string out = family_name(family);
  switch (family) {
    case ShellFamily::Modular:
      out += "(" + rewards + ")";
      break;
    case ShellFamily::Diversity:
      out += "(a=" + std::to_string(curvature) + "," + clustering + "," + rewards + ")";
      break;
    case ShellFamily::ClusteredFacility:
      out += "(" + clustering + "," + rewards + ")";
      break;
    case ShellFamily::Fidelity:
      out += "(alpha=" + std::to_string(saturation) + "," + similarity + ")";
      break;
    case ShellFamily::Truncation:
      out += "(alpha=" +
             (threshold == kUnboundedThreshold ? std::string("inf")
                                               : std::to_string(threshold)) +
             "," + costs + ")";
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family evaluation rules. Each is exposed standalone so tests can pin the
// formulas directly; the SetFunction classes below wrap them.
// ---------------------------------------------------------------------------

// x^a with the 0^0 := 0 convention, which keeps f(empty)=0.
inline double concave_power(double x, double a) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, a);
}

// [sum_k (sum_{i in S&Pk} r_i)^a] / [sum_k (sum_{i in Pk} r_i)^a], in [0,1].
// An all-zero denominator defines the value as 0.
inline double diversity_eval(const Subset& s, const Partition& part,
                             const std::vector<double>& r, double a) {
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("diversity curvature must be in [0,1]");
  double num = 0.0, den = 0.0;
  for (const auto& cluster : part.clusters) {
    double in_s = 0.0, total = 0.0;
    for (int v : cluster) {
      total += r[static_cast<std::size_t>(v)];
      if (subset_contains(s, v)) in_s += r[static_cast<std::size_t>(v)];
    }
    num += concave_power(in_s, a);
    den += concave_power(total, a);
  }
  return den > 0.0 ? num / den : 0.0;
}

// (1/K) sum_k max_{i in S&Pk} r_i, the max over an empty set being 0.
inline double cfacility_eval(const Subset& s, const Partition& part,
                             const std::vector<double>& r) {
  const int k = part.cluster_count();
  if (k == 0) return 0.0;
  double acc = 0.0;
  for (const auto& cluster : part.clusters) {
    double best = 0.0;
    for (int v : cluster)
      if (subset_contains(s, v) && r[static_cast<std::size_t>(v)] > best)
        best = r[static_cast<std::size_t>(v)];
    acc += best;
  }
  return acc / k;
}

// (1/|V|) sum_i min{C_i(S)/C_i(V), alpha} with C_i(S) = sum_{j in S} d_ij.
// Rows with C_i(V)=0 contribute 0.
inline double fidelity_eval(const Subset& s, const SimilarityMatrix& sim,
                            double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("fidelity saturation must be in (0,1]");
  const int n = sim.n;
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += sim.at(i, j);
    if (!(total > 0.0)) continue;
    double covered = 0.0;
    for (int v : s) covered += sim.at(i, v);
    acc += std::min(covered / total, alpha);
  }
  return acc / n;
}

// min{c(S), cap} for a nonnegative modular c and an absolute cap.
inline double truncation_eval_cap(const Subset& s, const std::vector<double>& c,
                                  double cap) {
  double acc = 0.0;
  for (int v : s) acc += c[static_cast<std::size_t>(v)];
  return std::min(acc, cap);
}

// min{c(S), alpha * c(V)}: the maximizing B of a nonnegative modular c is V.
// alpha = inf recovers the plain modular function.
inline double truncation_eval(const Subset& s, const std::vector<double>& c,
                              double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("truncation threshold must be > 0");
  double total = 0.0;
  for (double x : c) total += x;
  const double cap =
      alpha == kUnboundedThreshold ? kUnboundedThreshold : alpha * total;
  return truncation_eval_cap(s, c, cap);
}

// ---------------------------------------------------------------------------
// Instantiated shell functions.
// ---------------------------------------------------------------------------

class DiversityFunction : public SetFunction {
 public:
  DiversityFunction(Partition part, std::vector<double> rewards, double a)
      : SetFunction(static_cast<int>(rewards.size()), true, true,
                    std::make_pair(0.0, 1.0)),
        part_(std::move(part)),
        rewards_(std::move(rewards)),
        a_(a) {
    if (!(a_ >= 0.0 && a_ <= 1.0))
      throw std::invalid_argument("diversity curvature must be in [0,1]");
  }

 protected:
  double eval_sorted(const Subset& s) const override {
    return diversity_eval(s, part_, rewards_, a_);
  }

 private:
  Partition part_;
  std::vector<double> rewards_;
  double a_;
};

class ClusteredFacilityFunction : public SetFunction {
 public:
  ClusteredFacilityFunction(Partition part, std::vector<double> rewards)
      : SetFunction(static_cast<int>(rewards.size()), true, true,
                    std::make_pair(0.0, 1.0)),
        part_(std::move(part)),
        rewards_(std::move(rewards)) {}

 protected:
  double eval_sorted(const Subset& s) const override {
    return cfacility_eval(s, part_, rewards_);
  }

 private:
  Partition part_;
  std::vector<double> rewards_;
};

class FidelityFunction : public SetFunction {
 public:
  FidelityFunction(SimilarityMatrix sim, double alpha)
      : SetFunction(sim.n, true, true, std::make_pair(0.0, alpha)),
        sim_(std::move(sim)),
        alpha_(alpha) {
    if (!(alpha_ > 0.0 && alpha_ <= 1.0))
      throw std::invalid_argument("fidelity saturation must be in (0,1]");
  }

 protected:
  double eval_sorted(const Subset& s) const override {
    return fidelity_eval(s, sim_, alpha_);
  }

 private:
  SimilarityMatrix sim_;
  double alpha_;
};

class TruncationFunction : public SetFunction {
 public:
  // cap is absolute; use from_threshold for the relative-alpha form.
  TruncationFunction(std::vector<double> costs, double cap)
      : SetFunction(static_cast<int>(costs.size()), true, true),
        costs_(std::move(costs)),
        cap_(cap) {
    if (std::isnan(cap_) || cap_ < 0.0)
      throw std::invalid_argument("truncation cap must be nonnegative");
  }

  static TruncationFunction from_threshold(std::vector<double> costs,
                                           double alpha) {
    if (!(alpha > 0.0))
      throw std::invalid_argument("truncation threshold must be > 0");
    double total = 0.0;
    for (double x : costs) total += x;
    const double cap =
        alpha == kUnboundedThreshold ? kUnboundedThreshold : alpha * total;
    return TruncationFunction(std::move(costs), cap);
  }

 protected:
  double eval_sorted(const Subset& s) const override {
    return truncation_eval_cap(s, costs_, cap_);
  }

 private:
  std::vector<double> costs_;
  double cap_;
};

// ---------------------------------------------------------------------------
// Instantiation: ShellSpec x (GroundSet, InstanceFeatures) -> SetFunction.
// ---------------------------------------------------------------------------

namespace detail {

template <typename Map>
const typename Map::mapped_type& resolve(const Map& m, const std::string& id,
                                         const char* kind) {
  auto it = m.find(id);
  if (it == m.end())
    throw ConfigError(std::string("unresolved ") + kind + " channel '" + id + "'");
  return it->second;
}

inline void check_len(std::size_t got, int n, const std::string& id) {
  if (got != static_cast<std::size_t>(n))
    throw ConfigError("channel '" + id + "' has length " + std::to_string(got) +
                      " but ground set has " + std::to_string(n));
}

}  // namespace detail

inline SetFunctionPtr instantiate(const ShellSpec& spec,
                                  const InstanceFeatures& features,
                                  const GroundSet& ground) {
  const int n = ground.size();
  switch (spec.family) {
    case ShellFamily::Modular: {
      const auto& r = detail::resolve(features.rewards, spec.rewards, "reward");
      detail::check_len(r.size(), n, spec.rewards);
      return std::make_shared<ModularFunction>(r);
    }
    case ShellFamily::Diversity: {
      const auto& r = detail::resolve(features.rewards, spec.rewards, "reward");
      detail::check_len(r.size(), n, spec.rewards);
      const auto& p =
          detail::resolve(features.partitions, spec.clustering, "clustering");
      p.validate(n);
      return std::make_shared<DiversityFunction>(p, r, spec.curvature);
    }
    case ShellFamily::ClusteredFacility: {
      const auto& r = detail::resolve(features.rewards, spec.rewards, "reward");
      detail::check_len(r.size(), n, spec.rewards);
      const auto& p =
          detail::resolve(features.partitions, spec.clustering, "clustering");
      p.validate(n);
      return std::make_shared<ClusteredFacilityFunction>(p, r);
    }
    case ShellFamily::Fidelity: {
      const auto& m =
          detail::resolve(features.similarities, spec.similarity, "similarity");
      if (m.n != n)
        throw ConfigError("similarity channel '" + spec.similarity +
                          "' has size " + std::to_string(m.n) +
                          " but ground set has " + std::to_string(n));
      return std::make_shared<FidelityFunction>(m, spec.saturation);
    }
    case ShellFamily::Truncation: {
      const auto& c = detail::resolve(features.aux_costs, spec.costs, "aux cost");
      detail::check_len(c.size(), n, spec.costs);
      return std::make_shared<TruncationFunction>(
          TruncationFunction::from_threshold(c, spec.threshold));
    }
  }
  throw ConfigError("unknown shell family");
}

// The set cover function f(B) = |union_{i in B} A_i| expressed as a mixture
// of |E| unit-capped truncation functions with 0/1 costs. Exact on integers.
inline Mixture setcover_from_truncations(
    const std::vector<std::vector<int>>& covering_sets, int universe_size) {
  const int n = static_cast<int>(covering_sets.size());
  std::vector<SetFunctionPtr> components;
  std::vector<double> weights;
  components.reserve(static_cast<std::size_t>(universe_size));
  for (int j = 0; j < universe_size; ++j) {
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int e : covering_sets[static_cast<std::size_t>(i)])
        if (e == j) c[static_cast<std::size_t>(i)] = 1.0;
    components.push_back(std::make_shared<TruncationFunction>(std::move(c), 1.0));
    weights.push_back(1.0);
  }
  return Mixture(std::move(components), std::move(weights));
}

}  // namespace submix
