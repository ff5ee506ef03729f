#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "submix/errors.hpp"
#include "submix/rng.hpp"

namespace submix {

// Absolute tolerance for all submodularity/monotonicity assertions. Shell
// values are normalized to small ranges, so an absolute tolerance is
// meaningful.
inline constexpr double kPropertyTol = 1e-9;

// A subset of a ground set in canonical form: strictly increasing indices.
using Subset = std::vector<int>;

inline bool subset_contains(const Subset& s, int v) {
  return std::binary_search(s.begin(), s.end(), v);
}

// Returns s with v inserted, keeping the canonical order.
inline Subset subset_with(const Subset& s, int v) {
  Subset out;
  out.reserve(s.size() + 1);
  auto it = std::lower_bound(s.begin(), s.end(), v);
  out.insert(out.end(), s.begin(), it);
  out.push_back(v);
  out.insert(out.end(), it, s.end());
  return out;
}

// Canonicalizes an arbitrary element list: sorts and validates indices.
inline Subset make_subset(std::span<const int> elems, int ground_size) {
  Subset s(elems.begin(), elems.end());
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= ground_size)
      throw std::out_of_range("subset element " + std::to_string(s[i]) +
                              " outside ground set of size " +
                              std::to_string(ground_size));
    if (i > 0 && s[i] == s[i - 1])
      throw std::invalid_argument("duplicate element " + std::to_string(s[i]) +
                                  " in subset");
  }
  return s;
}

// Lexicographic order on canonical subsets: {} < {0} < {0,1} < {0,2} < {1}.
inline bool subset_lex_less(const Subset& a, const Subset& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct GroundSet {
  std::vector<double> costs;  // per-element nonnegative cost (words or abstract units)

  GroundSet() = default;
  explicit GroundSet(std::vector<double> c) : costs(std::move(c)) {
    for (double x : costs)
      if (!(x >= 0.0)) throw std::invalid_argument("ground set cost must be >= 0");
  }
  static GroundSet unit(int n) { return GroundSet(std::vector<double>(n, 1.0)); }

  int size() const { return static_cast<int>(costs.size()); }
  double total_cost() const {
    return std::accumulate(costs.begin(), costs.end(), 0.0);
  }
  double cost(const Subset& s) const {
    double c = 0.0;
    for (int v : s) c += costs[static_cast<std::size_t>(v)];
    return c;
  }
};

// A set function f : 2^V -> R with declared structural properties.
// Evaluation is pure and deterministic; subsets are consumed in canonical
// (sorted) order so the accumulation order, and hence the bits of the
// result, never depend on how the caller assembled the subset.
class SetFunction {
 public:
  SetFunction(int ground_size, bool monotone, bool submodular,
              std::optional<std::pair<double, double>> range = std::nullopt)
      : ground_size_(ground_size),
        monotone_(monotone),
        submodular_(submodular),
        range_(range) {}
  virtual ~SetFunction() = default;

  int ground_size() const { return ground_size_; }
  bool declared_monotone() const { return monotone_; }
  bool declared_submodular() const { return submodular_; }
  std::optional<std::pair<double, double>> declared_range() const { return range_; }

  // Evaluates on an arbitrarily ordered element list.
  double value(std::span<const int> elems) const {
    return eval_sorted(make_subset(elems, ground_size_));
  }

  // Evaluates on a subset already in canonical form.
  double value_canonical(const Subset& s) const {
    if (!s.empty() && (s.front() < 0 || s.back() >= ground_size_))
      throw std::out_of_range("subset element outside ground set");
    return eval_sorted(s);
  }

  double operator()(const Subset& s) const { return value_canonical(s); }

  // Marginal gain f(S u {v}) - f(S). Overrides may use an incremental fast
  // path; correctness is always defined by this difference.
  virtual double gain(const Subset& s, int v) const {
    if (v < 0 || v >= ground_size_)
      throw std::out_of_range("gain element outside ground set");
    if (subset_contains(s, v))
      throw std::invalid_argument("gain element already in subset");
    return value_canonical(subset_with(s, v)) - value_canonical(s);
  }

 protected:
  virtual double eval_sorted(const Subset& s) const = 0;

 private:
  int ground_size_;
  bool monotone_;
  bool submodular_;
  std::optional<std::pair<double, double>> range_;
};

using SetFunctionPtr = std::shared_ptr<const SetFunction>;

// Additive function f(S) = sum_{i in S} w_i.
class ModularFunction : public SetFunction {
 public:
  explicit ModularFunction(std::vector<double> weights)
      : SetFunction(static_cast<int>(weights.size()),
                    std::all_of(weights.begin(), weights.end(),
                                [](double w) { return w >= 0.0; }),
                    true),
        weights_(std::move(weights)) {}

  double gain(const Subset& s, int v) const override {
    if (v < 0 || v >= ground_size())
      throw std::out_of_range("gain element outside ground set");
    if (subset_contains(s, v))
      throw std::invalid_argument("gain element already in subset");
    return weights_[static_cast<std::size_t>(v)];
  }

  const std::vector<double>& weights() const { return weights_; }

 protected:
  double eval_sorted(const Subset& s) const override {
    double acc = 0.0;
    for (int v : s) acc += weights_[static_cast<std::size_t>(v)];
    return acc;
  }

 private:
  std::vector<double> weights_;
};

// Arbitrary-sign linear combination of set functions. No closure claims:
// declared submodular only when every component is and every weight is
// nonnegative. Used internally (e.g. loss-augmented objectives evaluated at
// probe points); the public conical form is Mixture below.
class LinearCombination : public SetFunction {
 public:
  LinearCombination(std::vector<SetFunctionPtr> components,
                    std::vector<double> weights)
      : SetFunction(components.empty() ? 0 : components.front()->ground_size(),
                    derive_monotone(components, weights),
                    derive_submodular(components, weights)),
        components_(std::move(components)),
        weights_(std::move(weights)) {
    if (components_.size() != weights_.size())
      throw ConfigError("component/weight count mismatch: " +
                        std::to_string(components_.size()) + " vs " +
                        std::to_string(weights_.size()));
    for (const auto& c : components_)
      if (c->ground_size() != ground_size())
        throw ConfigError("mixture components disagree on ground set size");
  }

  std::size_t size() const { return components_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<SetFunctionPtr>& components() const { return components_; }

  double gain(const Subset& s, int v) const override {
    if (v < 0 || v >= ground_size())
      throw std::out_of_range("gain element outside ground set");
    if (subset_contains(s, v))
      throw std::invalid_argument("gain element already in subset");
    double acc = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i)
      acc += weights_[i] * components_[i]->gain(s, v);
    return acc;
  }

 protected:
  double eval_sorted(const Subset& s) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i)
      acc += weights_[i] * components_[i]->value_canonical(s);
    return acc;
  }

 private:
  static bool derive_monotone(const std::vector<SetFunctionPtr>& cs,
                              const std::vector<double>& ws) {
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (!(ws[i] >= 0.0) || !cs[i]->declared_monotone()) return false;
    return true;
  }
  static bool derive_submodular(const std::vector<SetFunctionPtr>& cs,
                                const std::vector<double>& ws) {
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (!(ws[i] >= 0.0) || !cs[i]->declared_submodular()) return false;
    return true;
  }

  std::vector<SetFunctionPtr> components_;
  std::vector<double> weights_;
};

// Conical mixture sum_i w_i f_i with w_i >= 0.  Nonnegativity is enforced at
// construction: it is what makes the submodularity of the components carry
// over to the mixture.
class Mixture : public LinearCombination {
 public:
  Mixture(std::vector<SetFunctionPtr> components, std::vector<double> weights)
      : LinearCombination(std::move(components), validated(std::move(weights))) {}

 private:
  static std::vector<double> validated(std::vector<double> ws) {
    for (double w : ws)
      if (!(w >= 0.0))
        throw std::invalid_argument("mixture weight must be nonnegative, got " +
                                    std::to_string(w));
    return ws;
  }
};

inline double mixture_evaluate(const Mixture& m, const Subset& s) {
  return m.value_canonical(s);
}

struct PropertyReport {
  long long trials = 0;
  long long violations = 0;
  double worst_gap = 0.0;  // largest positive violation magnitude seen
};

// Samples random triples (A subset of B subset of V\{v}, v) and counts
// diminishing-returns violations gain(A,v) < gain(B,v) - tol. Deterministic
// under a fixed seed. Degenerate ground sets yield zero trials.
inline PropertyReport check_submodular(const SetFunction& f, long long trials,
                                       std::uint64_t seed,
                                       double tol = kPropertyTol) {
  PropertyReport rep;
  const int n = f.ground_size();
  if (n < 2) return rep;
  RngStream rng(seed, "check-submodular");
  for (long long t = 0; t < trials; ++t) {
    const int v = rng.index(n);
    Subset big, small;
    for (int i = 0; i < n; ++i) {
      if (i == v) continue;
      if (rng.coin()) {
        big.push_back(i);
        if (rng.coin()) small.push_back(i);
      }
    }
    const double gain_small = f.gain(small, v);
    const double gain_big = f.gain(big, v);
    const double gap = gain_big - gain_small;
    ++rep.trials;
    if (gap > tol) ++rep.violations;
    if (gap > rep.worst_gap) rep.worst_gap = gap;
  }
  return rep;
}

// Samples random pairs (A, v not in A) and counts monotonicity violations
// f(A) > f(A u {v}) + tol.
inline PropertyReport check_monotone(const SetFunction& f, long long trials,
                                     std::uint64_t seed,
                                     double tol = kPropertyTol) {
  PropertyReport rep;
  const int n = f.ground_size();
  if (n < 1) return rep;
  RngStream rng(seed, "check-monotone");
  for (long long t = 0; t < trials; ++t) {
    const int v = rng.index(n);
    Subset s;
    for (int i = 0; i < n; ++i)
      if (i != v && rng.coin()) s.push_back(i);
    const double gap = -f.gain(s, v);  // f(A) - f(A u {v})
    ++rep.trials;
    if (gap > tol) ++rep.violations;
    if (gap > rep.worst_gap) rep.worst_gap = gap;
  }
  return rep;
}

}  // namespace submix
