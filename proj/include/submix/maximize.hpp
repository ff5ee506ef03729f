#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "submix/set_function.hpp"

namespace submix {

struct BudgetConstraint {
  double budget = 0.0;
  std::vector<double> costs;     // per-element, > 0 for knapsack greedy
  double scale_exponent = 1.0;   // r in the gain/c^r rule

  static BudgetConstraint cardinality(int n, int k) {
    return BudgetConstraint{static_cast<double>(k),
                            std::vector<double>(static_cast<std::size_t>(n), 1.0),
                            0.0};
  }

  double cost_of(const Subset& s) const {
    double c = 0.0;
    for (int v : s) c += costs[static_cast<std::size_t>(v)];
    return c;
  }
  bool feasible(const Subset& s) const { return cost_of(s) <= budget; }
};

struct PickRecord {
  int element = -1;
  double gain = 0.0;  // raw marginal gain at pick time
};

struct MaximizationResult {
  Subset selected;
  double value = 0.0;
  double total_cost = 0.0;
  long long evaluations = 0;  // oracle calls: one per value or gain query
  std::vector<PickRecord> trace;
};

struct GreedyOptions {
  bool lazy = true;
  // Keep adding zero-gain elements (cheapest first among maximal-gain
  // candidates) until nothing fits. Near-budget summaries are what the
  // complement-recall loss assumes, hence the summarization default is on;
  // plain maximization keeps it off.
  bool fill_budget = false;
};

// ---------------------------------------------------------------------------
// Cardinality greedy: adds the argmax-gain element (ties -> lowest index)
// until |S| = k or no positive gain remains. For monotone submodular f the
// value is within 1 - 1/e of the optimum.
// ---------------------------------------------------------------------------

inline MaximizationResult greedy_cardinality(const SetFunction& f, int k) {
  if (k < 0) throw std::invalid_argument("cardinality bound must be >= 0");
  const int n = f.ground_size();
  if (k > n) k = n;

  MaximizationResult res;
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  while (static_cast<int>(res.selected.size()) < k) {
    int best_v = -1;
    double best_gain = 0.0;
    for (int v = 0; v < n; ++v) {
      if (in_s[static_cast<std::size_t>(v)]) continue;
      const double g = f.gain(res.selected, v);
      ++res.evaluations;
      if (best_v == -1 || g > best_gain) {
        best_v = v;
        best_gain = g;
      }
    }
    if (best_v == -1 || !(best_gain > 0.0)) break;
    res.selected = subset_with(res.selected, best_v);
    in_s[static_cast<std::size_t>(best_v)] = 1;
    res.trace.push_back({best_v, best_gain});
  }
  res.value = f.value_canonical(res.selected);
  ++res.evaluations;
  res.total_cost = static_cast<double>(res.selected.size());
  return res;
}

// ---------------------------------------------------------------------------
// Knapsack greedy: cost-scaled gain rule gain/c^r with the best-singleton
// fallback of the classical budgeted greedy. For monotone submodular f and
// r = 1 the returned value is within 1 - 1/sqrt(e) of the optimum. The lazy
// path (stale-gain priority re-check) returns the identical subset.
// ---------------------------------------------------------------------------

namespace detail {

// Fill phase: gains are no longer positive; among feasible elements pick by
// (gain desc, cost asc, index asc) until nothing fits.
inline void greedy_fill(const SetFunction& f, const BudgetConstraint& con,
                        MaximizationResult& res, std::vector<char>& in_s,
                        double& spent) {
  const int n = f.ground_size();
  for (;;) {
    int best_v = -1;
    double best_gain = 0.0, best_cost = 0.0;
    for (int v = 0; v < n; ++v) {
      if (in_s[static_cast<std::size_t>(v)]) continue;
      const double c = con.costs[static_cast<std::size_t>(v)];
      if (spent + c > con.budget) continue;
      const double g = f.gain(res.selected, v);
      ++res.evaluations;
      if (best_v == -1 || g > best_gain ||
          (g == best_gain && c < best_cost)) {
        best_v = v;
        best_gain = g;
        best_cost = c;
      }
    }
    if (best_v == -1) return;
    res.selected = subset_with(res.selected, best_v);
    in_s[static_cast<std::size_t>(best_v)] = 1;
    spent += best_cost;
    res.trace.push_back({best_v, best_gain});
  }
}

inline void knapsack_validate(const SetFunction& f, const BudgetConstraint& con) {
  const int n = f.ground_size();
  if (con.costs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("constraint cost vector length mismatch");
  if (!(con.budget >= 0.0)) throw std::invalid_argument("budget must be >= 0");
  if (!(con.scale_exponent >= 0.0))
    throw std::invalid_argument("scale exponent must be >= 0");
  for (double c : con.costs)
    if (!(c > 0.0))
      throw std::invalid_argument("knapsack greedy requires positive costs");
}

}  // namespace detail

inline MaximizationResult greedy_knapsack(const SetFunction& f,
                                          const BudgetConstraint& con,
                                          GreedyOptions opts = {}) {
  detail::knapsack_validate(f, con);
  const int n = f.ground_size();
  const double r = con.scale_exponent;

  MaximizationResult res;
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  double spent = 0.0;
  bool positive_phase_done = false;

  if (!opts.lazy) {
    while (!positive_phase_done) {
      int best_v = -1;
      double best_scaled = 0.0, best_raw = 0.0;
      for (int v = 0; v < n; ++v) {
        if (in_s[static_cast<std::size_t>(v)]) continue;
        const double c = con.costs[static_cast<std::size_t>(v)];
        if (spent + c > con.budget) continue;
        const double g = f.gain(res.selected, v);
        ++res.evaluations;
        const double scaled = g / std::pow(c, r);
        if (best_v == -1 || scaled > best_scaled) {
          best_v = v;
          best_scaled = scaled;
          best_raw = g;
        }
      }
      if (best_v == -1 || !(best_scaled > 0.0)) {
        positive_phase_done = true;
        break;
      }
      res.selected = subset_with(res.selected, best_v);
      in_s[static_cast<std::size_t>(best_v)] = 1;
      spent += con.costs[static_cast<std::size_t>(best_v)];
      res.trace.push_back({best_v, best_raw});
    }
  } else {
    // Minoux lazy greedy. Heap priority: (scaled gain desc, index asc); an
    // entry is fresh when computed at the current |S|. Refreshing until the
    // top is fresh reproduces the eager pick exactly, ties included: any
    // stale entry ordered below a fresh top has true scaled gain <= its
    // stale estimate <= the top's, and on exact equality its index is
    // larger, which is how the eager scan breaks ties too.
    struct Entry {
      double scaled;
      double raw;
      int v;
      int stamp;
    };
    auto worse = [](const Entry& a, const Entry& b) {
      if (a.scaled != b.scaled) return a.scaled < b.scaled;
      return a.v > b.v;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    for (int v = 0; v < n; ++v) {
      const double c = con.costs[static_cast<std::size_t>(v)];
      if (c > con.budget) continue;
      const double g = f.gain(res.selected, v);
      ++res.evaluations;
      heap.push({g / std::pow(c, r), g, v, 0});
    }
    for (;;) {
      int size_now = static_cast<int>(res.selected.size());
      Entry top{};
      bool have = false;
      while (!heap.empty()) {
        top = heap.top();
        heap.pop();
        const double c = con.costs[static_cast<std::size_t>(top.v)];
        if (spent + c > con.budget) continue;  // can never fit again
        if (top.stamp == size_now) {
          have = true;
          break;
        }
        const double g = f.gain(res.selected, top.v);
        ++res.evaluations;
        heap.push({g / std::pow(c, r), g, top.v, size_now});
      }
      if (!have || !(top.scaled > 0.0)) {
        if (have) heap.push(top);  // keep for completeness; fill rescans anyway
        positive_phase_done = true;
        break;
      }
      res.selected = subset_with(res.selected, top.v);
      in_s[static_cast<std::size_t>(top.v)] = 1;
      spent += con.costs[static_cast<std::size_t>(top.v)];
      res.trace.push_back({top.v, top.raw});
    }
  }

  if (opts.fill_budget)
    detail::greedy_fill(f, con, res, in_s, spent);

  res.value = f.value_canonical(res.selected);
  ++res.evaluations;
  res.total_cost = spent;

  // Best feasible singleton comparison; this is what carries the
  // 1 - 1/sqrt(e) guarantee.
  int best_single = -1;
  double best_single_val = 0.0;
  for (int v = 0; v < n; ++v) {
    if (con.costs[static_cast<std::size_t>(v)] > con.budget) continue;
    const double val = f.value_canonical({v});
    ++res.evaluations;
    if (best_single == -1 || val > best_single_val) {
      best_single = v;
      best_single_val = val;
    }
  }
  if (best_single != -1 && best_single_val > res.value) {
    res.selected = {best_single};
    res.value = best_single_val;
    res.total_cost = con.costs[static_cast<std::size_t>(best_single)];
    res.trace.assign(1, {best_single, best_single_val});
  }
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle: all 2^|V| subsets, feasible maximizer, ties broken by
// lexicographically smallest subset. Capped at |V| <= 22.
// ---------------------------------------------------------------------------

inline constexpr int kBruteForceCap = 22;

namespace detail {

// Lexicographic comparison of the canonical index sequences of two masks.
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t d = a ^ b;
  if (d == 0) return false;
  const int i = __builtin_ctz(d);
  if ((a >> i) & 1u) return (b >> i) != 0;  // a owns i; smaller unless b ended
  return (a >> i) == 0;                     // b owns i; a smaller iff a ended
}

}  // namespace detail

inline MaximizationResult brute_force(const SetFunction& f,
                                      const BudgetConstraint& con) {
  const int n = f.ground_size();
  if (n > kBruteForceCap)
    throw std::invalid_argument("brute force oracle capped at ground sets of " +
                                std::to_string(kBruteForceCap) + " elements");
  if (con.costs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("constraint cost vector length mismatch");

  MaximizationResult res;
  std::uint32_t best_mask = 0;
  double best_val = 0.0;
  bool have = false;
  Subset scratch;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double cost = 0.0;
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) cost += con.costs[static_cast<std::size_t>(v)];
    if (cost > con.budget) continue;
    scratch.clear();
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) scratch.push_back(v);
    const double val = f.value_canonical(scratch);
    ++res.evaluations;
    if (!have || val > best_val ||
        (val == best_val && detail::mask_lex_less(mask, best_mask))) {
      have = true;
      best_val = val;
      best_mask = mask;
    }
  }
  for (int v = 0; v < n; ++v)
    if ((best_mask >> v) & 1u) res.selected.push_back(v);
  res.value = have ? best_val : f.value_canonical({});
  res.total_cost = con.cost_of(res.selected);
  return res;
}

}  // namespace submix
