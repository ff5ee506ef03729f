#pragma once

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "submix/learn.hpp"
#include "submix/synth.hpp"

namespace submix {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string details;
};

struct RatioStats {
  double min = 1.0;
  double mean = 0.0;
  double max = 0.0;
  int count = 0;

  void add(double r) {
    if (count == 0) {
      min = max = r;
      mean = r;
    } else {
      min = std::min(min, r);
      max = std::max(max, r);
      mean += (r - mean) / (count + 1);
    }
    ++count;
  }
};

// ---------------------------------------------------------------------------
// Random valid instances and shells for the property suites.
// ---------------------------------------------------------------------------

struct RandomInstance {
  GroundSet ground;
  InstanceFeatures features;
};

inline RandomInstance random_instance(RngStream& rng, int n) {
  RandomInstance ri;
  std::vector<double> costs(static_cast<std::size_t>(n));
  for (auto& c : costs) c = rng.uniform(0.5, 1.5);
  ri.ground = GroundSet(std::move(costs));

  std::vector<double> rewards(static_cast<std::size_t>(n));
  for (auto& r : rewards) r = rng.real01();
  ri.features.add_rewards("r", std::move(rewards));

  SimilarityMatrix sim(n);
  for (int i = 0; i < n; ++i) {
    sim.at(i, i) = rng.uniform(0.5, 1.0);
    for (int j = i + 1; j < n; ++j) {
      const double x = rng.real01();
      sim.at(i, j) = x;
      sim.at(j, i) = x;
    }
  }
  ri.features.add_similarity("s", std::move(sim));

  const int k = n > 0 ? rng.uniform_int(1, n) : 1;
  Partition p;
  p.clusters.assign(static_cast<std::size_t>(k), {});
  for (int i = 0; i < n; ++i)
    p.clusters[static_cast<std::size_t>(rng.index(k))].push_back(i);
  ri.features.add_partition("p", std::move(p), n);

  std::vector<double> aux(static_cast<std::size_t>(n));
  for (auto& c : aux) c = rng.uniform(0.1, 1.0);
  ri.features.add_aux_costs("c", std::move(aux));
  return ri;
}

inline ShellSpec random_shell_spec(RngStream& rng, ShellFamily family) {
  switch (family) {
    case ShellFamily::Modular:
      return ShellSpec::modular("r");
    case ShellFamily::Diversity:
      return ShellSpec::diversity(rng.real01(), "p", "r");
    case ShellFamily::ClusteredFacility:
      return ShellSpec::clustered_facility("p", "r");
    case ShellFamily::Fidelity:
      return ShellSpec::fidelity(rng.uniform(0.01, 1.0), "s");
    case ShellFamily::Truncation:
      return ShellSpec::truncation(
          rng.coin() ? kUnboundedThreshold : rng.uniform(0.05, 1.2), "c");
  }
  return ShellSpec::modular("r");
}

inline ShellSpec random_shell_spec(RngStream& rng) {
  static const ShellFamily kFamilies[] = {
      ShellFamily::Modular, ShellFamily::Diversity,
      ShellFamily::ClusteredFacility, ShellFamily::Fidelity,
      ShellFamily::Truncation};
  return random_shell_spec(rng, kFamilies[rng.index(5)]);
}

// ---------------------------------------------------------------------------
// Suite 1: every catalog family x random parameterizations passes the
// diminishing-returns and monotonicity checks.
// ---------------------------------------------------------------------------

inline SuiteResult verify_shell_properties(std::uint64_t seed,
                                           int params_per_family = 10,
                                           long long trials = 1000,
                                           int max_n = 30) {
  SuiteResult res{"shell-properties", true, ""};
  RngStream rng(seed, "verify/shells");
  long long worst_violations = 0;
  for (ShellFamily family :
       {ShellFamily::Modular, ShellFamily::Diversity,
        ShellFamily::ClusteredFacility, ShellFamily::Fidelity,
        ShellFamily::Truncation}) {
    for (int rep = 0; rep < params_per_family; ++rep) {
      const int n = rng.uniform_int(4, max_n);
      RandomInstance ri = random_instance(rng, n);
      const ShellSpec spec = random_shell_spec(rng, family);
      SetFunctionPtr f = instantiate(spec, ri.features, ri.ground);
      const auto sub = check_submodular(*f, trials, rng.u64());
      const auto mon = check_monotone(*f, trials, rng.u64());
      worst_violations += sub.violations + mon.violations;
      if (sub.violations > 0 || mon.violations > 0) {
        res.pass = false;
        res.details += spec.label() + " on |V|=" + std::to_string(n) + ": " +
                       std::to_string(sub.violations) + " submodularity + " +
                       std::to_string(mon.violations) +
                       " monotonicity violations; ";
      }
    }
  }
  if (res.pass)
    res.details = "0 violations across " +
                  std::to_string(5 * params_per_family) + " shells x " +
                  std::to_string(trials) + " trials";
  return res;
}

// Suite 2: conical mixtures stay submodular and monotone.
inline SuiteResult verify_mixture_closure(std::uint64_t seed,
                                          int mixtures = 100,
                                          int shells_per_mixture = 5,
                                          long long trials = 1000,
                                          int max_n = 30) {
  SuiteResult res{"mixture-closure", true, ""};
  RngStream rng(seed, "verify/mixtures");
  for (int rep = 0; rep < mixtures; ++rep) {
    const int n = rng.uniform_int(4, max_n);
    RandomInstance ri = random_instance(rng, n);
    std::vector<SetFunctionPtr> comps;
    std::vector<double> ws;
    for (int i = 0; i < shells_per_mixture; ++i) {
      comps.push_back(instantiate(random_shell_spec(rng), ri.features, ri.ground));
      ws.push_back(rng.real01());
    }
    Mixture mix(std::move(comps), std::move(ws));
    const auto sub = check_submodular(mix, trials, rng.u64());
    const auto mon = check_monotone(mix, trials, rng.u64());
    if (sub.violations > 0 || mon.violations > 0) {
      res.pass = false;
      res.details += "mixture " + std::to_string(rep) + ": " +
                     std::to_string(sub.violations + mon.violations) +
                     " violations; ";
    }
  }
  if (res.pass)
    res.details = "0 violations across " + std::to_string(mixtures) +
                  " mixtures x " + std::to_string(trials) + " trials";
  return res;
}

// Sanity check on the checker itself: a supermodular function must be
// caught. |S|^2 gains grow with context, the canonical counterexample.
inline SuiteResult verify_checker_catches_supermodular(std::uint64_t seed) {
  class CardinalitySquared : public SetFunction {
   public:
    explicit CardinalitySquared(int n) : SetFunction(n, true, false) {}

   protected:
    double eval_sorted(const Subset& s) const override {
      return static_cast<double>(s.size()) * static_cast<double>(s.size());
    }
  };
  CardinalitySquared f(10);
  const auto rep = check_submodular(f, 1000, seed);
  SuiteResult res{"checker-mutation", rep.violations > 0,
                  std::to_string(rep.violations) +
                      " violations flagged on |S|^2 (must be > 0)"};
  return res;
}

// ---------------------------------------------------------------------------
// Suite 3: greedy approximation ratios against the exhaustive oracle.
// ---------------------------------------------------------------------------

struct GreedyRatioReport {
  RatioStats knapsack;
  RatioStats cardinality;
  bool lazy_eager_identical = true;
  bool oracle_dominates = true;
};

inline GreedyRatioReport measure_greedy_ratios(std::uint64_t seed,
                                               int instances = 200, int n = 12,
                                               double budget_fraction = 0.4,
                                               int cardinality_k = 4) {
  GreedyRatioReport rep;
  RngStream rng(seed, "verify/greedy");
  for (int it = 0; it < instances; ++it) {
    RandomInstance ri = random_instance(rng, n);
    std::vector<SetFunctionPtr> comps;
    std::vector<double> ws;
    for (int i = 0; i < 5; ++i) {
      comps.push_back(instantiate(random_shell_spec(rng), ri.features, ri.ground));
      ws.push_back(rng.real01());
    }
    Mixture mix(std::move(comps), std::move(ws));

    BudgetConstraint con{budget_fraction * ri.ground.total_cost(),
                         ri.ground.costs, 1.0};
    const auto lazy = greedy_knapsack(mix, con, {true, false});
    const auto eager = greedy_knapsack(mix, con, {false, false});
    if (lazy.selected != eager.selected) rep.lazy_eager_identical = false;
    const auto opt = brute_force(mix, con);
    if (opt.value + 1e-12 < lazy.value) rep.oracle_dominates = false;
    rep.knapsack.add(opt.value > 0.0 ? lazy.value / opt.value : 1.0);

    const auto card = greedy_cardinality(mix, cardinality_k);
    const auto card_opt =
        brute_force(mix, BudgetConstraint::cardinality(n, cardinality_k));
    if (card_opt.value + 1e-12 < card.value) rep.oracle_dominates = false;
    rep.cardinality.add(card_opt.value > 0.0 ? card.value / card_opt.value : 1.0);
  }
  return rep;
}

inline SuiteResult verify_greedy_ratios(std::uint64_t seed, int instances = 200,
                                        GreedyRatioReport* out = nullptr) {
  const GreedyRatioReport rep = measure_greedy_ratios(seed, instances);
  if (out) *out = rep;
  const double knap_bound = 1.0 - 1.0 / std::sqrt(std::exp(1.0));
  const double card_bound = 1.0 - 1.0 / std::exp(1.0);
  SuiteResult res;
  res.name = "greedy-ratios";
  res.pass = rep.knapsack.min >= knap_bound && rep.cardinality.min >= card_bound &&
             rep.lazy_eager_identical && rep.oracle_dominates;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "knapsack min/mean %.4f/%.4f (bound %.4f), cardinality "
                "min/mean %.4f/%.4f (bound %.4f), lazy==eager %s",
                rep.knapsack.min, rep.knapsack.mean, knap_bound,
                rep.cardinality.min, rep.cardinality.mean, card_bound,
                rep.lazy_eager_identical ? "yes" : "NO");
  res.details = buf;
  return res;
}

// ---------------------------------------------------------------------------
// Suite 4: loss properties. Complement recall is exactly modular (integer
// arithmetic), ROUGE-N recall is monotone submodular.
// ---------------------------------------------------------------------------

// Small random text corpus for the loss suites (no planted truth needed).
inline CorpusInstance random_text_instance(RngStream& rng, int sentences,
                                           int vocab, int words_min,
                                           int words_max, int references) {
  CorpusInstance inst;
  inst.instance_id = "toy";
  for (int s = 0; s < sentences; ++s) {
    std::string text;
    const int len = rng.uniform_int(words_min, words_max);
    for (int k = 0; k < len; ++k) {
      if (k) text += ' ';
      text += "t" + std::to_string(rng.index(vocab));
    }
    inst.sentences.push_back({text, std::nullopt});
  }
  for (int r = 0; r < references; ++r) {
    std::string text;
    const int len = rng.uniform_int(2, sentences);
    for (int k = 0; k < len; ++k) {
      if (k) text += ' ';
      text += inst.sentences[static_cast<std::size_t>(rng.index(sentences))].text;
    }
    inst.references.push_back(text);
  }
  inst.budget = 0.5 * [&] {
    double c = 0.0;
    for (const auto& s : inst.sentences) c += sentence_cost(s.text);
    return c;
  }();
  return inst;
}

inline SuiteResult verify_loss_properties(std::uint64_t seed, int corpora = 20,
                                          int pairs = 500,
                                          long long trials = 1000) {
  SuiteResult res{"loss-properties", true, ""};
  RngStream rng(seed, "verify/losses");
  FeatureRecipe recipe;  // only the n-gram table is needed
  for (int rep = 0; rep < corpora; ++rep) {
    const int n = rng.uniform_int(5, 10);
    CorpusInstance inst = random_text_instance(rng, n, 12, 3, 8, 1 + rng.index(3));
    const BuiltInstance built = build_features(inst, recipe);
    const NGramTable& t = *built.table;

    // Exact modularity: with a common denominator the identity reduces to
    // integer numerators, num(S) + num(T) == num(S|T) + num(S&T).
    for (int p = 0; p < pairs; ++p) {
      Subset s, u, both, either;
      for (int i = 0; i < n; ++i) {
        const bool in_s = rng.coin(), in_u = rng.coin();
        if (in_s) s.push_back(i);
        if (in_u) u.push_back(i);
        if (in_s && in_u) both.push_back(i);
        if (in_s || in_u) either.push_back(i);
      }
      const long long lhs = t.complement_numerator(s) + t.complement_numerator(u);
      const long long rhs =
          t.complement_numerator(either) + t.complement_numerator(both);
      if (lhs != rhs) {
        res.pass = false;
        res.details += "modularity identity failed on corpus " +
                       std::to_string(rep) + "; ";
      }
    }

    const RougeRecall rouge(built.table);
    const auto sub = check_submodular(rouge, trials, rng.u64());
    const auto mon = check_monotone(rouge, trials, rng.u64());
    const EllRouge ell(built.table);
    const auto esub = check_submodular(ell, trials, rng.u64());
    const auto emon = check_monotone(ell, trials, rng.u64());
    if (sub.violations + mon.violations + esub.violations + emon.violations > 0) {
      res.pass = false;
      res.details += "loss property violations on corpus " +
                     std::to_string(rep) + "; ";
    }
  }
  if (res.pass)
    res.details = "exact modularity on " + std::to_string(corpora) + "x" +
                  std::to_string(pairs) +
                  " pairs; recall suites 0 violations";
  return res;
}

// ---------------------------------------------------------------------------
// Suite 5: the truncation-mixture form of set cover agrees exactly with the
// direct union cardinality, exhaustively.
// ---------------------------------------------------------------------------

inline SuiteResult verify_setcover(std::uint64_t seed, int instances = 50,
                                   int ground = 8, int universe = 12) {
  SuiteResult res{"setcover-equivalence", true, ""};
  RngStream rng(seed, "verify/setcover");
  for (int it = 0; it < instances; ++it) {
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(ground));
    std::vector<std::uint32_t> masks(static_cast<std::size_t>(ground), 0);
    for (int i = 0; i < ground; ++i)
      for (int e = 0; e < universe; ++e)
        if (rng.coin()) {
          sets[static_cast<std::size_t>(i)].push_back(e);
          masks[static_cast<std::size_t>(i)] |= (1u << e);
        }
    const Mixture mix = setcover_from_truncations(sets, universe);
    for (std::uint32_t bmask = 0; bmask < (1u << ground); ++bmask) {
      Subset b;
      std::uint32_t unions = 0;
      for (int i = 0; i < ground; ++i)
        if ((bmask >> i) & 1u) {
          b.push_back(i);
          unions |= masks[static_cast<std::size_t>(i)];
        }
      const double val = mix.value_canonical(b);
      const double expect = static_cast<double>(__builtin_popcount(unions));
      if (val != expect) {
        res.pass = false;
        res.details = "mismatch on instance " + std::to_string(it);
        return res;
      }
    }
  }
  res.details = std::to_string(instances) + " instances x " +
                std::to_string(1 << ground) + " subsets, exact equality";
  return res;
}

// ---------------------------------------------------------------------------
// Suite 6: subgradient validity under exact (brute force) LAI. Checks the
// convexity inequality of the regularized hinge at every step against an
// independently enumerated hinge oracle.
// ---------------------------------------------------------------------------

namespace detail {

// Feasible-subset enumeration of (f_1..f_M, loss) value vectors, making
// hinge evaluation at arbitrary probe weights a max over dot products.
struct HingeTable {
  std::vector<std::vector<double>> rows;  // per feasible subset: M+1 values
  std::vector<double> gold;               // M shell values at the target

  static HingeTable build(const TrainInstance& inst) {
    const int n = inst.ground.size();
    if (n > 20) throw std::invalid_argument("hinge table limited to |V| <= 20");
    HingeTable t;
    const std::size_t m = inst.shells.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Subset s;
      double cost = 0.0;
      for (int v = 0; v < n; ++v)
        if ((mask >> v) & 1u) {
          s.push_back(v);
          cost += inst.constraint.costs[static_cast<std::size_t>(v)];
        }
      if (cost > inst.constraint.budget) continue;
      std::vector<double> row(m + 1);
      for (std::size_t i = 0; i < m; ++i)
        row[i] = inst.shells[i]->value_canonical(s);
      row[m] = inst.loss ? inst.loss->value_canonical(s) : 0.0;
      t.rows.push_back(std::move(row));
    }
    t.gold.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      t.gold[i] = inst.shells[i]->value_canonical(inst.target);
    return t;
  }

  double hinge(const std::vector<double>& w, double loss_weight) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
      double v = loss_weight * row.back();
      for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * row[i];
      best = std::max(best, v);
    }
    double gold_score = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) gold_score += w[i] * gold[i];
    return best - gold_score;
  }
};

}  // namespace detail

inline SuiteResult verify_subgradient(std::uint64_t seed, int steps = 50,
                                      int probes = 100, double lambda = 0.3) {
  SuiteResult res{"subgradient-validity", true, ""};
  RngStream rng(seed, "verify/subgradient");

  // Ten 8-sentence instances with planted references; 5 passes = 50 steps.
  SynthSpec spec;
  spec.instances = std::max(1, steps / 5);
  spec.sentences_per_instance = 8;
  spec.vocab_size = 20;
  spec.words_min = 3;
  spec.words_max = 6;
  spec.seed = rng.u64();
  spec.recipe.similarities = {{"s", "unigram_tfidf"}};
  spec.recipe.clusterings = {{"p", "s", 3, std::nullopt}};
  spec.recipe.rewards = {{"r", "query_independent", "s"}};
  spec.recipe.aux_costs = {{"c", "word_count"}};
  spec.recipe.tfidf_stopwords = false;
  spec.shells = {ShellSpec::fidelity(0.3, "s"),
                 ShellSpec::diversity(0.5, "p", "r"),
                 ShellSpec::clustered_facility("p", "r"),
                 ShellSpec::modular("r"),
                 ShellSpec::truncation(0.5, "c")};
  spec.weights = {1.0, 0.0, 0.0, 0.0, 0.0};
  const SynthResult synth = synthesize(spec);

  std::vector<TrainInstance> corpus;
  std::vector<detail::HingeTable> tables;
  for (const auto& ci : synth.corpus.instances) {
    corpus.push_back(compile_instance(build_features(ci, spec.recipe),
                                      spec.shells, LossKind::EllRouge));
    tables.push_back(detail::HingeTable::build(corpus.back()));
  }

  const std::size_t m = spec.shells.size();
  std::vector<double> w(m, 0.0);
  double worst_slack = 0.0;
  long long checked = 0;
  for (int t = 1; t <= steps; ++t) {
    const std::size_t idx = static_cast<std::size_t>((t - 1) % corpus.size());
    const TrainInstance& inst = corpus[idx];
    const detail::HingeTable& table = tables[idx];

    const LaiResult r = lai(w, inst, LaiSolver::BruteForce);
    const std::vector<double> g = subgradient(w, inst, r.y, lambda);

    const double f_w = table.hinge(w, 1.0) + 0.5 * lambda * dot(w, w);
    for (int p = 0; p < probes; ++p) {
      std::vector<double> probe(m);
      for (auto& x : probe) x = rng.uniform(-0.5, 1.5);
      const double f_probe =
          table.hinge(probe, 1.0) + 0.5 * lambda * dot(probe, probe);
      double lin = f_w;
      for (std::size_t i = 0; i < m; ++i) lin += g[i] * (probe[i] - w[i]);
      const double slack = lin - f_probe;  // must be <= tol
      worst_slack = std::max(worst_slack, slack);
      ++checked;
      if (slack > kPropertyTol) res.pass = false;
    }

    const double eta = 2.0 / (lambda * t);
    for (std::size_t i = 0; i < m; ++i) w[i] -= eta * g[i];
    w = project_nonneg(std::move(w));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%lld probe checks, worst inequality slack %.3e (tol %.0e)",
                checked, worst_slack, kPropertyTol);
  res.details = buf;
  return res;
}

}  // namespace submix
