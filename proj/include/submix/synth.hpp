#pragma once

#include <string>
#include <vector>

#include "submix/serialize.hpp"

namespace submix {

// Applies a shell mixture to one built instance: instantiate, then budgeted
// greedy under the instance budget. fill_budget defaults on here — summaries
// should consume the budget so the complement-recall loss compares like with
// like.
inline MaximizationResult predict(const std::vector<ShellSpec>& shells,
                                  const std::vector<double>& weights,
                                  const BuiltInstance& built,
                                  GreedyOptions opts = {true, true}) {
  std::vector<SetFunctionPtr> fns;
  fns.reserve(shells.size());
  for (const auto& s : shells)
    fns.push_back(instantiate(s, built.features, built.ground));
  Mixture mix(std::move(fns), weights);
  BudgetConstraint con{built.budget, built.ground.costs, 1.0};
  return greedy_knapsack(mix, con, opts);
}

struct SynthResult {
  Corpus corpus;
  Model planted;
};

// Generates a fully seeded corpus with planted ground truth: random
// sentences over a synthetic vocabulary, features per the recipe, and
// references equal to the planted mixture's greedy summaries.
inline SynthResult synthesize(const SynthSpec& spec) {
  spec.validate();

  std::vector<std::string> vocab;
  vocab.reserve(static_cast<std::size_t>(spec.vocab_size));
  for (int i = 0; i < spec.vocab_size; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%03d", i);
    vocab.emplace_back(buf);
  }

  const bool wants_query = [&] {
    for (const auto& ch : spec.recipe.rewards)
      if (ch.kind == "query_dependent") return true;
    return false;
  }();

  SynthResult out;
  out.planted.shells = spec.shells;
  out.planted.weights = spec.weights;

  for (int i = 0; i < spec.instances; ++i) {
    CorpusInstance inst;
    inst.instance_id = "synth-" + std::to_string(i);
    RngStream rng(spec.seed, "synth/" + inst.instance_id);

    for (int s = 0; s < spec.sentences_per_instance; ++s) {
      const int len = rng.uniform_int(spec.words_min, spec.words_max);
      std::string text;
      for (int k = 0; k < len; ++k) {
        if (k) text += ' ';
        text += vocab[static_cast<std::size_t>(rng.index(spec.vocab_size))];
      }
      inst.sentences.push_back({text, std::nullopt});
    }

    if (wants_query) {
      std::string q;
      for (int k = 0; k < spec.query_terms; ++k) {
        if (k) q += ' ';
        q += vocab[static_cast<std::size_t>(rng.index(spec.vocab_size))];
      }
      inst.query = q;
    }

    double total = 0.0, min_cost = 0.0;
    for (std::size_t s = 0; s < inst.sentences.size(); ++s) {
      const double c = sentence_cost(inst.sentences[s].text);
      total += c;
      min_cost = (s == 0) ? c : std::min(min_cost, c);
    }
    inst.budget = spec.budget_fraction * total;
    if (inst.budget < min_cost)
      throw std::invalid_argument(
          "budget fraction leaves instance '" + inst.instance_id +
          "' unable to afford any sentence");

    const BuiltInstance built = build_features(inst, spec.recipe);
    const MaximizationResult ref = predict(spec.shells, spec.weights, built);
    inst.target = ref.selected;
    std::string ref_text;
    for (int v : ref.selected) {
      if (!ref_text.empty()) ref_text += ' ';
      ref_text += inst.sentences[static_cast<std::size_t>(v)].text;
    }
    inst.references.push_back(ref_text);

    out.corpus.instances.push_back(std::move(inst));
  }
  return out;
}

}  // namespace submix
