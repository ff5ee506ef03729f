#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "submix/maximize.hpp"
#include "submix/textproc.hpp"

namespace submix {

// ---------------------------------------------------------------------------
// Corpus: one summarization problem per instance, pre-segmented sentences.
// ---------------------------------------------------------------------------

struct CorpusSentence {
  std::string text;
  std::optional<double> cost_override;
};

struct CorpusInstance {
  std::string instance_id;
  std::vector<CorpusSentence> sentences;
  std::optional<std::string> query;
  std::vector<std::string> references;
  double budget = 0.0;
  std::optional<Subset> target;  // gold extractive summary indices
  // Externally precomputed similarity channels (e.g. latent-semantic
  // matrices produced outside the toolkit), keyed by channel id.
  std::map<std::string, SimilarityMatrix> external_similarities;
};

struct Corpus {
  std::vector<CorpusInstance> instances;
};

// ---------------------------------------------------------------------------
// Feature recipe: names every channel the model's shells may reference and
// how to compute it.
// ---------------------------------------------------------------------------

struct SimilarityChannelSpec {
  std::string id;
  std::string kind;  // unigram_tfidf | bigram_tfidf | external
};

struct ClusteringChannelSpec {
  std::string id;
  std::string similarity;  // source tf-idf channel for the vectors
  std::optional<int> count;
  std::optional<double> fraction;  // K = max(1, ceil(fraction * |V|))
};

struct RewardChannelSpec {
  std::string id;
  std::string kind;        // query_independent | query_dependent | random |
                           // random_bimodal
  std::string similarity;  // for query_independent
  double lo = 0.0;         // range of the random kinds
  double hi = 1.0;
};

struct AuxCostChannelSpec {
  std::string id;
  std::string kind;  // word_count | unit | random
};

struct FeatureRecipe {
  std::vector<SimilarityChannelSpec> similarities;
  std::vector<ClusteringChannelSpec> clusterings;
  std::vector<RewardChannelSpec> rewards;
  std::vector<AuxCostChannelSpec> aux_costs;
  bool lowercase = true;
  bool tfidf_stopwords = true;  // never applied to loss n-gram tables
  int ngram_order = 2;
  std::uint64_t seed = 0;
};

// A corpus instance with all channels materialized.
struct BuiltInstance {
  std::string id;
  GroundSet ground;
  InstanceFeatures features;
  std::shared_ptr<const NGramTable> table;  // null without references
  double budget = 0.0;
  std::optional<Subset> target;
  bool degenerate = false;  // empty ground set
};

// ---------------------------------------------------------------------------
// build_features: corpus instance x recipe -> ground set, channels, loss
// table. Deterministic under the recipe seed; clustering streams are keyed
// per channel and instance so corpus order does not matter.
// ---------------------------------------------------------------------------

inline BuiltInstance build_features(const CorpusInstance& inst,
                                    const FeatureRecipe& recipe) {
  BuiltInstance out;
  out.id = inst.instance_id;
  out.budget = inst.budget;
  out.target = inst.target;

  const int n = static_cast<int>(inst.sentences.size());
  out.degenerate = (n == 0);
  if (out.degenerate) {
    // Every channel materializes empty; nothing to validate against.
    for (const auto& ch : recipe.similarities)
      out.features.add_similarity(ch.id, SimilarityMatrix(0));
    for (const auto& ch : recipe.clusterings)
      out.features.add_partition(ch.id, Partition{}, 0);
    for (const auto& ch : recipe.rewards) out.features.add_rewards(ch.id, {});
    for (const auto& ch : recipe.aux_costs) out.features.add_aux_costs(ch.id, {});
    return out;
  }

  std::vector<double> costs(static_cast<std::size_t>(n), 0.0);
  std::vector<std::vector<std::string>> loss_tokens(static_cast<std::size_t>(n));
  std::vector<std::vector<std::string>> tfidf_tokens(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& s = inst.sentences[static_cast<std::size_t>(i)];
    loss_tokens[static_cast<std::size_t>(i)] =
        tokenize(s.text, {recipe.lowercase, false});
    tfidf_tokens[static_cast<std::size_t>(i)] =
        tokenize(s.text, {recipe.lowercase, recipe.tfidf_stopwords});
    costs[static_cast<std::size_t>(i)] =
        s.cost_override.value_or(sentence_cost(s.text));
  }
  out.ground = GroundSet(std::move(costs));

  // Similarity channels (and their vectors, reused by clusterings).
  std::map<std::string, std::vector<SparseVec>> channel_vecs;
  for (const auto& ch : recipe.similarities) {
    if (ch.kind == "unigram_tfidf" || ch.kind == "bigram_tfidf") {
      const int order = ch.kind == "unigram_tfidf" ? 1 : 2;
      auto vecs = tfidf_vectors(tfidf_tokens, order);
      out.features.add_similarity(ch.id, cosine_matrix(vecs));
      channel_vecs[ch.id] = std::move(vecs);
    } else if (ch.kind == "external") {
      auto it = inst.external_similarities.find(ch.id);
      if (it == inst.external_similarities.end())
        throw ConfigError("instance '" + inst.instance_id +
                          "' does not supply external similarity channel '" +
                          ch.id + "'");
      if (it->second.n != n)
        throw DataError("external similarity channel '" + ch.id +
                        "' has wrong size on instance '" + inst.instance_id + "'");
      out.features.add_similarity(ch.id, it->second);
    } else {
      throw ConfigError("unknown similarity channel kind '" + ch.kind + "'");
    }
  }

  for (const auto& ch : recipe.clusterings) {
    auto it = channel_vecs.find(ch.similarity);
    if (it == channel_vecs.end())
      throw ConfigError("clustering channel '" + ch.id +
                        "' references tf-idf channel '" + ch.similarity +
                        "' with no vectors");
    const int k = resolve_cluster_count(ch.count, ch.fraction, n);
    RngStream rng(recipe.seed, "cluster/" + ch.id + "/" + inst.instance_id);
    out.features.add_partition(ch.id, cluster_kmeans(it->second, k, rng), n);
  }

  for (const auto& ch : recipe.rewards) {
    if (ch.kind == "query_independent") {
      auto it = out.features.similarities.find(ch.similarity);
      if (it == out.features.similarities.end())
        throw ConfigError("reward channel '" + ch.id +
                          "' references unknown similarity '" + ch.similarity + "'");
      out.features.add_rewards(ch.id, reward_query_independent(it->second));
    } else if (ch.kind == "query_dependent") {
      if (!inst.query.has_value())
        throw ConfigError("reward channel '" + ch.id +
                          "' needs a query but instance '" + inst.instance_id +
                          "' has none");
      out.features.add_rewards(ch.id,
                               reward_query_dependent(loss_tokens, *inst.query));
    } else if (ch.kind == "random") {
      // Synthetic-experiment device: a seeded uniform channel in [lo, hi].
      RngStream rng(recipe.seed, "reward/" + ch.id + "/" + inst.instance_id);
      std::vector<double> r(static_cast<std::size_t>(n));
      for (auto& x : r) x = rng.uniform(ch.lo, ch.hi);
      out.features.add_rewards(ch.id, std::move(r));
    } else if (ch.kind == "random_bimodal") {
      // Planted-truth device: a high/low reward split with wide margins.
      RngStream rng(recipe.seed, "reward/" + ch.id + "/" + inst.instance_id);
      std::vector<double> r(static_cast<std::size_t>(n));
      for (auto& x : r) x = rng.real01() < 0.35 ? ch.hi : ch.lo;
      out.features.add_rewards(ch.id, std::move(r));
    } else if (ch.kind == "random_grid") {
      // Planted-truth device: a random permutation of n evenly spaced
      // values in [lo, hi]; distinct by construction, so the induced
      // element ranking has a margin floor of (hi-lo)/(n-1).
      RngStream rng(recipe.seed, "reward/" + ch.id + "/" + inst.instance_id);
      std::vector<int> order(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      rng.shuffle(order);
      std::vector<double> r(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        r[static_cast<std::size_t>(i)] =
            n > 1 ? ch.lo + (ch.hi - ch.lo) * order[static_cast<std::size_t>(i)] /
                               (n - 1)
                  : ch.hi;
      out.features.add_rewards(ch.id, std::move(r));
    } else {
      throw ConfigError("unknown reward channel kind '" + ch.kind + "'");
    }
  }

  for (const auto& ch : recipe.aux_costs) {
    if (ch.kind == "word_count") {
      out.features.add_aux_costs(ch.id, out.ground.costs);
    } else if (ch.kind == "unit") {
      out.features.add_aux_costs(
          ch.id, std::vector<double>(static_cast<std::size_t>(n), 1.0));
    } else if (ch.kind == "random") {
      RngStream rng(recipe.seed, "auxcost/" + ch.id + "/" + inst.instance_id);
      std::vector<double> c(static_cast<std::size_t>(n));
      for (auto& x : c) x = rng.uniform(0.1, 1.0);
      out.features.add_aux_costs(ch.id, std::move(c));
    } else {
      throw ConfigError("unknown aux cost channel kind '" + ch.kind + "'");
    }
  }

  if (!inst.references.empty()) {
    std::vector<std::vector<std::string>> ref_tokens;
    ref_tokens.reserve(inst.references.size());
    for (const auto& r : inst.references)
      ref_tokens.push_back(tokenize(r, {recipe.lowercase, false}));
    NGramTable::BuildOptions bo;
    bo.order = recipe.ngram_order;
    out.table = std::make_shared<NGramTable>(
        NGramTable::build(loss_tokens, ref_tokens, bo));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stock ensembles mirroring the two experiment shapes: a pure fidelity bank
// spread over similarity channels and saturation thresholds, and the mixed
// diversity / clustered-facility / fidelity bank for query-focused runs.
// ---------------------------------------------------------------------------

struct Ensemble {
  FeatureRecipe recipe;
  std::vector<ShellSpec> shells;
};

// 3 similarity channels (unigram tf-idf, bigram tf-idf, one externally
// supplied matrix) x 5 saturation thresholds = 15 fidelity components.
inline Ensemble make_fidelity_ensemble() {
  Ensemble e;
  e.recipe.similarities = {{"tfidf1", "unigram_tfidf"},
                           {"tfidf2", "bigram_tfidf"},
                           {"ext", "external"}};
  for (const char* sim : {"tfidf1", "tfidf2", "ext"})
    for (double alpha : {0.01, 0.02, 0.03, 0.04, 0.05})
      e.shells.push_back(ShellSpec::fidelity(alpha, sim));
  return e;
}

// 3 clusterings (K = 0.1|V|, 0.2|V|, 0.3|V|) x 2 rewards -> 6 clustered
// facility components; x 3 curvatures -> 18 diversity components; plus one
// fidelity component = 25 in total.
inline Ensemble make_query_focus_ensemble() {
  Ensemble e;
  e.recipe.similarities = {{"tfidf1", "unigram_tfidf"}};
  e.recipe.clusterings = {{"c1", "tfidf1", std::nullopt, 0.1},
                          {"c2", "tfidf1", std::nullopt, 0.2},
                          {"c3", "tfidf1", std::nullopt, 0.3}};
  e.recipe.rewards = {{"rqi", "query_independent", "tfidf1"},
                      {"rqd", "query_dependent", ""}};
  for (const char* c : {"c1", "c2", "c3"})
    for (const char* r : {"rqi", "rqd"})
      e.shells.push_back(ShellSpec::clustered_facility(c, r));
  for (double a : {0.5, 0.6, 0.7})
    for (const char* c : {"c1", "c2", "c3"})
      for (const char* r : {"rqi", "rqd"})
        e.shells.push_back(ShellSpec::diversity(a, c, r));
  e.shells.push_back(ShellSpec::fidelity(0.1, "tfidf1"));
  return e;
}

}  // namespace submix
