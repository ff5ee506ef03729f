#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "submix/losses.hpp"
#include "submix/rng.hpp"
#include "submix/shells.hpp"

namespace submix {

// ---------------------------------------------------------------------------
// Tokenization
// ---------------------------------------------------------------------------

// Fixed built-in English stopword list, versioned with the code. Applied to
// query rewards always, to TF-IDF channels by default, and never to loss
// n-gram tables.
inline const std::set<std::string>& stopword_list() {
  static const std::set<std::string> words = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",
      "am",      "an",      "and",    "any",     "are",    "as",      "at",
      "be",      "because", "been",   "before",  "being",  "below",   "between",
      "both",    "but",     "by",     "can",     "cannot", "could",   "did",
      "do",      "does",    "doing",  "down",    "during", "each",    "few",
      "for",     "from",    "further","had",     "has",    "have",    "having",
      "he",      "her",     "here",   "hers",    "herself","him",     "himself",
      "his",     "how",     "i",      "if",      "in",     "into",    "is",
      "it",      "its",     "itself", "just",    "me",     "more",    "most",
      "my",      "myself",  "no",     "nor",     "not",    "now",     "of",
      "off",     "on",      "once",   "only",    "or",     "other",   "our",
      "ours",    "ourselves","out",   "over",    "own",    "same",    "she",
      "should",  "so",      "some",   "such",    "than",   "that",    "the",
      "their",   "theirs",  "them",   "themselves","then", "there",   "these",
      "they",    "this",    "those",  "through", "to",     "too",     "under",
      "until",   "up",      "very",   "was",     "we",     "were",    "what",
      "when",    "where",   "which",  "while",   "who",    "whom",    "why",
      "will",    "with",    "would",  "you",     "your",   "yours",   "yourself",
      "yourselves", "also", "been",   "but",     "came",   "come",    "get",
      "got",     "goes",    "gone",   "made",    "make",   "may",     "might",
      "much",    "must",    "never",  "one",     "put",    "said",    "say",
      "says",    "see",     "seen",   "shall",   "take",   "taken",   "upon",
      "us",      "went",    "yet"};
  return words;
}

struct TokenizeFlags {
  bool lowercase = true;
  bool remove_stopwords = false;
};

// Splits on non-alphanumeric boundaries. Deterministic; empty text yields an
// empty sequence.
inline std::vector<std::string> tokenize(std::string_view text,
                                         TokenizeFlags flags = {}) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (!flags.remove_stopwords || stopword_list().count(cur) == 0)
      out.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(flags.lowercase ? static_cast<char>(std::tolower(c))
                                    : ch);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

// Word count after tokenization without stopword removal.
inline double sentence_cost(std::string_view text) {
  return static_cast<double>(tokenize(text, {true, false}).size());
}

// ---------------------------------------------------------------------------
// TF-IDF vectors and cosine similarity
// ---------------------------------------------------------------------------

// Sparse vector sorted by term id.
using SparseVec = std::vector<std::pair<int, double>>;

inline double sparse_dot(const SparseVec& a, const SparseVec& b) {
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (a[i].first > b[j].first) ++j;
    else acc += a[i++].second * b[j++].second;
  }
  return acc;
}

inline double sparse_norm(const SparseVec& a) {
  double acc = 0.0;
  for (auto [t, w] : a) acc += w * w;
  return std::sqrt(acc);
}

// TF-IDF vectors per sentence for the given gram order (1 or 2).
// TF = raw counts; IDF = ln((1+D)/(1+d_e)) + 1 with D the sentence count.
inline std::vector<SparseVec> tfidf_vectors(
    const std::vector<std::vector<std::string>>& sentence_tokens,
    int gram_order) {
  if (gram_order != 1 && gram_order != 2)
    throw std::invalid_argument("tf-idf gram order must be 1 or 2");
  const int d = static_cast<int>(sentence_tokens.size());

  std::map<std::string, int> term_ids;
  auto term_id = [&](const std::string& t) {
    auto [it, fresh] = term_ids.emplace(t, static_cast<int>(term_ids.size()));
    return it->second;
  };

  std::vector<std::map<int, int>> tf(sentence_tokens.size());
  for (std::size_t s = 0; s < sentence_tokens.size(); ++s) {
    const auto& toks = sentence_tokens[s];
    for (int p = 0; p + gram_order <= static_cast<int>(toks.size()); ++p) {
      std::string term = toks[static_cast<std::size_t>(p)];
      if (gram_order == 2) term += ' ' + toks[static_cast<std::size_t>(p) + 1];
      ++tf[s][term_id(term)];
    }
  }

  std::vector<int> df(term_ids.size(), 0);
  for (const auto& counts : tf)
    for (auto [t, c] : counts) ++df[static_cast<std::size_t>(t)];

  std::vector<SparseVec> vecs(sentence_tokens.size());
  for (std::size_t s = 0; s < tf.size(); ++s) {
    for (auto [t, c] : tf[s]) {
      const double idf =
          std::log((1.0 + d) / (1.0 + df[static_cast<std::size_t>(t)])) + 1.0;
      vecs[s].emplace_back(t, c * idf);
    }
  }
  return vecs;
}

// delta_ij = cosine of the vectors, clamped into [0,1]; zero vectors are 0
// against everything and the diagonal of a nonzero row is exactly 1.
inline SimilarityMatrix cosine_matrix(const std::vector<SparseVec>& vecs) {
  const int n = static_cast<int>(vecs.size());
  SimilarityMatrix m(n);
  std::vector<double> norms(vecs.size());
  for (std::size_t i = 0; i < vecs.size(); ++i) norms[i] = sparse_norm(vecs[i]);
  for (int i = 0; i < n; ++i) {
    if (norms[static_cast<std::size_t>(i)] > 0.0) m.at(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double ni = norms[static_cast<std::size_t>(i)];
      const double nj = norms[static_cast<std::size_t>(j)];
      double c = 0.0;
      if (ni > 0.0 && nj > 0.0)
        c = sparse_dot(vecs[static_cast<std::size_t>(i)],
                       vecs[static_cast<std::size_t>(j)]) /
            (ni * nj);
      c = std::min(1.0, std::max(0.0, c));
      m.at(i, j) = c;
      m.at(j, i) = c;
    }
  }
  return m;
}

inline SimilarityMatrix tfidf_cosine_matrix(
    const std::vector<std::vector<std::string>>& sentence_tokens,
    int gram_order) {
  return cosine_matrix(tfidf_vectors(sentence_tokens, gram_order));
}

// ---------------------------------------------------------------------------
// Clustering: spherical k-means with farthest-first seeding
// ---------------------------------------------------------------------------

inline int resolve_cluster_count(std::optional<int> count,
                                 std::optional<double> fraction, int n) {
  int k;
  if (count.has_value()) {
    k = *count;
  } else if (fraction.has_value()) {
    if (!(*fraction > 0.0))
      throw std::invalid_argument("cluster fraction must be > 0");
    k = std::max(1, static_cast<int>(std::ceil(*fraction * n)));
  } else {
    throw ConfigError("clustering channel needs a cluster count or fraction");
  }
  if (k < 1) throw std::invalid_argument("cluster count must be >= 1");
  return std::min(k, std::max(n, 1));
}

// k-means over unit-normalized vectors with cosine dissimilarity 1 - cos.
// Farthest-first seeded initialization, at most 50 iterations, empty
// clusters re-seeded with the farthest point, all ties to the lowest index.
inline Partition cluster_kmeans(const std::vector<SparseVec>& vecs, int k,
                                RngStream rng) {
  const int n = static_cast<int>(vecs.size());
  Partition part;
  if (n == 0) return part;
  k = std::min(std::max(k, 1), n);

  // Dense unit vectors (desk-scale vocabularies).
  int dim = 0;
  for (const auto& v : vecs)
    for (auto [t, w] : v) dim = std::max(dim, t + 1);
  std::vector<std::vector<double>> pts(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  for (int i = 0; i < n; ++i) {
    double norm = sparse_norm(vecs[static_cast<std::size_t>(i)]);
    if (norm > 0.0)
      for (auto [t, w] : vecs[static_cast<std::size_t>(i)])
        pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = w / norm;
  }
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };
  auto unit = [&](std::vector<double> v) {
    double norm = std::sqrt(dot(v, v));
    if (norm > 0.0)
      for (double& x : v) x /= norm;
    return v;
  };

  // Farthest-first seeding.
  std::vector<std::vector<double>> centers;
  std::vector<double> nearest(static_cast<std::size_t>(n), 2.0);
  int first = rng.index(n);
  centers.push_back(pts[static_cast<std::size_t>(first)]);
  for (int i = 0; i < n; ++i)
    nearest[static_cast<std::size_t>(i)] =
        1.0 - dot(pts[static_cast<std::size_t>(i)], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    int far = 0;
    for (int i = 1; i < n; ++i)
      if (nearest[static_cast<std::size_t>(i)] > nearest[static_cast<std::size_t>(far)])
        far = i;
    centers.push_back(pts[static_cast<std::size_t>(far)]);
    for (int i = 0; i < n; ++i)
      nearest[static_cast<std::size_t>(i)] =
          std::min(nearest[static_cast<std::size_t>(i)],
                   1.0 - dot(pts[static_cast<std::size_t>(i)], centers.back()));
  }

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 50; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_sim = dot(pts[static_cast<std::size_t>(i)], centers[0]);
      for (int c = 1; c < k; ++c) {
        const double sim = dot(pts[static_cast<std::size_t>(i)],
                               centers[static_cast<std::size_t>(c)]);
        if (sim > best_sim) {
          best = c;
          best_sim = sim;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    // Recompute centroids; re-seed empty clusters with the farthest point.
    std::vector<std::vector<double>> sums(
        static_cast<std::size_t>(k),
        std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      ++sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
      for (int t = 0; t < dim; ++t)
        sums[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]
            [static_cast<std::size_t>(t)] +=
            pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
    }
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) {
        centers[static_cast<std::size_t>(c)] =
            unit(sums[static_cast<std::size_t>(c)]);
      } else {
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d =
              1.0 - dot(pts[static_cast<std::size_t>(i)],
                        centers[static_cast<std::size_t>(
                            assign[static_cast<std::size_t>(i)])]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers[static_cast<std::size_t>(c)] = pts[static_cast<std::size_t>(far)];
        assign[static_cast<std::size_t>(far)] = c;
        changed = true;
      }
    }
    if (!changed) break;
  }

  part.clusters.assign(static_cast<std::size_t>(k), {});
  for (int i = 0; i < n; ++i)
    part.clusters[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]
        .push_back(i);
  return part;
}

// ---------------------------------------------------------------------------
// Singleton rewards
// ---------------------------------------------------------------------------

// r_i = sum_{j != i} delta_ij, normalized by the max into [0,1].
inline std::vector<double> reward_query_independent(const SimilarityMatrix& sim) {
  const int n = sim.n;
  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) acc += sim.at(i, j);
    r[static_cast<std::size_t>(i)] = acc;
    best = std::max(best, acc);
  }
  if (best > 0.0)
    for (double& x : r) x /= best;
  return r;
}

// r_i = count of distinct query terms (unigrams and bigrams of the
// stopword-filtered query) occurring in sentence i, normalized by the max.
// No IDF weighting.
inline std::vector<double> reward_query_dependent(
    const std::vector<std::vector<std::string>>& sentence_tokens,
    const std::string& query) {
  auto q_toks = tokenize(query, {true, true});
  std::set<std::string> terms;
  for (std::size_t i = 0; i < q_toks.size(); ++i) {
    terms.insert(q_toks[i]);
    if (i + 1 < q_toks.size()) terms.insert(q_toks[i] + ' ' + q_toks[i + 1]);
  }
  std::vector<double> r(sentence_tokens.size(), 0.0);
  double best = 0.0;
  for (std::size_t s = 0; s < sentence_tokens.size(); ++s) {
    const auto& toks = sentence_tokens[s];
    std::set<std::string> grams;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      grams.insert(toks[i]);
      if (i + 1 < toks.size()) grams.insert(toks[i] + ' ' + toks[i + 1]);
    }
    int hits = 0;
    for (const auto& t : terms)
      if (grams.count(t)) ++hits;
    r[s] = hits;
    best = std::max(best, r[s]);
  }
  if (best > 0.0)
    for (double& x : r) x /= best;
  return r;
}

}  // namespace submix
