#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "submix/set_function.hpp"

namespace submix {

// Per-instance n-gram bookkeeping for the recall-style metrics. Counts are
// integers and sentence-additive; ratios are formed once at the end, so the
// equality-sensitive identities (modularity of the complement-recall loss)
// can be checked in exact integer arithmetic.
class NGramTable {
 public:
  struct BuildOptions {
    int order = 2;  // n of ROUGE-N
    // Optional nonnegative weight per complement n-gram, keyed by the
    // n-gram's space-joined token string; null = all ones.
    const std::map<std::string, double>* omega = nullptr;
  };

  // sentences/references: token sequences (tokenization is the caller's,
  // normally textproc's with stopwords kept).
  static NGramTable build(const std::vector<std::vector<std::string>>& sentences,
                          const std::vector<std::vector<std::string>>& references) {
    return build(sentences, references, BuildOptions{});
  }

  static NGramTable build(const std::vector<std::vector<std::string>>& sentences,
                          const std::vector<std::vector<std::string>>& references,
                          const BuildOptions& opts) {
    if (opts.order < 1) throw std::invalid_argument("n-gram order must be >= 1");
    if (references.empty())
      throw DataError("n-gram table needs at least one reference summary");

    NGramTable t;
    t.order_ = opts.order;
    t.num_sentences_ = static_cast<int>(sentences.size());
    t.num_references_ = static_cast<int>(references.size());

    std::map<std::vector<std::string>, int> ids;
    auto intern = [&](const std::vector<std::string>& toks, int pos) {
      std::vector<std::string> key(toks.begin() + pos,
                                   toks.begin() + pos + opts.order);
      auto [it, fresh] = ids.emplace(std::move(key), static_cast<int>(ids.size()));
      return it->second;
    };

    std::vector<std::map<int, int>> ref_counts(references.size());
    for (std::size_t i = 0; i < references.size(); ++i)
      for (int p = 0; p + opts.order <= static_cast<int>(references[i].size()); ++p)
        ++ref_counts[i][intern(references[i], p)];

    std::vector<std::map<int, int>> sent_counts(sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s)
      for (int p = 0; p + opts.order <= static_cast<int>(sentences[s].size()); ++p)
        ++sent_counts[s][intern(sentences[s], p)];

    // Universe fixed from here on.
    std::vector<char> in_any_ref(ids.size(), 0);
    long long rouge_den = 0;
    for (const auto& rc : ref_counts)
      for (auto [e, cnt] : rc) {
        in_any_ref[static_cast<std::size_t>(e)] = 1;
        rouge_den += cnt;
      }
    if (rouge_den == 0)
      throw DataError("references contain no n-grams of order " +
                      std::to_string(opts.order));
    t.rouge_denominator_ = rouge_den;

    // Caps per reference n-gram: the list of r_{e,i} over references
    // containing e, for sum_i min(c_e(S), r_{e,i}).
    std::map<int, std::vector<int>> caps;
    for (const auto& rc : ref_counts)
      for (auto [e, cnt] : rc) caps[e].push_back(cnt);
    std::map<int, int> ref_slot;
    for (auto& [e, v] : caps) {
      ref_slot[e] = static_cast<int>(t.ref_caps_.size());
      t.ref_caps_.push_back(v);
    }

    std::vector<double> omega_by_id(ids.size(), 1.0);
    if (opts.omega != nullptr) {
      for (const auto& [key, id] : ids) {
        std::string joined;
        for (std::size_t i = 0; i < key.size(); ++i) {
          if (i) joined += ' ';
          joined += key[i];
        }
        auto it = opts.omega->find(joined);
        if (it != opts.omega->end()) {
          if (!(it->second >= 0.0))
            throw std::invalid_argument("omega weight must be nonnegative");
          omega_by_id[static_cast<std::size_t>(id)] = it->second;
        }
      }
    }

    // Per-sentence rows: counts restricted to reference n-grams, plus the
    // complement totals (integer count and omega-weighted mass).
    t.rows_.resize(sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      auto& row = t.rows_[s];
      for (auto [e, cnt] : sent_counts[s]) {
        row.total_ngrams += cnt;
        if (in_any_ref[static_cast<std::size_t>(e)]) {
          row.ref_counts.emplace_back(ref_slot.at(e), cnt);
        } else {
          row.comp_count += cnt;
          row.comp_mass += omega_by_id[static_cast<std::size_t>(e)] * cnt;
        }
      }
    }

    // Complement denominator sum_{e in Rbar} omega_e r_e with r_e = c_e(V);
    // sentence-additive, so it is the sum of the rows.
    for (const auto& row : t.rows_) {
      t.comp_denominator_count_ += row.comp_count;
      t.comp_denominator_mass_ += row.comp_mass;
    }
    t.all_unit_omega_ = (opts.omega == nullptr);
    return t;
  }

  int order() const { return order_; }
  int num_sentences() const { return num_sentences_; }
  int num_references() const { return num_references_; }
  bool complement_degenerate() const { return comp_denominator_mass_ <= 0.0; }
  bool unit_omega() const { return all_unit_omega_; }
  long long rouge_denominator() const { return rouge_denominator_; }
  long long complement_denominator() const { return comp_denominator_count_; }

  // ROUGE-N numerator sum_i sum_{e in R_i} min(c_e(S), r_{e,i}) as an exact
  // integer; the denominator is rouge_denominator().
  long long rouge_numerator(const Subset& s) const {
    std::vector<long long> c(ref_caps_.size(), 0);
    for (int v : s)
      for (auto [slot, cnt] : rows_[static_cast<std::size_t>(v)].ref_counts)
        c[static_cast<std::size_t>(slot)] += cnt;
    long long num = 0;
    for (std::size_t slot = 0; slot < ref_caps_.size(); ++slot)
      for (int cap : ref_caps_[slot])
        num += std::min(c[slot], static_cast<long long>(cap));
    return num;
  }

  double rouge_recall(const Subset& s) const {
    return static_cast<double>(rouge_numerator(s)) /
           static_cast<double>(rouge_denominator_);
  }

  // Complement-recall numerator as an exact integer; valid only with unit
  // omega weights (the default).
  long long complement_numerator(const Subset& s) const {
    if (!all_unit_omega_)
      throw std::logic_error("integer complement counts need unit omega");
    long long num = 0;
    for (int v : s) num += rows_[static_cast<std::size_t>(v)].comp_count;
    return num;
  }

  double complement_recall(const Subset& s) const {
    if (complement_degenerate()) return 0.0;
    double num = 0.0;
    for (int v : s) num += rows_[static_cast<std::size_t>(v)].comp_mass;
    return num / comp_denominator_mass_;
  }

  double sentence_complement_mass(int v) const {
    return rows_[static_cast<std::size_t>(v)].comp_mass;
  }
  double complement_mass_denominator() const { return comp_denominator_mass_; }
  long long total_ngrams(const Subset& s) const {
    long long n = 0;
    for (int v : s) n += rows_[static_cast<std::size_t>(v)].total_ngrams;
    return n;
  }

 private:
  struct SentenceRow {
    std::vector<std::pair<int, int>> ref_counts;  // (reference-ngram slot, count)
    long long comp_count = 0;   // integer complement n-grams in this sentence
    double comp_mass = 0.0;     // omega-weighted complement mass
    long long total_ngrams = 0;
  };

  int order_ = 2;
  int num_sentences_ = 0;
  int num_references_ = 0;
  long long rouge_denominator_ = 0;
  long long comp_denominator_count_ = 0;
  double comp_denominator_mass_ = 0.0;
  bool all_unit_omega_ = true;
  std::vector<std::vector<int>> ref_caps_;  // per slot: r_{e,i} list
  std::vector<SentenceRow> rows_;
};

// ROUGE-N recall as a set function over sentences: monotone submodular.
class RougeRecall : public SetFunction {
 public:
  explicit RougeRecall(std::shared_ptr<const NGramTable> table)
      : SetFunction(table->num_sentences(), true, true, std::make_pair(0.0, 1.0)),
        table_(std::move(table)) {}

 protected:
  double eval_sorted(const Subset& s) const override {
    return table_->rouge_recall(s);
  }

 private:
  std::shared_ptr<const NGramTable> table_;
};

// Complement recall: the fraction of weighted n-gram mass outside all
// references that the candidate covers. Modular and monotone; zero for
// every reference and for the empty summary.
class EllRouge : public SetFunction {
 public:
  explicit EllRouge(std::shared_ptr<const NGramTable> table)
      : SetFunction(table->num_sentences(), true, true, std::make_pair(0.0, 1.0)),
        table_(std::move(table)) {}

  double gain(const Subset& s, int v) const override {
    if (v < 0 || v >= ground_size())
      throw std::out_of_range("gain element outside ground set");
    if (subset_contains(s, v))
      throw std::invalid_argument("gain element already in subset");
    if (table_->complement_degenerate()) return 0.0;
    return table_->sentence_complement_mass(v) /
           table_->complement_mass_denominator();
  }

  bool degenerate() const { return table_->complement_degenerate(); }

 protected:
  double eval_sorted(const Subset& s) const override {
    return table_->complement_recall(s);
  }

 private:
  std::shared_ptr<const NGramTable> table_;
};

// 1 - ROUGE-N: supermodular, kept as a guarantee-free baseline. Inference on
// objectives containing it is tagged accordingly.
class OneMinusRouge : public SetFunction {
 public:
  explicit OneMinusRouge(std::shared_ptr<const NGramTable> table)
      : SetFunction(table->num_sentences(), false, false,
                    std::make_pair(0.0, 1.0)),
        table_(std::move(table)) {}

 protected:
  double eval_sorted(const Subset& s) const override {
    return 1.0 - table_->rouge_recall(s);
  }

 private:
  std::shared_ptr<const NGramTable> table_;
};

inline double rouge_n(const Subset& s, const NGramTable& t) {
  return t.rouge_recall(s);
}
inline double ell_rouge(const Subset& s, const NGramTable& t) {
  return t.complement_recall(s);
}
inline double one_minus_rouge(const Subset& s, const NGramTable& t) {
  return 1.0 - t.rouge_recall(s);
}

}  // namespace submix
