#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "submix/features.hpp"
#include "submix/learn.hpp"
#include "submix/rng.hpp"

namespace submix {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// ShellSpec: family tag + flat parameter map, only the fields the family
// uses. The unbounded truncation threshold is spelled "inf".
// ---------------------------------------------------------------------------

inline json to_json(const ShellSpec& s) {
  json j;
  j["family"] = family_name(s.family);
  switch (s.family) {
    case ShellFamily::Modular:
      j["rewards"] = s.rewards;
      break;
    case ShellFamily::Diversity:
      j["curvature"] = s.curvature;
      j["clustering"] = s.clustering;
      j["rewards"] = s.rewards;
      break;
    case ShellFamily::ClusteredFacility:
      j["clustering"] = s.clustering;
      j["rewards"] = s.rewards;
      break;
    case ShellFamily::Fidelity:
      j["saturation"] = s.saturation;
      j["similarity"] = s.similarity;
      break;
    case ShellFamily::Truncation:
      if (s.threshold == kUnboundedThreshold)
        j["threshold"] = "inf";
      else
        j["threshold"] = s.threshold;
      j["costs"] = s.costs;
      break;
  }
  return j;
}

inline ShellSpec shell_spec_from_json(const json& j) {
  ShellSpec s;
  s.family = family_from_name(j.at("family").get<std::string>());
  switch (s.family) {
    case ShellFamily::Modular:
      s.rewards = j.at("rewards").get<std::string>();
      break;
    case ShellFamily::Diversity:
      s.curvature = j.at("curvature").get<double>();
      s.clustering = j.at("clustering").get<std::string>();
      s.rewards = j.at("rewards").get<std::string>();
      break;
    case ShellFamily::ClusteredFacility:
      s.clustering = j.at("clustering").get<std::string>();
      s.rewards = j.at("rewards").get<std::string>();
      break;
    case ShellFamily::Fidelity:
      s.saturation = j.at("saturation").get<double>();
      s.similarity = j.at("similarity").get<std::string>();
      break;
    case ShellFamily::Truncation: {
      const auto& th = j.at("threshold");
      s.threshold = th.is_string() ? kUnboundedThreshold : th.get<double>();
      s.costs = j.at("costs").get<std::string>();
      break;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// FeatureRecipe
// ---------------------------------------------------------------------------

inline json to_json(const FeatureRecipe& r) {
  json j;
  j["similarities"] = json::array();
  for (const auto& c : r.similarities)
    j["similarities"].push_back({{"id", c.id}, {"kind", c.kind}});
  j["clusterings"] = json::array();
  for (const auto& c : r.clusterings) {
    json e = {{"id", c.id}, {"similarity", c.similarity}};
    if (c.count) e["count"] = *c.count;
    if (c.fraction) e["fraction"] = *c.fraction;
    j["clusterings"].push_back(e);
  }
  j["rewards"] = json::array();
  for (const auto& c : r.rewards) {
    json e = {{"id", c.id}, {"kind", c.kind}};
    if (!c.similarity.empty()) e["similarity"] = c.similarity;
    if (c.lo != 0.0) e["lo"] = c.lo;
    if (c.hi != 1.0) e["hi"] = c.hi;
    j["rewards"].push_back(e);
  }
  j["aux_costs"] = json::array();
  for (const auto& c : r.aux_costs)
    j["aux_costs"].push_back({{"id", c.id}, {"kind", c.kind}});
  j["lowercase"] = r.lowercase;
  j["tfidf_stopwords"] = r.tfidf_stopwords;
  j["ngram_order"] = r.ngram_order;
  j["seed"] = r.seed;
  return j;
}

inline FeatureRecipe recipe_from_json(const json& j) {
  FeatureRecipe r;
  for (const auto& e : j.value("similarities", json::array()))
    r.similarities.push_back({e.at("id").get<std::string>(),
                              e.at("kind").get<std::string>()});
  for (const auto& e : j.value("clusterings", json::array())) {
    ClusteringChannelSpec c;
    c.id = e.at("id").get<std::string>();
    c.similarity = e.at("similarity").get<std::string>();
    if (e.contains("count")) c.count = e.at("count").get<int>();
    if (e.contains("fraction")) c.fraction = e.at("fraction").get<double>();
    r.clusterings.push_back(std::move(c));
  }
  for (const auto& e : j.value("rewards", json::array())) {
    RewardChannelSpec c;
    c.id = e.at("id").get<std::string>();
    c.kind = e.at("kind").get<std::string>();
    c.similarity = e.value("similarity", "");
    c.lo = e.value("lo", 0.0);
    c.hi = e.value("hi", 1.0);
    r.rewards.push_back(std::move(c));
  }
  for (const auto& e : j.value("aux_costs", json::array()))
    r.aux_costs.push_back({e.at("id").get<std::string>(),
                           e.at("kind").get<std::string>()});
  r.lowercase = j.value("lowercase", true);
  r.tfidf_stopwords = j.value("tfidf_stopwords", true);
  r.ngram_order = j.value("ngram_order", 2);
  r.seed = j.value("seed", std::uint64_t{0});
  return r;
}

// Recipe file on disk: the feature recipe plus the shell bank it feeds.
inline json to_json(const Ensemble& e) {
  json j;
  j["recipe"] = to_json(e.recipe);
  j["shells"] = json::array();
  for (const auto& s : e.shells) j["shells"].push_back(to_json(s));
  return j;
}

inline Ensemble ensemble_from_json(const json& j) {
  Ensemble e;
  e.recipe = recipe_from_json(j.at("recipe"));
  for (const auto& s : j.at("shells")) e.shells.push_back(shell_spec_from_json(s));
  return e;
}

// ---------------------------------------------------------------------------
// Corpus: line-delimited JSON, one instance per line.
// ---------------------------------------------------------------------------

inline json to_json(const CorpusInstance& in) {
  json j;
  j["instance_id"] = in.instance_id;
  j["sentences"] = json::array();
  for (const auto& s : in.sentences) {
    if (s.cost_override)
      j["sentences"].push_back({{"text", s.text}, {"cost", *s.cost_override}});
    else
      j["sentences"].push_back(s.text);
  }
  if (in.query) j["query"] = *in.query;
  j["references"] = in.references;
  j["budget"] = in.budget;
  if (in.target) j["target"] = *in.target;
  if (!in.external_similarities.empty()) {
    json ext = json::object();
    for (const auto& [id, m] : in.external_similarities) {
      json rows = json::array();
      for (int i = 0; i < m.n; ++i) {
        json row = json::array();
        for (int k = 0; k < m.n; ++k) row.push_back(m.at(i, k));
        rows.push_back(row);
      }
      ext[id] = rows;
    }
    j["external_similarities"] = ext;
  }
  return j;
}

inline CorpusInstance corpus_instance_from_json(const json& j) {
  CorpusInstance in;
  in.instance_id = j.at("instance_id").get<std::string>();
  for (const auto& e : j.at("sentences")) {
    CorpusSentence s;
    if (e.is_string()) {
      s.text = e.get<std::string>();
    } else {
      s.text = e.at("text").get<std::string>();
      if (e.contains("cost")) s.cost_override = e.at("cost").get<double>();
    }
    in.sentences.push_back(std::move(s));
  }
  if (j.contains("query")) in.query = j.at("query").get<std::string>();
  in.references = j.value("references", std::vector<std::string>{});
  in.budget = j.at("budget").get<double>();
  if (j.contains("target")) in.target = j.at("target").get<Subset>();
  if (j.contains("external_similarities")) {
    for (const auto& [id, rows] : j.at("external_similarities").items()) {
      SimilarityMatrix m(static_cast<int>(rows.size()));
      for (int i = 0; i < m.n; ++i)
        for (int k = 0; k < m.n; ++k)
          m.at(i, k) = rows.at(static_cast<std::size_t>(i))
                           .at(static_cast<std::size_t>(k))
                           .get<double>();
      in.external_similarities[id] = std::move(m);
    }
  }
  return in;
}

inline std::string corpus_to_text(const Corpus& c) {
  std::string out;
  for (const auto& in : c.instances) {
    out += to_json(in).dump();
    out += '\n';
  }
  return out;
}

inline Corpus corpus_from_text(const std::string& text) {
  Corpus c;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      c.instances.push_back(corpus_instance_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Model file: one JSON document with format version and a content hash.
// ---------------------------------------------------------------------------

struct ModelFile {
  int format_version = 1;
  Model model;
  FeatureRecipe recipe;
  std::uint64_t seed = 0;
  int passes = 0;
  double lambda = 0.0;
  bool lambda_was_auto = false;
  std::string solver = "greedy";
  std::string loss = "ell-rouge";
  double loss_weight = 1.0;
  std::string config_hash;
  RiskBoundReport report;
};

inline json to_json(const RiskBoundReport& r) {
  return json{{"components", r.components},
              {"max_grad_norm", r.max_grad_norm},
              {"max_hinge", r.max_hinge},
              {"rho", r.rho},
              {"delta", r.delta},
              {"steps", r.steps},
              {"term_gradient", r.term_gradient},
              {"term_confidence", r.term_confidence},
              {"term_approximation", r.term_approximation},
              {"bound", r.bound},
              {"lambda_auto", r.lambda_auto}};
}

inline RiskBoundReport report_from_json(const json& j) {
  RiskBoundReport r;
  r.components = j.value("components", 0);
  r.max_grad_norm = j.value("max_grad_norm", 0.0);
  r.max_hinge = j.value("max_hinge", 0.0);
  r.rho = j.value("rho", 1.0);
  r.delta = j.value("delta", 0.05);
  r.steps = j.value("steps", 0ll);
  r.term_gradient = j.value("term_gradient", 0.0);
  r.term_confidence = j.value("term_confidence", 0.0);
  r.term_approximation = j.value("term_approximation", 0.0);
  r.bound = j.value("bound", 0.0);
  r.lambda_auto = j.value("lambda_auto", 0.0);
  return r;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

inline json to_json(const ModelFile& m, bool with_hash = true) {
  json j;
  j["format_version"] = m.format_version;
  j["shells"] = json::array();
  for (const auto& s : m.model.shells) j["shells"].push_back(to_json(s));
  j["weights"] = m.model.weights;
  j["recipe"] = to_json(m.recipe);
  j["provenance"] = {{"seed", m.seed},
                     {"passes", m.passes},
                     {"lambda", m.lambda},
                     {"lambda_was_auto", m.lambda_was_auto},
                     {"solver", m.solver},
                     {"loss", m.loss},
                     {"loss_weight", m.loss_weight},
                     {"config_hash", m.config_hash},
                     {"report", to_json(m.report)}};
  if (with_hash) j["content_hash"] = hex64(fnv1a64(j.dump()));
  return j;
}

inline ModelFile model_file_from_json(const json& j) {
  ModelFile m;
  m.format_version = j.at("format_version").get<int>();
  if (m.format_version != 1)
    throw DataError("unsupported model format version " +
                    std::to_string(m.format_version));
  if (j.contains("content_hash")) {
    json body = j;
    body.erase("content_hash");
    const std::string expect = hex64(fnv1a64(body.dump()));
    if (j.at("content_hash").get<std::string>() != expect)
      throw DataError("model file content hash mismatch");
  }
  for (const auto& e : j.at("shells"))
    m.model.shells.push_back(shell_spec_from_json(e));
  m.model.weights = j.at("weights").get<std::vector<double>>();
  if (m.model.weights.size() != m.model.shells.size())
    throw DataError("model weights/shells length mismatch");
  for (double w : m.model.weights)
    if (!(w >= 0.0)) throw DataError("model weight must be nonnegative");
  m.recipe = recipe_from_json(j.at("recipe"));
  const auto& p = j.at("provenance");
  m.seed = p.value("seed", std::uint64_t{0});
  m.passes = p.value("passes", 0);
  m.lambda = p.value("lambda", 0.0);
  m.lambda_was_auto = p.value("lambda_was_auto", false);
  m.solver = p.value("solver", "greedy");
  m.loss = p.value("loss", "ell-rouge");
  m.loss_weight = p.value("loss_weight", 1.0);
  m.config_hash = p.value("config_hash", "");
  if (p.contains("report")) m.report = report_from_json(p.at("report"));
  return m;
}

// ---------------------------------------------------------------------------
// Synthetic-corpus spec
// ---------------------------------------------------------------------------

struct SynthSpec {
  int instances = 20;
  int sentences_per_instance = 12;
  int vocab_size = 60;
  int words_min = 5;
  int words_max = 10;
  int query_terms = 3;
  std::vector<ShellSpec> shells;  // planted
  std::vector<double> weights;    // w*, >= 0
  double budget_fraction = 0.3;
  std::uint64_t seed = 0;
  FeatureRecipe recipe;

  void validate() const {
    if (instances < 1) throw std::invalid_argument("instance count must be >= 1");
    if (sentences_per_instance < 1)
      throw std::invalid_argument("sentences per instance must be >= 1");
    if (vocab_size < 1) throw std::invalid_argument("vocabulary must be nonempty");
    if (words_min < 1 || words_max < words_min)
      throw std::invalid_argument("bad words-per-sentence range");
    if (shells.empty()) throw std::invalid_argument("planted shell list is empty");
    if (weights.size() != shells.size())
      throw std::invalid_argument("planted weights/shells length mismatch");
    for (double w : weights)
      if (!(w >= 0.0)) throw std::invalid_argument("planted weight must be >= 0");
    if (!(budget_fraction > 0.0 && budget_fraction <= 1.0))
      throw std::invalid_argument("budget fraction must be in (0,1]");
  }
};

inline json to_json(const SynthSpec& s) {
  json j;
  j["instances"] = s.instances;
  j["sentences_per_instance"] = s.sentences_per_instance;
  j["vocab_size"] = s.vocab_size;
  j["words_min"] = s.words_min;
  j["words_max"] = s.words_max;
  j["query_terms"] = s.query_terms;
  j["shells"] = json::array();
  for (const auto& sp : s.shells) j["shells"].push_back(to_json(sp));
  j["weights"] = s.weights;
  j["budget_fraction"] = s.budget_fraction;
  j["seed"] = s.seed;
  j["recipe"] = to_json(s.recipe);
  return j;
}

inline SynthSpec synth_spec_from_json(const json& j) {
  SynthSpec s;
  s.instances = j.value("instances", 20);
  s.sentences_per_instance = j.value("sentences_per_instance", 12);
  s.vocab_size = j.value("vocab_size", 60);
  s.words_min = j.value("words_min", 5);
  s.words_max = j.value("words_max", 10);
  s.query_terms = j.value("query_terms", 3);
  for (const auto& e : j.value("shells", json::array()))
    s.shells.push_back(shell_spec_from_json(e));
  s.weights = j.value("weights", std::vector<double>{});
  s.budget_fraction = j.value("budget_fraction", 0.3);
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("recipe")) s.recipe = recipe_from_json(j.at("recipe"));
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Training config file
// ---------------------------------------------------------------------------

inline json to_json(const TrainConfig& c) {
  json j;
  if (c.auto_lambda)
    j["lambda"] = "auto";
  else
    j["lambda"] = c.lambda;
  j["passes"] = c.passes;
  j["seed"] = c.seed;
  j["lai_solver"] = solver_name(c.lai_solver);
  j["shuffle"] = c.shuffle;
  j["loss_weight"] = c.loss_weight;
  j["delta"] = c.delta;
  return j;
}

inline TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  if (j.contains("lambda")) {
    if (j.at("lambda").is_string()) {
      if (j.at("lambda").get<std::string>() != "auto")
        throw ConfigError("lambda must be a positive number or \"auto\"");
      c.auto_lambda = true;
    } else {
      c.lambda = j.at("lambda").get<double>();
      c.auto_lambda = false;
      if (!(c.lambda > 0.0)) throw ConfigError("lambda must be > 0");
    }
  }
  c.passes = j.value("passes", 1);
  c.seed = j.value("seed", std::uint64_t{0});
  c.lai_solver = solver_from_name(j.value("lai_solver", "greedy"));
  c.shuffle = j.value("shuffle", true);
  c.loss_weight = j.value("loss_weight", 1.0);
  c.delta = j.value("delta", 0.05);
  return c;
}

// ---------------------------------------------------------------------------
// Trace and summaries
// ---------------------------------------------------------------------------

inline json to_json(const TraceRecord& r) {
  return json{{"t", r.t},
              {"instance_id", r.instance_id},
              {"hinge_surrogate", r.hinge_surrogate},
              {"grad_norm", r.grad_norm},
              {"weights_after", r.weights_after},
              {"max_weight", r.max_weight},
              {"guaranteed", r.guaranteed},
              {"target_feasible", r.target_feasible}};
}

struct SummaryRecord {
  std::string instance_id;
  Subset selected;
  std::vector<std::string> texts;
  double total_cost = 0.0;
  double objective = 0.0;
};

inline json to_json(const SummaryRecord& r) {
  return json{{"instance_id", r.instance_id},
              {"selected", r.selected},
              {"texts", r.texts},
              {"total_cost", r.total_cost},
              {"objective", r.objective}};
}

inline SummaryRecord summary_from_json(const json& j) {
  SummaryRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.selected = j.at("selected").get<Subset>();
  r.texts = j.value("texts", std::vector<std::string>{});
  r.total_cost = j.value("total_cost", 0.0);
  r.objective = j.value("objective", 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write '" + path + "'");
  os << content;
}

inline json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw DataError("while parsing '" + path + "': " + e.what());
  }
}

}  // namespace submix
