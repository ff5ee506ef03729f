#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "submix/serialize.hpp"
#include "submix/synth.hpp"
#include "submix/verify.hpp"

namespace submix {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitVerification = 3;

namespace detail {

inline void info(bool quiet, const std::string& line) {
  if (!quiet) std::fputs((line + "\n").c_str(), stdout);
}

inline void warn(const std::string& line) {
  std::fputs(("warning: " + line + "\n").c_str(), stderr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// synth: generate a seeded corpus with planted ground truth.
// ---------------------------------------------------------------------------

struct SynthCmdOptions {
  std::string spec_path;
  std::string out_corpus;
  std::string out_model;  // optional: planted model file
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
};

inline int cli_synth(const SynthCmdOptions& opt) {
  SynthSpec spec = synth_spec_from_json(parse_json_file(opt.spec_path));
  if (opt.seed_override) {
    spec.seed = *opt.seed_override;
    spec.recipe.seed = *opt.seed_override;
  }
  const SynthResult res = synthesize(spec);
  write_file(opt.out_corpus, corpus_to_text(res.corpus));
  detail::info(opt.quiet, "wrote " + std::to_string(res.corpus.instances.size()) +
                              " instances to " + opt.out_corpus);
  if (!opt.out_model.empty()) {
    ModelFile mf;
    mf.model = res.planted;
    mf.recipe = spec.recipe;
    mf.seed = spec.seed;
    mf.solver = "planted";
    mf.loss = "none";
    write_file(opt.out_model, to_json(mf).dump(2) + "\n");
    detail::info(opt.quiet, "wrote planted model to " + opt.out_model);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train: Algorithm-1 end to end.
// ---------------------------------------------------------------------------

struct TrainCmdOptions {
  std::string corpus_path;
  std::string recipe_path;  // ensemble file: feature recipe + shell bank
  std::string config_path;  // optional TrainConfig JSON
  std::string out_model;
  std::string trace_out;  // optional; line-delimited step records
  std::optional<std::uint64_t> seed;
  std::optional<int> passes;
  std::optional<double> lambda;
  bool auto_lambda_flag = false;
  std::optional<std::string> solver;
  std::optional<std::string> loss;
  std::optional<int> ngram_order;
  std::optional<double> budget_override;
  bool quiet = false;
};

inline int cli_train(const TrainCmdOptions& opt) {
  Ensemble ens = ensemble_from_json(parse_json_file(opt.recipe_path));
  TrainConfig cfg;
  if (!opt.config_path.empty())
    cfg = train_config_from_json(parse_json_file(opt.config_path));
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.passes) cfg.passes = *opt.passes;
  if (opt.lambda) {
    cfg.lambda = *opt.lambda;
    cfg.auto_lambda = false;
    if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be > 0");
  }
  if (opt.auto_lambda_flag) cfg.auto_lambda = true;
  if (opt.solver) cfg.lai_solver = solver_from_name(*opt.solver);
  if (opt.ngram_order) ens.recipe.ngram_order = *opt.ngram_order;
  const LossKind loss_kind = loss_from_name(opt.loss.value_or("ell-rouge"));

  const Corpus corpus = corpus_from_text(read_file(opt.corpus_path));
  if (corpus.instances.empty()) throw DataError("no training instances");

  std::string missing_refs, missing_targets;
  for (const auto& in : corpus.instances) {
    if (in.references.empty()) missing_refs += " " + in.instance_id;
    if (!in.target.has_value()) missing_targets += " " + in.instance_id;
  }
  if (!missing_refs.empty())
    throw DataError("instances without references:" + missing_refs);
  if (!missing_targets.empty())
    throw DataError("instances without gold targets:" + missing_targets);

  std::vector<TrainInstance> compiled;
  compiled.reserve(corpus.instances.size());
  for (const auto& in : corpus.instances) {
    CorpusInstance ci = in;
    if (opt.budget_override) ci.budget = *opt.budget_override;
    try {
      compiled.push_back(compile_instance(build_features(ci, ens.recipe),
                                          ens.shells, loss_kind));
    } catch (const std::exception& e) {
      throw DataError("instance '" + in.instance_id + "': " + e.what());
    }
    if (!compiled.back().target_feasible)
      detail::warn("gold summary of '" + in.instance_id +
                   "' exceeds the budget (kept; flagged in the trace)");
  }

  const TrainOutput out = train(ens.shells, compiled, cfg);

  ModelFile mf;
  mf.model = out.model;
  mf.recipe = ens.recipe;
  mf.seed = cfg.seed;
  mf.passes = cfg.passes;
  mf.lambda = out.lambda;
  mf.lambda_was_auto = out.lambda_was_auto;
  mf.solver = solver_name(cfg.lai_solver);
  mf.loss = loss_name(loss_kind);
  mf.loss_weight = cfg.loss_weight;
  mf.config_hash = hex64(fnv1a64(to_json(cfg).dump()));
  mf.report = out.report;
  write_file(opt.out_model, to_json(mf).dump(2) + "\n");

  if (!opt.trace_out.empty()) {
    std::string text;
    for (const auto& rec : out.trace) {
      text += to_json(rec).dump();
      text += '\n';
    }
    write_file(opt.trace_out, text);
  }

  if (!opt.quiet) {
    std::string ws;
    for (std::size_t i = 0; i < out.model.weights.size(); ++i) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%s%.6f", i ? " " : "",
                    out.model.weights[i]);
      ws += buf;
    }
    detail::info(false, "averaged weights: [" + ws + "]");
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "risk bound S(T)=%.4f (gradient %.4f + confidence %.4f + "
                  "approximation %.4f), rho=%.4f, T=%lld, lambda=%.6g%s",
                  out.report.bound, out.report.term_gradient,
                  out.report.term_confidence, out.report.term_approximation,
                  out.report.rho, out.report.steps, out.lambda,
                  out.lambda_was_auto ? " (auto)" : "");
    detail::info(false, buf);
  }
  detail::info(opt.quiet, "wrote model to " + opt.out_model);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// summarize: apply a model file to a corpus.
// ---------------------------------------------------------------------------

struct SummarizeCmdOptions {
  std::string model_path;
  std::string corpus_path;
  std::string out_path;
  std::optional<double> budget_override;
  bool quiet = false;
};

inline int cli_summarize(const SummarizeCmdOptions& opt) {
  const ModelFile mf = model_file_from_json(parse_json_file(opt.model_path));
  const Corpus corpus = corpus_from_text(read_file(opt.corpus_path));

  std::string out_text;
  for (const auto& in : corpus.instances) {
    CorpusInstance ci = in;
    if (opt.budget_override) ci.budget = *opt.budget_override;
    if (ci.budget <= 0.0)
      detail::warn("instance '" + ci.instance_id +
                   "' has budget 0; emitting an empty summary");
    const BuiltInstance built = build_features(ci, mf.recipe);
    SummaryRecord rec;
    rec.instance_id = ci.instance_id;
    if (built.ground.size() > 0 && ci.budget > 0.0) {
      const MaximizationResult r =
          predict(mf.model.shells, mf.model.weights, built);
      rec.selected = r.selected;
      rec.total_cost = r.total_cost;
      rec.objective = r.value;
      for (int v : r.selected)
        rec.texts.push_back(ci.sentences[static_cast<std::size_t>(v)].text);
    }
    out_text += to_json(rec).dump();
    out_text += '\n';
  }
  write_file(opt.out_path, out_text);
  detail::info(opt.quiet, "wrote summaries for " +
                              std::to_string(corpus.instances.size()) +
                              " instances to " + opt.out_path);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate: recall / F / complement-recall metrics of summaries against the
// corpus references.
// ---------------------------------------------------------------------------

struct EvaluateCmdOptions {
  std::string summaries_path;
  std::string corpus_path;
  int ngram_order = 2;
  std::string out_path;  // optional machine-readable report
  bool quiet = false;
};

struct InstanceMetrics {
  std::string instance_id;
  double recall = 0.0;
  double f_measure = 0.0;
  double ell = 0.0;
};

struct EvaluationReport {
  std::vector<InstanceMetrics> per_instance;
  double mean_recall = 0.0;
  double mean_f = 0.0;
  double mean_ell = 0.0;
  int skipped = 0;
};

inline EvaluationReport evaluate_summaries(const Corpus& corpus,
                                           const std::vector<SummaryRecord>& sums,
                                           int ngram_order) {
  std::map<std::string, const SummaryRecord*> by_id;
  for (const auto& s : sums) by_id[s.instance_id] = &s;

  EvaluationReport rep;
  for (const auto& in : corpus.instances) {
    auto it = by_id.find(in.instance_id);
    if (it == by_id.end()) {
      detail::warn("no summary for instance '" + in.instance_id + "'; skipped");
      ++rep.skipped;
      continue;
    }
    if (in.references.empty()) {
      detail::warn("instance '" + in.instance_id + "' has no references; skipped");
      ++rep.skipped;
      continue;
    }
    FeatureRecipe recipe;
    recipe.ngram_order = ngram_order;
    const BuiltInstance built = build_features(in, recipe);
    const NGramTable& t = *built.table;
    const Subset s = make_subset(it->second->selected, built.ground.size());

    InstanceMetrics m;
    m.instance_id = in.instance_id;
    const long long num = t.rouge_numerator(s);
    m.recall = static_cast<double>(num) /
               static_cast<double>(t.rouge_denominator());
    const long long cand =
        static_cast<long long>(t.num_references()) * t.total_ngrams(s);
    const double precision =
        cand > 0 ? static_cast<double>(num) / static_cast<double>(cand) : 0.0;
    m.f_measure = (precision + m.recall > 0.0)
                      ? 2.0 * precision * m.recall / (precision + m.recall)
                      : 0.0;
    m.ell = t.complement_recall(s);
    rep.per_instance.push_back(m);
  }
  const int n = static_cast<int>(rep.per_instance.size());
  for (const auto& m : rep.per_instance) {
    rep.mean_recall += m.recall / n;
    rep.mean_f += m.f_measure / n;
    rep.mean_ell += m.ell / n;
  }
  return rep;
}

inline json to_json(const EvaluationReport& r, int ngram_order) {
  json per = json::array();
  for (const auto& m : r.per_instance)
    per.push_back({{"instance_id", m.instance_id},
                   {"recall", m.recall},
                   {"f_measure", m.f_measure},
                   {"ell_rouge", m.ell}});
  return json{{"ngram_order", ngram_order},
              {"per_instance", per},
              {"mean_recall", r.mean_recall},
              {"mean_f_measure", r.mean_f},
              {"mean_ell_rouge", r.mean_ell},
              {"skipped", r.skipped}};
}

inline int cli_evaluate(const EvaluateCmdOptions& opt) {
  const Corpus corpus = corpus_from_text(read_file(opt.corpus_path));
  std::vector<SummaryRecord> sums;
  {
    std::istringstream is(read_file(opt.summaries_path));
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        sums.push_back(summary_from_json(json::parse(line)));
      } catch (const json::exception& e) {
        throw DataError("summaries line " + std::to_string(line_no) + ": " +
                        e.what());
      }
    }
  }
  const EvaluationReport rep = evaluate_summaries(corpus, sums, opt.ngram_order);
  if (!opt.quiet) {
    for (const auto& m : rep.per_instance) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-16s recall %.4f  F %.4f  ell %.4f",
                    m.instance_id.c_str(), m.recall, m.f_measure, m.ell);
      detail::info(false, buf);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mean over %zu instances: recall %.4f  F %.4f  ell %.4f  "
                  "(skipped %d)",
                  rep.per_instance.size(), rep.mean_recall, rep.mean_f,
                  rep.mean_ell, rep.skipped);
    detail::info(false, buf);
  }
  if (!opt.out_path.empty())
    write_file(opt.out_path, to_json(rep, opt.ngram_order).dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify: the property suites at desk scale.
// ---------------------------------------------------------------------------

struct VerifyCmdOptions {
  std::string scope = "all";  // comma list: shells,mixtures,greedy,losses,
                              // setcover,subgradient,checker
  std::uint64_t seed = 1;
  bool quiet = false;
};

inline int cli_verify(const VerifyCmdOptions& opt) {
  auto in_scope = [&](const char* name) {
    if (opt.scope == "all") return true;
    const std::string s = "," + opt.scope + ",";
    return s.find(std::string(",") + name + ",") != std::string::npos;
  };

  std::vector<SuiteResult> results;
  GreedyRatioReport ratios;
  if (in_scope("shells"))
    results.push_back(verify_shell_properties(opt.seed));
  if (in_scope("mixtures"))
    results.push_back(verify_mixture_closure(opt.seed));
  if (in_scope("checker"))
    results.push_back(verify_checker_catches_supermodular(opt.seed));
  if (in_scope("greedy"))
    results.push_back(verify_greedy_ratios(opt.seed, 200, &ratios));
  if (in_scope("losses"))
    results.push_back(verify_loss_properties(opt.seed));
  if (in_scope("setcover"))
    results.push_back(verify_setcover(opt.seed));
  if (in_scope("subgradient"))
    results.push_back(verify_subgradient(opt.seed));

  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::fprintf(stdout, "%-22s %s  %s\n", r.name.c_str(),
                 r.pass ? "PASS" : "FAIL", r.details.c_str());
  }
  if (in_scope("greedy") && ratios.knapsack.count > 0 && !opt.quiet) {
    std::fprintf(stdout,
                 "knapsack ratio distribution: min %.4f mean %.4f max %.4f "
                 "over %d instances\n",
                 ratios.knapsack.min, ratios.knapsack.mean, ratios.knapsack.max,
                 ratios.knapsack.count);
    std::fprintf(stdout,
                 "cardinality ratio distribution: min %.4f mean %.4f max %.4f "
                 "over %d instances\n",
                 ratios.cardinality.min, ratios.cardinality.mean,
                 ratios.cardinality.max, ratios.cardinality.count);
  }
  return all_pass ? kExitOk : kExitVerification;
}

}  // namespace submix
