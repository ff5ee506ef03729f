#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "submix/submix.hpp"

namespace {

int dispatch(int argc, char** argv) {
  CLI::App app{"Submodular shell mixtures: learning and budgeted summarization"};
  app.require_subcommand(1);

  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress informational output");

  // synth ------------------------------------------------------------------
  submix::SynthCmdOptions synth_opt;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synth", "generate a planted-truth corpus");
  synth->add_option("spec", synth_opt.spec_path, "synthesis spec (JSON)")
      ->required();
  synth->add_option("--out", synth_opt.out_corpus, "output corpus (JSONL)")
      ->required();
  synth->add_option("--model-out", synth_opt.out_model,
                    "also write the planted model file");
  synth->add_option("--seed", synth_seed, "override the spec seed");

  // train ------------------------------------------------------------------
  submix::TrainCmdOptions train_opt;
  bool train_auto_lambda = false;
  auto* train = app.add_subcommand("train", "learn mixture weights");
  train->add_option("corpus", train_opt.corpus_path, "training corpus (JSONL)")
      ->required();
  train->add_option("--recipe", train_opt.recipe_path,
                    "recipe file: feature channels + shell bank (JSON)")
      ->required();
  train->add_option("--config", train_opt.config_path, "training config (JSON)");
  train->add_option("--out", train_opt.out_model, "output model file")
      ->required();
  train->add_option("--trace-out", train_opt.trace_out,
                    "per-step trace (JSONL)");
  train->add_option("--seed", train_opt.seed, "training seed");
  train->add_option("--passes", train_opt.passes, "passes over the corpus");
  train->add_option("--lambda", train_opt.lambda, "regularizer (> 0)");
  train->add_flag("--auto-lambda", train_auto_lambda,
                  "set lambda from a w=0 measurement pass");
  train->add_option("--lai", train_opt.solver, "LAI solver")
      ->check(CLI::IsMember({"greedy", "brute"}));
  train->add_option("--loss", train_opt.loss, "training loss")
      ->check(CLI::IsMember({"ell-rouge", "one-minus-rouge"}));
  train->add_option("--n", train_opt.ngram_order, "n-gram order of the loss")
      ->check(CLI::IsMember({1, 2}));
  train->add_option("--budget-override", train_opt.budget_override,
                    "override every instance budget");

  // summarize ---------------------------------------------------------------
  submix::SummarizeCmdOptions sum_opt;
  auto* summarize = app.add_subcommand("summarize", "apply a model to a corpus");
  summarize->add_option("model", sum_opt.model_path, "model file")->required();
  summarize->add_option("corpus", sum_opt.corpus_path, "corpus (JSONL)")
      ->required();
  summarize->add_option("--out", sum_opt.out_path, "output summaries (JSONL)")
      ->required();
  summarize->add_option("--budget-override", sum_opt.budget_override,
                        "override every instance budget");

  // evaluate ----------------------------------------------------------------
  submix::EvaluateCmdOptions eval_opt;
  auto* evaluate = app.add_subcommand("evaluate", "score summaries");
  evaluate->add_option("summaries", eval_opt.summaries_path, "summaries (JSONL)")
      ->required();
  evaluate->add_option("corpus", eval_opt.corpus_path, "corpus (JSONL)")
      ->required();
  evaluate->add_option("--n", eval_opt.ngram_order, "n-gram order")
      ->check(CLI::IsMember({1, 2}));
  evaluate->add_option("--out", eval_opt.out_path,
                       "machine-readable report (JSON)");

  // verify ------------------------------------------------------------------
  submix::VerifyCmdOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--scope", verify_opt.scope,
                     "comma list of suites (default all): shells,mixtures,"
                     "checker,greedy,losses,setcover,subgradient");
  verify->add_option("--seed", verify_opt.seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return submix::kExitUsage;
  }

  if (synth->parsed()) {
    synth_opt.seed_override = synth_seed;
    synth_opt.quiet = quiet;
    return submix::cli_synth(synth_opt);
  }
  if (train->parsed()) {
    train_opt.auto_lambda_flag = train_auto_lambda;
    train_opt.quiet = quiet;
    return submix::cli_train(train_opt);
  }
  if (summarize->parsed()) {
    sum_opt.quiet = quiet;
    return submix::cli_summarize(sum_opt);
  }
  if (evaluate->parsed()) {
    eval_opt.quiet = quiet;
    return submix::cli_evaluate(eval_opt);
  }
  if (verify->parsed()) {
    verify_opt.quiet = quiet;
    return submix::cli_verify(verify_opt);
  }
  return submix::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const submix::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return submix::kExitData;
  } catch (const submix::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return submix::kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return submix::kExitData;
  }
}
