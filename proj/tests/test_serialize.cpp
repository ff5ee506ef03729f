#include <catch2/catch_amalgamated.hpp>

#include "submix/serialize.hpp"
#include "submix/synth.hpp"

using namespace submix;

TEST_CASE("shell spec round trip") {
  const std::vector<ShellSpec> specs = {
      ShellSpec::modular("r"),
      ShellSpec::diversity(0.55, "k1", "rq"),
      ShellSpec::clustered_facility("k2", "ri"),
      ShellSpec::fidelity(0.03, "simu"),
      ShellSpec::truncation(0.4, "wc"),
      ShellSpec::truncation(kUnboundedThreshold, "wc")};
  for (const auto& s : specs) {
    const ShellSpec back = shell_spec_from_json(to_json(s));
    CHECK(back == s);
    CHECK(to_json(back) == to_json(s));
  }
}

TEST_CASE("recipe round trip") {
  const Ensemble e = make_query_focus_ensemble();
  const FeatureRecipe back = recipe_from_json(to_json(e.recipe));
  CHECK(to_json(back) == to_json(e.recipe));

  const Ensemble eb = ensemble_from_json(to_json(e));
  CHECK(eb.shells.size() == e.shells.size());
  CHECK(to_json(eb) == to_json(e));
}

TEST_CASE("corpus round trip") {
  Corpus c;
  CorpusInstance a;
  a.instance_id = "a";
  a.sentences = {{"one two three", std::nullopt}, {"four five", {9.5}}};
  a.query = "two";
  a.references = {"one two three"};
  a.budget = 4.0;
  a.target = Subset{0};
  SimilarityMatrix m(2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(0, 1) = m.at(1, 0) = 0.25;
  a.external_similarities["x"] = m;
  c.instances.push_back(a);

  CorpusInstance b;
  b.instance_id = "b";
  b.sentences = {{"six seven", std::nullopt}};
  b.budget = 2.0;
  c.instances.push_back(b);

  const std::string text = corpus_to_text(c);
  const Corpus back = corpus_from_text(text);
  REQUIRE(back.instances.size() == 2);
  CHECK(corpus_to_text(back) == text);
  CHECK(back.instances[0].sentences[1].cost_override == 9.5);
  CHECK(back.instances[0].target == Subset{0});
  CHECK(back.instances[0].external_similarities.at("x").at(0, 1) == 0.25);
  CHECK(back.instances[1].query == std::nullopt);
}

TEST_CASE("corpus parse errors carry line numbers") {
  try {
    corpus_from_text("{\"instance_id\": \"a\", \"sentences\": [], \"budget\": 1}\nnot json\n");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("model file round trip with content hash") {
  ModelFile mf;
  mf.model.shells = {ShellSpec::fidelity(0.02, "u"), ShellSpec::modular("r")};
  mf.model.weights = {0.75, 0.1};
  mf.recipe = make_fidelity_ensemble().recipe;
  mf.seed = 42;
  mf.passes = 5;
  mf.lambda = 0.125;
  mf.lambda_was_auto = true;
  mf.solver = "greedy";
  mf.loss = "ell-rouge";
  mf.config_hash = "abc";
  mf.report = risk_bound(2, 1.0, 0.5, 0.9, 0.05, 10);

  const json j = to_json(mf);
  const ModelFile back = model_file_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.model.weights == mf.model.weights);
  CHECK(back.report.bound == mf.report.bound);

  SECTION("tampering breaks the hash") {
    json bad = j;
    bad["weights"][0] = 0.9;
    CHECK_THROWS_AS(model_file_from_json(bad), DataError);
  }
  SECTION("negative weights are rejected") {
    json bad = j;
    bad["weights"][0] = -0.1;
    bad.erase("content_hash");
    CHECK_THROWS_AS(model_file_from_json(bad), DataError);
  }
  SECTION("unknown format versions are rejected") {
    json bad = j;
    bad["format_version"] = 99;
    bad.erase("content_hash");
    CHECK_THROWS_AS(model_file_from_json(bad), DataError);
  }
}

TEST_CASE("synth spec round trip and validation") {
  SynthSpec s;
  s.instances = 7;
  s.sentences_per_instance = 9;
  s.vocab_size = 33;
  s.shells = {ShellSpec::modular("r0")};
  s.weights = {1.0};
  s.budget_fraction = 0.25;
  s.seed = 99;
  s.recipe.rewards = {{"r0", "random", ""}};

  const SynthSpec back = synth_spec_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));

  SECTION("mismatched planted weights are rejected") {
    json bad = to_json(s);
    bad["weights"] = {1.0, 2.0};
    CHECK_THROWS_AS(synth_spec_from_json(bad), std::invalid_argument);
  }
  SECTION("negative planted weights are rejected") {
    json bad = to_json(s);
    bad["weights"] = {-1.0};
    CHECK_THROWS_AS(synth_spec_from_json(bad), std::invalid_argument);
  }
}

TEST_CASE("train config round trip") {
  SECTION("explicit lambda") {
    TrainConfig c;
    c.lambda = 0.5;
    c.auto_lambda = false;
    c.passes = 3;
    c.seed = 7;
    c.lai_solver = LaiSolver::BruteForce;
    c.shuffle = false;
    c.loss_weight = 0.8;
    const TrainConfig back = train_config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
  }
  SECTION("auto lambda spelling") {
    const TrainConfig c = train_config_from_json(json{{"lambda", "auto"}});
    CHECK(c.auto_lambda);
    CHECK_THROWS_AS(train_config_from_json(json{{"lambda", "magic"}}),
                    ConfigError);
    CHECK_THROWS_AS(train_config_from_json(json{{"lambda", -1.0}}), ConfigError);
  }
}

TEST_CASE("summary record round trip") {
  SummaryRecord r;
  r.instance_id = "x";
  r.selected = {1, 4};
  r.texts = {"b", "e"};
  r.total_cost = 7.0;
  r.objective = 0.325;
  const SummaryRecord back = summary_from_json(to_json(r));
  CHECK(to_json(back) == to_json(r));
}

TEST_CASE("synthesized corpora serialize deterministically") {
  SynthSpec s;
  s.instances = 3;
  s.sentences_per_instance = 6;
  s.vocab_size = 20;
  s.shells = {ShellSpec::modular("r0")};
  s.weights = {1.0};
  s.seed = 5;
  s.recipe.rewards = {{"r0", "random", ""}};
  const SynthResult a = synthesize(s);
  const SynthResult b = synthesize(s);
  CHECK(corpus_to_text(a.corpus) == corpus_to_text(b.corpus));
  // References are the planted greedy summaries and targets match them.
  for (const auto& inst : a.corpus.instances) {
    REQUIRE(inst.target.has_value());
    REQUIRE(inst.references.size() == 1);
    std::string joined;
    for (int v : *inst.target) {
      if (!joined.empty()) joined += ' ';
      joined += inst.sentences[static_cast<std::size_t>(v)].text;
    }
    CHECK(inst.references[0] == joined);
  }
}
