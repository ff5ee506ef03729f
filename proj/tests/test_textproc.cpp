#include <catch2/catch_amalgamated.hpp>

#include "submix/features.hpp"
#include "submix/textproc.hpp"

using namespace submix;

TEST_CASE("tokenize") {
  CHECK(tokenize("The cat sat.") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("The cat sat.", {true, true}) ==
        std::vector<std::string>{"cat", "sat"});
  CHECK(tokenize("Keep CASE", {false, false}) ==
        std::vector<std::string>{"Keep", "CASE"});
  CHECK(tokenize("a-b_c 42x") ==
        std::vector<std::string>{"a", "b", "c", "42x"});
}

TEST_CASE("sentence cost") {
  CHECK(sentence_cost("a b c") == 3.0);
  CHECK(sentence_cost("") == 0.0);
  CHECK(sentence_cost("The cat, the mat.") == 4.0);  // stopwords still count
}

TEST_CASE("tf-idf cosine matrix") {
  const std::vector<std::vector<std::string>> toks = {
      tokenize("solar power is clean"),
      tokenize("wind power is cheap"),
      tokenize("cats sleep")};
  const SimilarityMatrix m = tfidf_cosine_matrix(toks, 1);

  SECTION("hand-computed entry with the smoothed idf") {
    CHECK(m.at(0, 1) == Catch::Approx(0.366446816266513).epsilon(1e-12));
  }
  SECTION("disjoint vocabularies are orthogonal") {
    CHECK(m.at(0, 2) == 0.0);
    CHECK(m.at(1, 2) == 0.0);
  }
  SECTION("diagonal is exactly one on nonzero rows") {
    for (int i = 0; i < 3; ++i) CHECK(m.at(i, i) == 1.0);
  }
  SECTION("identical sentences have similarity one") {
    const auto dup = tfidf_cosine_matrix({toks[0], toks[0]}, 1);
    CHECK(dup.at(0, 1) == 1.0);
  }
  SECTION("entries are symmetric and bounded") {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(m.at(i, j) == m.at(j, i));
        CHECK((m.at(i, j) >= 0.0 && m.at(i, j) <= 1.0));
      }
  }
  SECTION("bigram order uses bigram terms") {
    const auto b = tfidf_cosine_matrix(
        {tokenize("a b c"), tokenize("a b d"), tokenize("x y")}, 2);
    CHECK(b.at(0, 1) > 0.0);  // shared bigram "a b"
    CHECK(b.at(0, 2) == 0.0);
  }
  SECTION("empty sentences give zero rows") {
    const auto z = tfidf_cosine_matrix({tokenize("a b"), tokenize("")}, 1);
    CHECK(z.at(1, 1) == 0.0);
    CHECK(z.at(0, 1) == 0.0);
  }
}

TEST_CASE("k-means clustering") {
  const std::vector<std::vector<std::string>> toks = {
      tokenize("sun solar energy sun"), tokenize("solar sun panels"),
      tokenize("solar energy panels"),  tokenize("cats dogs pets"),
      tokenize("dogs pets cats cats"),  tokenize("pets dogs")};
  const auto vecs = tfidf_vectors(toks, 1);

  SECTION("two separable vocabulary groups split cleanly") {
    const Partition p = cluster_kmeans(vecs, 2, RngStream(1, "km"));
    p.validate(6);
    REQUIRE(p.cluster_count() == 2);
    // Each cluster must be exactly one vocabulary group.
    for (const auto& cluster : p.clusters) {
      REQUIRE(!cluster.empty());
      const bool solar_group = cluster.front() <= 2;
      for (int v : cluster) CHECK((v <= 2) == solar_group);
    }
  }
  SECTION("K = |V| yields singletons") {
    const Partition p = cluster_kmeans(vecs, 6, RngStream(1, "km"));
    p.validate(6);
    REQUIRE(p.cluster_count() == 6);
    for (const auto& cluster : p.clusters) CHECK(cluster.size() == 1);
  }
  SECTION("K = 1 yields one cluster") {
    const Partition p = cluster_kmeans(vecs, 1, RngStream(1, "km"));
    p.validate(6);
    REQUIRE(p.cluster_count() == 1);
    CHECK(p.clusters.front().size() == 6);
  }
  SECTION("deterministic under a fixed seed") {
    const Partition a = cluster_kmeans(vecs, 3, RngStream(5, "km"));
    const Partition b = cluster_kmeans(vecs, 3, RngStream(5, "km"));
    CHECK(a.clusters == b.clusters);
  }
}

TEST_CASE("cluster count resolution") {
  CHECK(resolve_cluster_count(3, std::nullopt, 10) == 3);
  CHECK(resolve_cluster_count(std::nullopt, 0.2, 10) == 2);
  CHECK(resolve_cluster_count(std::nullopt, 0.1, 3) == 1);   // ceil(0.3)
  CHECK(resolve_cluster_count(std::nullopt, 0.3, 2) == 1);   // max(1, .)
  CHECK(resolve_cluster_count(15, std::nullopt, 10) == 10);  // clamps
  CHECK_THROWS_AS(resolve_cluster_count(std::nullopt, std::nullopt, 5),
                  ConfigError);
}

TEST_CASE("query-independent rewards") {
  SECTION("single element has no neighbors") {
    SimilarityMatrix m(1);
    m.at(0, 0) = 1.0;
    CHECK(reward_query_independent(m) == std::vector<double>{0.0});
  }
  SECTION("identical sentences all normalize to one") {
    SimilarityMatrix m(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = 1.0;
    CHECK(reward_query_independent(m) == std::vector<double>{1.0, 1.0, 1.0});
  }
  SECTION("hand row sums") {
    SimilarityMatrix m(3);
    m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1.0;
    m.at(0, 1) = m.at(1, 0) = 0.5;
    m.at(0, 2) = m.at(2, 0) = 0.25;
    m.at(1, 2) = m.at(2, 1) = 0.0;
    // row sums: 0.75, 0.5, 0.25 -> normalized by 0.75
    const auto r = reward_query_independent(m);
    CHECK(r[0] == Catch::Approx(1.0));
    CHECK(r[1] == Catch::Approx(0.5 / 0.75));
    CHECK(r[2] == Catch::Approx(0.25 / 0.75));
  }
}

TEST_CASE("query-dependent rewards") {
  const std::vector<std::vector<std::string>> toks = {
      tokenize("cats sleep all day"),
      tokenize("solar panels generate"),
      tokenize("power from solar farms")};
  SECTION("hand counts with normalization") {
    // Query terms after stopword filtering: solar, power, "solar power";
    // the sentences match 0 / 1 / 2 of them.
    const auto r = reward_query_dependent(toks, "solar power");
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.5);
    CHECK(r[2] == 1.0);
  }
  SECTION("no overlap yields all zeros") {
    const auto r = reward_query_dependent(toks, "quantum gravity");
    CHECK(r == std::vector<double>(3, 0.0));
  }
}

TEST_CASE("build_features") {
  CorpusInstance inst;
  inst.instance_id = "t0";
  inst.sentences = {{"solar power is clean power", std::nullopt},
                    {"wind power is cheap", {7.5}},
                    {"cats sleep all day", std::nullopt}};
  inst.query = "solar power";
  inst.references = {"solar power is clean power"};
  inst.budget = 8.0;

  FeatureRecipe recipe;
  recipe.similarities = {{"u", "unigram_tfidf"}, {"b", "bigram_tfidf"}};
  recipe.clusterings = {{"k", "u", 2, std::nullopt}};
  recipe.rewards = {{"ri", "query_independent", "u"},
                    {"rq", "query_dependent", ""}};
  recipe.aux_costs = {{"wc", "word_count"}, {"one", "unit"}};
  recipe.seed = 11;

  SECTION("channel inventory matches the recipe") {
    const BuiltInstance b = build_features(inst, recipe);
    CHECK(b.features.similarities.count("u") == 1);
    CHECK(b.features.similarities.count("b") == 1);
    CHECK(b.features.similarities.size() == 2);
    CHECK(b.features.partitions.count("k") == 1);
    CHECK(b.features.rewards.size() == 2);
    CHECK(b.features.aux_costs.size() == 2);
    CHECK(b.table != nullptr);
    CHECK(b.ground.size() == 3);
  }
  SECTION("cost overrides pass through") {
    const BuiltInstance b = build_features(inst, recipe);
    CHECK(b.ground.costs[0] == 5.0);
    CHECK(b.ground.costs[1] == 7.5);
    CHECK(b.ground.costs[2] == 4.0);
  }
  SECTION("deterministic: identical inputs give identical channels") {
    const BuiltInstance a = build_features(inst, recipe);
    const BuiltInstance b = build_features(inst, recipe);
    CHECK(a.features.rewards == b.features.rewards);
    CHECK(a.features.aux_costs == b.features.aux_costs);
    for (const auto& [id, m] : a.features.similarities)
      CHECK(m.a == b.features.similarities.at(id).a);
    for (const auto& [id, p] : a.features.partitions)
      CHECK(p.clusters == b.features.partitions.at(id).clusters);
  }
  SECTION("empty instances are degenerate but valid") {
    CorpusInstance empty;
    empty.instance_id = "e";
    const BuiltInstance b = build_features(empty, recipe);
    CHECK(b.degenerate);
    CHECK(b.ground.size() == 0);
    CHECK(b.table == nullptr);
  }
  SECTION("missing query is a configuration error") {
    CorpusInstance no_query = inst;
    no_query.query.reset();
    CHECK_THROWS_AS(build_features(no_query, recipe), ConfigError);
  }
  SECTION("missing external channel is a configuration error") {
    FeatureRecipe r2 = recipe;
    r2.similarities.push_back({"x", "external"});
    CHECK_THROWS_AS(build_features(inst, r2), ConfigError);
  }
}

TEST_CASE("stock ensembles have the documented component counts") {
  const Ensemble fidelity = make_fidelity_ensemble();
  CHECK(fidelity.shells.size() == 15);
  for (const auto& s : fidelity.shells) CHECK(s.family == ShellFamily::Fidelity);

  const Ensemble query = make_query_focus_ensemble();
  CHECK(query.shells.size() == 25);
  int facility = 0, diversity = 0, fid = 0;
  for (const auto& s : query.shells) {
    facility += s.family == ShellFamily::ClusteredFacility;
    diversity += s.family == ShellFamily::Diversity;
    fid += s.family == ShellFamily::Fidelity;
  }
  CHECK(facility == 6);
  CHECK(diversity == 18);
  CHECK(fid == 1);
}
