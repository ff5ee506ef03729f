#include <catch2/catch_amalgamated.hpp>

#include "submix/shells.hpp"
#include "submix/verify.hpp"

using namespace submix;

TEST_CASE("diversity formula") {
  Partition p{{{0, 1}, {2}}};
  std::vector<double> r{1.0, 1.0, 1.0};
  CHECK(diversity_eval({}, p, r, 0.5) == 0.0);
  CHECK(diversity_eval({0, 1, 2}, p, r, 0.5) == 1.0);
  // (sqrt(1)+sqrt(1)) / (sqrt(2)+sqrt(1))
  CHECK(diversity_eval({0, 2}, p, r, 0.5) ==
        Catch::Approx(0.8284271247461902).epsilon(1e-12));
  CHECK_THROWS_AS(diversity_eval({0}, p, r, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(diversity_eval({0}, p, r, -0.1), std::invalid_argument);
}

TEST_CASE("diversity with curvature 1 collapses to normalized modular") {
  RngStream rng(5, "div1");
  const int n = 9;
  std::vector<double> r(n);
  for (auto& x : r) x = rng.real01();
  double total = 0.0;
  for (double x : r) total += x;

  Partition p1{{{0, 3, 6}, {1, 4, 7}, {2, 5, 8}}};
  Partition p2{{{0, 1, 2, 3, 4}, {5, 6, 7, 8}}};
  for (int rep = 0; rep < 50; ++rep) {
    Subset s;
    for (int i = 0; i < n; ++i)
      if (rng.coin()) s.push_back(i);
    double rs = 0.0;
    for (int v : s) rs += r[static_cast<std::size_t>(v)];
    const double a = diversity_eval(s, p1, r, 1.0);
    const double b = diversity_eval(s, p2, r, 1.0);
    CHECK(std::abs(a - b) <= 1e-12);
    CHECK(a == Catch::Approx(rs / total).margin(1e-12));
  }
}

TEST_CASE("diversity zero-power convention keeps the empty set at zero") {
  Partition p{{{0, 1}, {2}}};
  std::vector<double> r{0.4, 0.0, 0.7};
  CHECK(diversity_eval({}, p, r, 0.0) == 0.0);
  // a=0 counts clusters with positive selected reward
  CHECK(diversity_eval({0}, p, r, 0.0) == Catch::Approx(0.5));
  CHECK(diversity_eval({1}, p, r, 0.0) == 0.0);  // zero-reward element
  CHECK(diversity_eval({0, 2}, p, r, 0.0) == 1.0);
}

TEST_CASE("all-zero rewards define diversity as zero") {
  Partition p{{{0, 1}}};
  std::vector<double> r{0.0, 0.0};
  CHECK(diversity_eval({0, 1}, p, r, 0.5) == 0.0);
}

TEST_CASE("clustered facility location formula") {
  Partition p{{{0, 1}, {2, 3}}};
  std::vector<double> r{0.2, 0.9, 0.5, 0.1};
  CHECK(cfacility_eval({}, p, r) == 0.0);
  CHECK(cfacility_eval({0, 1, 3}, p, r) == Catch::Approx(0.5).margin(1e-15));

  SECTION("single cluster is a plain max") {
    Partition one{{{0, 1, 2, 3}}};
    CHECK(cfacility_eval({0, 2}, one, r) == 0.5);
  }
  SECTION("an extra lower-reward element from a represented cluster adds zero") {
    const double before = cfacility_eval({1, 3}, p, r);
    const double after = cfacility_eval({0, 1, 3}, p, r);
    CHECK(after - before == 0.0);
  }
}

TEST_CASE("fidelity formula") {
  SECTION("identity-like similarity counts selected elements") {
    SimilarityMatrix m(4);
    for (int i = 0; i < 4; ++i) m.at(i, i) = 1.0;
    CHECK(fidelity_eval({}, m, 1.0) == 0.0);
    CHECK(fidelity_eval({1, 3}, m, 1.0) == Catch::Approx(0.5));
    CHECK(fidelity_eval({0, 1, 2, 3}, m, 1.0) == 1.0);
  }
  SECTION("full set saturates every ratio at alpha") {
    RngStream rng(2, "fid");
    const int n = 6;
    SimilarityMatrix m(n);
    for (int i = 0; i < n; ++i) {
      m.at(i, i) = rng.uniform(0.5, 1.0);
      for (int j = i + 1; j < n; ++j) {
        const double x = rng.real01();
        m.at(i, j) = x;
        m.at(j, i) = x;
      }
    }
    const double alpha = 0.37;
    CHECK(fidelity_eval({0, 1, 2, 3, 4, 5}, m, alpha) ==
          Catch::Approx(alpha).margin(1e-12));
  }
  SECTION("single element instance") {
    SimilarityMatrix m(1);
    m.at(0, 0) = 0.8;
    CHECK(fidelity_eval({0}, m, 0.45) == Catch::Approx(0.45));
  }
  SECTION("zero-mass rows contribute nothing") {
    SimilarityMatrix m(2);
    m.at(0, 0) = 1.0;  // row 1 all zero
    CHECK(fidelity_eval({0, 1}, m, 1.0) == Catch::Approx(0.5));
  }
  SECTION("saturation outside (0,1] is rejected") {
    SimilarityMatrix m(2);
    CHECK_THROWS_AS(fidelity_eval({0}, m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fidelity_eval({0}, m, 1.2), std::invalid_argument);
  }
}

TEST_CASE("truncation formula") {
  std::vector<double> c{1.0, 1.0, 1.0, 1.0};
  CHECK(truncation_eval({}, c, 0.5) == 0.0);
  CHECK(truncation_eval({0, 1, 2}, c, 0.5) == 2.0);
  CHECK(truncation_eval({0, 1}, c, 0.5) == 2.0);
  CHECK(truncation_eval({0}, c, 0.5) == 1.0);

  SECTION("unbounded threshold recovers the modular function") {
    std::vector<double> w{0.3, 1.7, 2.2};
    for (Subset s : {Subset{}, Subset{1}, Subset{0, 2}, Subset{0, 1, 2}}) {
      double direct = 0.0;
      for (int v : s) direct += w[static_cast<std::size_t>(v)];
      CHECK(truncation_eval(s, w, kUnboundedThreshold) == direct);
    }
  }
  SECTION("nonpositive threshold is rejected") {
    CHECK_THROWS_AS(truncation_eval({0}, c, 0.0), std::invalid_argument);
  }
}

TEST_CASE("set cover as a truncation mixture") {
  SECTION("full coverage") {
    std::vector<std::vector<int>> sets{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
    const Mixture m = setcover_from_truncations(sets, 3);
    CHECK(m.value_canonical({}) == 0.0);
    CHECK(m.value_canonical({1}) == 3.0);
    CHECK(m.value_canonical({0, 2}) == 3.0);
  }
  SECTION("exhaustive agreement with the direct union cardinality") {
    const auto res = verify_setcover(123, 5, 8, 12);
    CHECK(res.pass);
  }
}

TEST_CASE("instantiation resolves channels and validates parameters") {
  RngStream rng(9, "inst");
  RandomInstance ri = random_instance(rng, 8);

  SECTION("unresolved ids are configuration errors") {
    CHECK_THROWS_AS(instantiate(ShellSpec::modular("nope"), ri.features, ri.ground),
                    ConfigError);
    CHECK_THROWS_AS(
        instantiate(ShellSpec::fidelity(0.5, "nope"), ri.features, ri.ground),
        ConfigError);
    CHECK_THROWS_AS(
        instantiate(ShellSpec::diversity(0.5, "nope", "r"), ri.features, ri.ground),
        ConfigError);
  }
  SECTION("parameter ranges are enforced") {
    CHECK_THROWS_AS(
        instantiate(ShellSpec::diversity(1.5, "p", "r"), ri.features, ri.ground),
        std::invalid_argument);
    CHECK_THROWS_AS(
        instantiate(ShellSpec::fidelity(0.0, "s"), ri.features, ri.ground),
        std::invalid_argument);
    CHECK_THROWS_AS(
        instantiate(ShellSpec::truncation(0.0, "c"), ri.features, ri.ground),
        std::invalid_argument);
  }
  SECTION("every family instantiates and passes the property checks") {
    for (ShellFamily fam :
         {ShellFamily::Modular, ShellFamily::Diversity,
          ShellFamily::ClusteredFacility, ShellFamily::Fidelity,
          ShellFamily::Truncation}) {
      SetFunctionPtr f =
          instantiate(random_shell_spec(rng, fam), ri.features, ri.ground);
      REQUIRE(f->declared_monotone());
      CHECK(check_submodular(*f, 1000, 77).violations == 0);
      CHECK(check_monotone(*f, 1000, 77).violations == 0);
    }
  }
  SECTION("normalized families stay inside their declared ranges") {
    SetFunctionPtr div =
        instantiate(ShellSpec::diversity(0.6, "p", "r"), ri.features, ri.ground);
    const double alpha = 0.3;
    SetFunctionPtr fid =
        instantiate(ShellSpec::fidelity(alpha, "s"), ri.features, ri.ground);
    for (int rep = 0; rep < 100; ++rep) {
      Subset s;
      for (int i = 0; i < 8; ++i)
        if (rng.coin()) s.push_back(i);
      const double d = div->value_canonical(s);
      const double f = fid->value_canonical(s);
      CHECK((d >= 0.0 && d <= 1.0));
      CHECK((f >= 0.0 && f <= alpha + 1e-15));
    }
  }
}

TEST_CASE("instance feature validation") {
  SECTION("overlapping partitions are rejected") {
    InstanceFeatures f;
    CHECK_THROWS_AS(f.add_partition("p", Partition{{{0, 1}, {1, 2}}}, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(f.add_partition("p", Partition{{{0}}}, 2),
                    std::invalid_argument);
  }
  SECTION("asymmetric similarities are rejected") {
    SimilarityMatrix m(2);
    m.at(0, 1) = 0.5;
    InstanceFeatures f;
    CHECK_THROWS_AS(f.add_similarity("s", m), std::invalid_argument);
  }
  SECTION("rewards outside [0,1] are rejected") {
    InstanceFeatures f;
    CHECK_THROWS_AS(f.add_rewards("r", {0.2, 1.2}), std::invalid_argument);
    CHECK_THROWS_AS(f.add_rewards("r", {-0.1}), std::invalid_argument);
  }
}
