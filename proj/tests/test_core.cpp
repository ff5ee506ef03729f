#include <catch2/catch_amalgamated.hpp>

#include "submix/set_function.hpp"
#include "submix/shells.hpp"
#include "submix/verify.hpp"

using namespace submix;

namespace {

class CardinalitySquared : public SetFunction {
 public:
  explicit CardinalitySquared(int n) : SetFunction(n, true, false) {}

 protected:
  double eval_sorted(const Subset& s) const override {
    return static_cast<double>(s.size()) * static_cast<double>(s.size());
  }
};

class NegCardinality : public SetFunction {
 public:
  explicit NegCardinality(int n) : SetFunction(n, false, true) {}

 protected:
  double eval_sorted(const Subset& s) const override {
    return -static_cast<double>(s.size());
  }
};

class ConstantFunction : public SetFunction {
 public:
  explicit ConstantFunction(int n, double v)
      : SetFunction(n, true, true), v_(v) {}

 protected:
  double eval_sorted(const Subset&) const override { return v_; }

 private:
  double v_;
};

}  // namespace

TEST_CASE("modular evaluation and gains") {
  ModularFunction f({1.0, 2.0, 3.0});
  CHECK(f.value_canonical({0, 2}) == 4.0);
  CHECK(f.value_canonical({}) == 0.0);
  CHECK(f.gain({0}, 2) == 3.0);

  const int unordered[] = {2, 0};
  CHECK(f.value(unordered) == 4.0);
}

TEST_CASE("evaluation rejects bad subsets") {
  ModularFunction f({1.0, 2.0, 3.0});
  const int out_of_range[] = {0, 3};
  CHECK_THROWS_AS(f.value(out_of_range), std::out_of_range);
  const int dup[] = {1, 1};
  CHECK_THROWS_AS(f.value(dup), std::invalid_argument);
  CHECK_THROWS_AS(f.gain({1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(f.gain({1}, 7), std::out_of_range);
}

TEST_CASE("evaluation is order independent, bit for bit") {
  RngStream rng(7, "order");
  RandomInstance ri = random_instance(rng, 9);
  for (int rep = 0; rep < 20; ++rep) {
    SetFunctionPtr f = instantiate(random_shell_spec(rng), ri.features, ri.ground);
    std::vector<int> elems;
    for (int i = 0; i < 9; ++i)
      if (rng.coin()) elems.push_back(i);
    const double forward = f->value(elems);
    std::reverse(elems.begin(), elems.end());
    const double backward = f->value(elems);
    rng.shuffle(elems);
    const double shuffled = f->value(elems);
    CHECK(forward == backward);
    CHECK(forward == shuffled);
  }
}

TEST_CASE("marginal gain matches the definitional difference") {
  RngStream rng(11, "gain");
  RandomInstance ri = random_instance(rng, 10);
  for (int rep = 0; rep < 50; ++rep) {
    SetFunctionPtr f = instantiate(random_shell_spec(rng), ri.features, ri.ground);
    Subset s;
    int v = rng.index(10);
    for (int i = 0; i < 10; ++i)
      if (i != v && rng.coin()) s.push_back(i);
    const double direct =
        f->value_canonical(subset_with(s, v)) - f->value_canonical(s);
    CHECK(std::abs(f->gain(s, v) - direct) <= 1e-12);
  }
}

TEST_CASE("monotone shells have nonnegative gains") {
  RngStream rng(3, "monogain");
  RandomInstance ri = random_instance(rng, 8);
  for (int rep = 0; rep < 20; ++rep) {
    SetFunctionPtr f = instantiate(random_shell_spec(rng), ri.features, ri.ground);
    REQUIRE(f->declared_monotone());
    Subset s;
    int v = rng.index(8);
    for (int i = 0; i < 8; ++i)
      if (i != v && rng.coin()) s.push_back(i);
    CHECK(f->gain(s, v) >= -kPropertyTol);
  }
}

TEST_CASE("mixture construction rejects negative weights") {
  auto f = std::make_shared<ModularFunction>(std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(Mixture({f, f}, {1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("mixture evaluation") {
  auto f = std::make_shared<ModularFunction>(std::vector<double>{1.0, 2.0, 3.0});
  SECTION("all-zero weights give the zero function") {
    Mixture m({f, f}, {0.0, 0.0});
    CHECK(m.value_canonical({0, 1, 2}) == 0.0);
  }
  SECTION("identity mixture equals its component") {
    Mixture m({f}, {1.0});
    CHECK(m.value_canonical({1, 2}) == f->value_canonical({1, 2}));
  }
  SECTION("matches componentwise recomputation on random shells") {
    RngStream rng(23, "mix");
    RandomInstance ri = random_instance(rng, 8);
    std::vector<SetFunctionPtr> comps;
    std::vector<double> ws;
    for (int i = 0; i < 3; ++i) {
      comps.push_back(instantiate(random_shell_spec(rng), ri.features, ri.ground));
      ws.push_back(rng.real01());
    }
    Mixture m(comps, ws);
    for (int rep = 0; rep < 20; ++rep) {
      Subset s;
      for (int i = 0; i < 8; ++i)
        if (rng.coin()) s.push_back(i);
      double expect = 0.0;
      for (std::size_t i = 0; i < comps.size(); ++i)
        expect += ws[i] * comps[i]->value_canonical(s);
      CHECK(m.value_canonical(s) == Catch::Approx(expect).margin(1e-12));
    }
  }
}

TEST_CASE("submodularity checker") {
  SECTION("modular functions pass with equality") {
    ModularFunction f({0.5, 1.5, 2.5, 0.1});
    const auto rep = check_submodular(f, 500, 42);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_gap == 0.0);
  }
  SECTION("|S|^2 is flagged") {
    CardinalitySquared f(10);
    const auto rep = check_submodular(f, 1000, 42);
    CHECK(rep.violations > 0);
    CHECK(rep.worst_gap > 0.0);
  }
  SECTION("degenerate ground sets yield zero trials") {
    ModularFunction f({1.0});
    const auto rep = check_submodular(f, 100, 42);
    CHECK(rep.trials == 0);
    CHECK(rep.violations == 0);
  }
  SECTION("deterministic under a fixed seed") {
    CardinalitySquared f(10);
    const auto a = check_submodular(f, 200, 9);
    const auto b = check_submodular(f, 200, 9);
    CHECK(a.violations == b.violations);
    CHECK(a.worst_gap == b.worst_gap);
  }
}

TEST_CASE("monotonicity checker") {
  SECTION("decreasing function is flagged") {
    NegCardinality f(8);
    const auto rep = check_monotone(f, 500, 1);
    CHECK(rep.violations > 0);
  }
  SECTION("constant function passes with zero gap") {
    ConstantFunction f(8, 3.25);
    const auto rep = check_monotone(f, 500, 1);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_gap == 0.0);
  }
}

TEST_CASE("conical mixtures of shells stay submodular and monotone") {
  RngStream rng(77, "closure");
  RandomInstance ri = random_instance(rng, 12);
  std::vector<SetFunctionPtr> comps;
  std::vector<double> ws;
  for (int i = 0; i < 5; ++i) {
    comps.push_back(instantiate(random_shell_spec(rng), ri.features, ri.ground));
    ws.push_back(rng.real01());
  }
  Mixture m(std::move(comps), std::move(ws));
  CHECK(check_submodular(m, 1000, 5).violations == 0);
  CHECK(check_monotone(m, 1000, 5).violations == 0);
}

TEST_CASE("empty ground set is legal and shells return zero on it") {
  GroundSet ground(std::vector<double>{});
  InstanceFeatures feats;
  feats.add_rewards("r", {});
  feats.add_similarity("s", SimilarityMatrix(0));
  feats.add_partition("p", Partition{}, 0);
  feats.add_aux_costs("c", {});
  for (ShellFamily fam :
       {ShellFamily::Modular, ShellFamily::Diversity,
        ShellFamily::ClusteredFacility, ShellFamily::Fidelity,
        ShellFamily::Truncation}) {
    RngStream rng(1, "empty");
    SetFunctionPtr f = instantiate(random_shell_spec(rng, fam), feats, ground);
    CHECK(f->value_canonical({}) == 0.0);
  }
}

TEST_CASE("ground set rejects negative costs") {
  CHECK_THROWS_AS(GroundSet(std::vector<double>{1.0, -0.5}),
                  std::invalid_argument);
}

TEST_CASE("subset lexicographic order") {
  CHECK(subset_lex_less({}, {0}));
  CHECK(subset_lex_less({0}, {0, 1}));
  CHECK(subset_lex_less({0, 1}, {0, 2}));
  CHECK(subset_lex_less({0, 2}, {1}));
  CHECK_FALSE(subset_lex_less({1}, {0, 2}));
}
