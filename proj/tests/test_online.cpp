#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/errors.hpp"
#include "pcl/experiments.hpp"
#include "pcl/online.hpp"

using namespace pcl;

namespace {

PartialConceptClass cube(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (Mask m = 0; m < bit(n); ++m) cs.push_back(PartialConcept::total(n, m));
  return {n, cs};
}

// Deterministic learner that always answers 1 except at point 0.
class Quirky : public OnlineLearner {
 public:
  std::string name() const override { return "quirky"; }
  void reset() override { seen_ = 0; }
  double predict(std::size_t x) override { return x == 0 ? 0.0 : static_cast<double>(seen_ % 2); }
  void observe(std::size_t, std::uint8_t y) override { seen_ += y; }

 private:
  std::size_t seen_ = 0;
};

}  // namespace

TEST_CASE("SOA examples") {
  auto c = PartialConceptClass::from_strings({"000", "111"});
  CHECK(soa_predict(c, {}, 0) == 0);
  CHECK(soa_predict(c, {{0, 1}}, 1) == 1);
  CHECK_THROWS_AS(soa_predict(c, {{0, 1}, {1, 0}}, 2), ContractViolation);
}

TEST_CASE("SOA makes at most LD mistakes on every realizable sequence") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    std::size_t n = 2 + rng.below(3);
    auto c = experiments::generate_random_class(n, 1 + rng.below(8), 0.2, seed).cls;
    int ld = oracle::ld(c.to_strings(), n);
    SoaLearner soa(c);
    // Every sequence of length n over the domain labeled by some concept.
    for (const auto& h : c) {
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < n; ++i) total *= n;
      for (std::uint64_t code = 0; code < total; ++code) {
        LabeledSample seq;
        std::uint64_t t = code;
        for (std::size_t i = 0; i < n; ++i, t /= n) {
          std::size_t x = t % n;
          if (h.defined_at(x)) seq.push_back({x, static_cast<std::uint8_t>(h[x] == Label::One)});
        }
        Rng r(code);
        auto tr = play(soa, c, seq, r);
        CHECK(static_cast<int>(tr.mistakes) <= ld);
      }
    }
  }
}

TEST_CASE("Littlestone trees") {
  auto t = littlestone_tree(cube(3), 3);
  CHECK(t.nodes.size() == 7);
  CHECK(verify_littlestone_tree(cube(3), t));
  auto s = littlestone_tree(PartialConceptClass::from_strings({"000", "111"}), 1);
  CHECK(s.nodes.size() == 1);
  CHECK(verify_littlestone_tree(PartialConceptClass::from_strings({"000", "111"}), s));
}

TEST_CASE("mistake adversary expectations are exact") {
  auto c = PartialConceptClass::from_strings({"000", "111"});
  ConstantLearner zero(0);
  CHECK(exact_expected_mistakes(zero, littlestone_tree(c, 1)) == Rational(1, 2));
  auto t3 = littlestone_tree(cube(3), 3);
  SoaLearner soa(cube(3));
  CHECK(exact_expected_mistakes(soa, t3) == Rational(3, 2));
  Quirky q;
  CHECK(exact_expected_mistakes(q, t3) == Rational(3, 2));
  auto mc = mistake_game(soa, t3, 4000, 9);
  CHECK(mc.mean >= 1.5 - 3 * mc.standard_error());
  auto empty = mistake_game(zero, littlestone_tree(c, 0), 10, 1);
  CHECK(empty.mean == 0);
  CHECK_THROWS_AS(MistakeAdversary(c, 2, Rng(1)), ContractViolation);
}

TEST_CASE("experts examples") {
  auto one = experts_aggregate({{0.3}, {0.9}}, {1, 0});
  CHECK(one.regret == doctest::Approx(0.0));
  CHECK(one.mixture == std::vector<double>{0.3, 0.9});
  auto two = experts_aggregate({{0, 1}}, {1});
  CHECK(two.loss == doctest::Approx(0.5));
  CHECK(two.bound == doctest::Approx(std::sqrt(0.5 * std::log(2.0))));
  CHECK(two.bound == doctest::Approx(0.5887).epsilon(1e-4));
  CHECK(two.regret <= two.bound);
}

TEST_CASE("experts regret bound on random matrices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    std::size_t n = 1 + rng.below(16), t = 1 + rng.below(64);
    std::vector<std::vector<double>> p(t, std::vector<double>(n));
    std::vector<double> y(t);
    for (std::size_t i = 0; i < t; ++i) {
      for (auto& v : p[i]) v = rng.uniform();
      y[i] = rng.coin() ? 1.0 : 0.0;
    }
    auto r = experts_aggregate(p, y);
    // Independent loss accounting.
    double best = 1e300;
    for (std::size_t j = 0; j < n; ++j) {
      double l = 0;
      for (std::size_t i = 0; i < t; ++i) l += std::abs(p[i][j] - y[i]);
      best = std::min(best, l);
    }
    double loss = 0;
    for (std::size_t i = 0; i < t; ++i) loss += std::abs(r.mixture[i] - y[i]);
    CHECK(loss == doctest::Approx(r.loss));
    CHECK(best == doctest::Approx(r.best_expert_loss));
    CHECK(loss - best <= std::sqrt(t / 2.0 * std::log(static_cast<double>(n))) + 1e-12);
  }
}

TEST_CASE("agnostic online learner") {
  auto c = PartialConceptClass::from_strings({"0", "1"});
  auto l1 = agnostic_online_learn(c, 1);
  CHECK(l1->expert_count() == 2);
  CHECK(l1->regret_bound() == doctest::Approx(std::sqrt(0.5 * std::log(2.0))));

  auto c2 = PartialConceptClass::from_strings({"00*", "011", "10*", "*10"});
  int ld = littlestone_dimension(c2);
  auto l = agnostic_online_learn(c2, 12);
  std::size_t expect = 1;
  for (int i = 1; i <= ld; ++i) {
    std::size_t b = 1;
    for (int j = 0; j < i; ++j) b = b * (12 - static_cast<std::size_t>(j)) / static_cast<std::size_t>(j + 1);
    expect += b;
  }
  CHECK(l->expert_count() == expect);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    LabeledSample seq;
    for (int i = 0; i < 12; ++i) seq.push_back({rng.below(3), static_cast<std::uint8_t>(rng.coin())});
    auto tr = play(*l, c2, seq, rng);
    CHECK(tr.best_in_class == best_in_class_loss(c2, seq));
    CHECK(tr.expected_regret <= l->regret_bound() + ld + 1e-9);
  }
  CHECK_THROWS_AS(agnostic_online_learn(c2, 40), BudgetError);
}

TEST_CASE("regret adversary blocks") {
  auto c = PartialConceptClass::from_strings({"0", "1"});
  auto one = regret_adversary(c, 1, 1);
  Rng rng(3);
  CHECK(one.generate(rng).size() == 1);
  auto cu = cube(2);
  auto adv = regret_adversary(cu, 2, 7);
  std::vector<RegretBlock> blocks;
  auto seq = adv.generate(rng, &blocks);
  CHECK(seq.size() == 7);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].length == 3);
  CHECK(blocks[1].length == 4);

  auto big = regret_adversary(c, 1, 100);
  ConstantLearner zero(0);
  auto mc = regret_game(zero, c, big, 4000, 17);
  CHECK(mc.mean >= 2.5 - 3 * mc.standard_error());
}

TEST_CASE("transcript accounting") {
  auto c = PartialConceptClass::from_strings({"0*", "11"});
  ConstantLearner one(1);
  Rng rng(0);
  auto tr = play(one, c, {{0, 0}, {0, 0}, {1, 1}}, rng);
  CHECK(tr.mistakes == 2);
  CHECK(tr.best_in_class == 1);  // "0*" errs only at the Star; "11" errs twice
  CHECK(tr.regret == 1);
}
