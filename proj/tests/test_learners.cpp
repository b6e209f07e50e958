#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/errors.hpp"
#include "pcl/experiments.hpp"
#include "pcl/learners.hpp"

using namespace pcl;

namespace {

PartialConceptClass thresholds(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (std::size_t i = 0; i <= n; ++i) cs.push_back(PartialConcept::total(n, low_bits(n) & ~low_bits(i)));
  return {n, cs};
}

LabeledSample label_with(const PartialConcept& h, const std::vector<std::size_t>& xs) {
  LabeledSample s;
  for (auto x : xs) s.push_back({x, static_cast<std::uint8_t>(h[x] == Label::One)});
  return s;
}

}  // namespace

TEST_CASE("one-inclusion examples") {
  auto c = PartialConceptClass::from_strings({"000", "111"});
  CHECK(one_inclusion_predict(c, {{0, 1}, {1, 1}}, 2) == 1);
  CHECK(one_inclusion_predict(PartialConceptClass::from_strings({"010"}), {{0, 0}}, 1) == 1);
  CHECK_THROWS_AS(one_inclusion_predict(c, {{0, 1}, {1, 0}}, 2), ContractViolation);
}

TEST_CASE("one-inclusion leave-one-out is at most VC/n") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    std::size_t n = 3 + rng.below(3);
    auto c = experiments::generate_random_class(n, 2 + rng.below(12), 0.25, seed).cls;
    int vc = std::max(vc_dimension(c), 0);
    OneInclusionPredictor pred(c);
    for (const auto& h : c) {
      std::vector<std::size_t> xs;
      for (std::size_t x = 0; x < n; ++x)
        if (h.defined_at(x)) xs.push_back(x);
      if (xs.empty()) continue;
      auto s = label_with(h, xs);
      // Leaving out position i; the permutation average reduces to the mean over i.
      std::size_t mistakes = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        LabeledSample train;
        for (std::size_t j = 0; j < s.size(); ++j)
          if (j != i) train.push_back(s[j]);
        if (pred.predict(train, s[i].x) != s[i].y) ++mistakes;
      }
      CHECK(mistakes <= static_cast<std::size_t>(vc));
      auto o = pred.orientation(c[0].defined() | low_bits(n));
      CHECK(o.max_out_degree <= o.vc);
    }
  }
}

TEST_CASE("PAC plan follows the batch formulas") {
  auto p = pac_plan(1, 0.5, 0.25);
  CHECK(p.batches == 3);
  CHECK(p.batch_size == 8);
  CHECK(p.validation == static_cast<std::size_t>(std::ceil(64 * std::log(24.0))));
  CHECK(p.validation == 204);
  CHECK(p.required == 3 * 8 + 204);
  CHECK(pac_plan(0, 0.5, 0.25).batch_size == 8);
  CHECK(pac_plan(2, 0.2, 1.0).batches == 1);
  auto c = PartialConceptClass::from_strings({"000", "111"});
  CHECK_THROWS_AS(pac_learn_realizable(c, {{0, 1}}, 0.5, 0.25), SampleSizeError);
}

TEST_CASE("PAC wrapper learns a realizable target") {
  auto c = thresholds(6);
  auto target = c[2];
  auto plan = pac_plan(1, 0.2, 0.1);
  Rng rng(5);
  LabeledSample s;
  for (std::size_t i = 0; i < plan.required; ++i) {
    std::size_t x = rng.below(6);
    s.push_back({x, static_cast<std::uint8_t>(target[x] == Label::One)});
  }
  auto r = pac_learn_realizable(c, s, 0.2, 0.1);
  CHECK(empirical_error(r.hypothesis, s) <= Rational(1) / 5);
}

TEST_CASE("boosting compression is consistent and round-trips") {
  auto c = thresholds(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    auto target = c[rng.below(c.size())];
    LabeledSample s;
    for (int i = 0; i < 8; ++i) {
      std::size_t x = rng.below(8);
      s.push_back({x, static_cast<std::uint8_t>(target[x] == Label::One)});
    }
    auto r = alpha_boost_compress(c, s);
    CHECK(empirical_error(r.hypothesis, s) == 0);
    CHECK(r.compression.subsample.size() <= 3 * r.round_cap);
    CHECK(r.round_cap == static_cast<std::size_t>(std::ceil(72 * std::log(10.0))));
    auto back = reconstruct(c, r.compression);
    CHECK(back.materialize() == r.hypothesis.materialize());
    CHECK(empirical_error(back, s) == 0);
  }
  auto one = alpha_boost_compress(c, {{3, 1}});
  CHECK(one.rounds == 1);
  CHECK(one.compression.subsample.size() <= one.k);
}

TEST_CASE("LD compression") {
  auto c = PartialConceptClass::from_strings({"000", "111"});
  auto k = ld_compress(c, {{0, 1}, {1, 1}, {2, 1}});
  CHECK(k.subsample == LabeledSample{{0, 1}});
  CHECK(ld_compress(c, {{0, 0}, {2, 0}}).subsample.empty());
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    auto cls = experiments::generate_random_class(5, 1 + rng.below(16), 0.2, seed).cls;
    int ld = oracle::ld(cls.to_strings(), 5);
    const auto& h = cls[rng.below(cls.size())];
    LabeledSample s;
    for (int i = 0; i < 6; ++i) {
      std::size_t x = rng.below(5);
      if (h.defined_at(x)) s.push_back({x, static_cast<std::uint8_t>(h[x] == Label::One)});
    }
    auto comp = ld_compress(cls, s);
    CHECK(static_cast<int>(comp.size()) <= std::max(ld, 0));
    CHECK(empirical_error(reconstruct(cls, comp), s) == 0);
  }
}

TEST_CASE("reconstruction round trip over every small realizable sample") {
  for (const auto& cls : {thresholds(4), PartialConceptClass::from_strings({"01*", "0*1", "*11", "100"})}) {
    const std::size_t n = cls.domain_size();
    // Every sequence of up to 4 labeled points.
    std::vector<LabeledSample> frontier{{}};
    for (int len = 1; len <= 4; ++len) {
      std::vector<LabeledSample> next;
      for (const auto& s : frontier)
        for (std::size_t x = 0; x < n; ++x)
          for (std::uint8_t y = 0; y < 2; ++y) {
            auto t = s;
            t.push_back({x, y});
            if (!is_realizable(cls, t)) continue;
            next.push_back(t);
            CHECK(empirical_error(reconstruct(cls, ld_compress(cls, t)), t) == 0);
            CHECK(empirical_error(reconstruct(cls, alpha_boost_compress(cls, t).compression), t) == 0);
          }
      frontier = std::move(next);
    }
  }
  CHECK(reconstruct(PartialConceptClass::from_strings({"0110"}), CompressionOutput{}).materialize() ==
        PartialConcept::from_string("0110"));
}

TEST_CASE("corrupted bit strings are parse errors") {
  CHECK_THROWS_AS(bits_from_hex("zz", 8), ParseError);
  CHECK_THROWS_AS(bits_from_hex("f", 2), ParseError);
  CHECK(bits_to_hex(bits_from_hex("a5", 8)) == "a5");
  auto c = thresholds(4);
  CompressionOutput junk{{{0, 1}}, {1, 1, 1}};
  CHECK_THROWS_AS(reconstruct(c, junk), ParseError);
}

TEST_CASE("agnostic learner") {
  auto c = thresholds(5);
  LabeledSample clean{{0, 0}, {3, 1}, {4, 1}};
  CHECK(agnostic_learn(c, clean, 0.1).report.empirical_error == 0);
  auto h00 = PartialConceptClass::from_strings({"00"});
  auto r = agnostic_learn(h00, {{0, 0}, {1, 1}, {1, 0}}, 0.1);
  CHECK(r.hypothesis.materialize().to_string() == "00");
  CHECK(r.report.empirical_error == Rational(1) / 3);
  CHECK(r.report.class_error == Rational(1) / 3);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    LabeledSample s;
    for (int i = 0; i < 10; ++i) s.push_back({rng.below(5), static_cast<std::uint8_t>(rng.coin())});
    auto a = agnostic_learn(c, s, 0.1);
    CHECK(a.report.empirical_error <= class_empirical_error(c, s));
  }
}

TEST_CASE("structural risk minimisation") {
  auto learner = [](const PartialConceptClass& cls, const LabeledSample& s) {
    return alpha_boost_compress(cls, s).hypothesis;
  };
  std::vector<SrmLevel> h{{PartialConceptClass::from_strings({"0000"}), learner},
                          {thresholds(4), learner},
                          {PartialConceptClass::from_strings({"0000", "1111", "0101", "1010", "0011"}), learner}};
  auto r = srm_select(h, {{0, 0}, {1, 0}}, 0.1, SrmMode::Realizable);
  CHECK(r.index == 1);
  auto t = srm_select(h, {{0, 0}, {3, 1}}, 0.1, SrmMode::Realizable);
  CHECK(t.index == 2);
  std::vector<SrmLevel> bad{{PartialConceptClass::from_strings({"0000"}), learner}};
  CHECK_THROWS_AS(srm_select(bad, {{0, 1}}, 0.1, SrmMode::Realizable), ContractViolation);
  auto agnostic = [](const PartialConceptClass& cls, const LabeledSample& s) {
    return agnostic_learn(cls, s, 0.1).hypothesis;
  };
  for (auto& level : h) level.learner = agnostic;
  auto a = srm_select(h, {{0, 1}, {1, 0}, {2, 1}, {3, 0}, {0, 0}}, 0.1, SrmMode::Agnostic);
  for (double s : a.scores) CHECK(a.bound <= s);
}
