#include "doctest.h"

#include "oracles.hpp"
#include "pcl/core.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/errors.hpp"
#include "pcl/rational.hpp"

using namespace pcl;

namespace {
Rational q(long a, long b) { return Rational(a) / b; }
}

TEST_CASE("partial concept round-trips through its string form") {
  auto h = PartialConcept::from_string("01*");
  CHECK(h.size() == 3);
  CHECK(h[0] == Label::Zero);
  CHECK(h[1] == Label::One);
  CHECK(h[2] == Label::Star);
  CHECK(h.to_string() == "01*");
  CHECK(h.support() == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(h.is_total());
  CHECK_THROWS_AS(PartialConcept::from_string("01x"), Error);
  CHECK_THROWS_AS(h.at(3), DomainError);
}

TEST_CASE("class deduplicates and sorts") {
  auto c = PartialConceptClass::from_strings({"111", "000", "111"});
  CHECK(c.size() == 2);
  CHECK(c.to_strings() == std::vector<std::string>{"000", "111"});
  CHECK(c.is_total());
}

TEST_CASE("realizability") {
  auto h = PartialConceptClass::from_strings({"0*", "*0", "00"});
  CHECK(is_realizable(h, {{0, 0}, {1, 0}}));
  CHECK_FALSE(is_realizable(h, {{0, 1}}));
  auto k4 = biclique_class(complete_graph_star_partition(4));
  CHECK_FALSE(is_realizable(k4, {{0, 0}, {1, 1}}));
  CHECK(oracle::realizable(k4.to_strings(), {{0, 0}, {1, 1}}) == false);
  CHECK_THROWS_AS(is_realizable(h, {{2, 0}}), DomainError);
}

TEST_CASE("empirical error counts Star as an error") {
  CHECK(empirical_error(PartialConcept::from_string("000"), {{0, 0}, {1, 0}, {2, 0}}) == 0);
  CHECK(empirical_error(PartialConcept::from_string("***"), {{0, 0}, {1, 1}, {2, 0}, {0, 1}}) == 1);
  CHECK(empirical_error(PartialConcept::from_string("01*"), {{0, 0}, {1, 0}, {2, 1}}) == q(2, 3));
}

TEST_CASE("restrict") {
  auto r = restrict(PartialConceptClass::from_strings({"000", "111"}), 0, 1);
  REQUIRE(r);
  CHECK(r->to_strings() == std::vector<std::string>{"111"});
  CHECK_FALSE(restrict(PartialConceptClass::from_strings({"0*", "*0"}), 0, 1));
  auto r2 = restrict(PartialConceptClass::from_strings({"01*", "0*1", "*11"}), 1, 1);
  REQUIRE(r2);
  CHECK(*r2 == PartialConceptClass::from_strings({"01*", "*11"}));
}

TEST_CASE("distribution realizability") {
  auto h00 = PartialConceptClass::from_strings({"00"});
  CHECK(distribution_realizable(h00, FiniteDistribution::uniform(2, {{0, 0}, {1, 0}})));
  auto contradictory = FiniteDistribution::uniform(2, {{0, 0}, {0, 1}});
  CHECK_FALSE(distribution_realizable(h00, contradictory));
  CHECK_FALSE(distribution_realizable(PartialConceptClass::from_strings({"00", "11", "01", "10"}),
                                      contradictory));
  // Half-support concept of the ERM failure class, uniform on its support.
  auto ha = PartialConceptClass::from_strings({"00**", "**00", "0*0*"});
  CHECK(distribution_realizable(ha, FiniteDistribution::uniform(4, {{0, 0}, {1, 0}})));
}

TEST_CASE("distribution weights must sum to one") {
  CHECK_THROWS_AS(FiniteDistribution(2, {{{0, 0}, q(1, 3)}, {{1, 0}, q(1, 3)}}), ContractViolation);
  CHECK_THROWS_AS(FiniteDistribution(2, {{{0, 0}, q(-1, 2)}, {{1, 0}, q(3, 2)}}), ContractViolation);
  FiniteDistribution merged(2, {{{0, 0}, q(1, 4)}, {{0, 0}, q(1, 4)}, {{1, 1}, q(1, 2)}});
  CHECK(merged.atoms().size() == 2);
}

TEST_CASE("longest realizable subsequence") {
  auto cube = PartialConceptClass::from_strings({"00", "01", "10", "11"});
  CHECK(max_realizable_subsequence(cube, {{0, 1}, {1, 0}}).indices == std::vector<std::size_t>{0, 1});
  auto h00 = PartialConceptClass::from_strings({"00"});
  CHECK(max_realizable_subsequence(h00, {{0, 0}, {1, 1}, {1, 0}}).indices ==
        std::vector<std::size_t>{0, 2});
  CHECK(max_realizable_subsequence(PartialConceptClass::from_strings({"**"}), {{0, 0}, {1, 1}})
            .indices.empty());
}

TEST_CASE("exact approximation error") {
  ApproximationOptions exact{true};
  auto h00 = PartialConceptClass::from_strings({"00"});
  auto mixed = FiniteDistribution::uniform(2, {{0, 0}, {0, 1}});
  CHECK(approximation_error(h00, mixed, 1, exact) == q(1, 2));
  CHECK(approximation_error(h00, mixed, 2, exact) == q(1, 2));
  auto clean = FiniteDistribution::uniform(2, {{0, 0}, {1, 0}});
  for (std::size_t n = 1; n <= 3; ++n) CHECK(approximation_error(h00, clean, n, exact) == 0);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational("-2") == -2);
  CHECK(to_string(q(2, 4)) == "1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}
