#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/errors.hpp"
#include "pcl/experiments.hpp"
#include "pcl/kernels.hpp"

using namespace pcl;

namespace {

PartialConceptClass cube(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (Mask m = 0; m < bit(n); ++m) cs.push_back(PartialConcept::total(n, m));
  return {n, cs};
}

PartialConceptClass zero_star(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (Mask m = 0; m < bit(n); ++m) cs.push_back(PartialConcept(n, m, 0));
  return {n, cs};
}

PartialConceptClass thresholds(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (std::size_t i = 0; i <= n; ++i) cs.push_back(PartialConcept::total(n, low_bits(n) & ~low_bits(i)));
  return {n, cs};
}

std::vector<PartialConceptClass> random_classes(std::size_t count, std::uint64_t seed) {
  std::vector<PartialConceptClass> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t n = 1 + rng.below(5);
    std::size_t size = 1 + rng.below(std::min<std::size_t>(12, std::size_t{1} << n));
    double star = 0.1 * static_cast<double>(rng.below(6));
    out.push_back(experiments::generate_random_class(n, size, star, seed * 1000 + i).cls);
  }
  return out;
}

}  // namespace

TEST_CASE("VC dimension examples") {
  CHECK(vc_dimension(zero_star(3)) == 0);
  CHECK(vc_dimension(cube(3)) == 3);
  CHECK(vc_dimension(PartialConceptClass::from_strings({"000", "111"})) == 1);
}

TEST_CASE("Littlestone dimension examples") {
  CHECK(littlestone_dimension(zero_star(3)) == 0);
  CHECK(littlestone_dimension(cube(3)) == 3);
  CHECK(littlestone_dimension(thresholds(4)) == 2);
}

TEST_CASE("threshold dimension examples") {
  for (std::size_t n = 1; n <= 5; ++n) CHECK(threshold_dimension(thresholds(n)) == static_cast<int>(n));
  CHECK(threshold_dimension(zero_star(3)) == 0);
  auto k4 = biclique_class(complete_graph_star_partition(4));
  int td = threshold_dimension(k4);
  CHECK(td <= 2);
  CHECK(td == oracle::td(k4.to_strings(), 3));
}

TEST_CASE("shattering strength examples") {
  CHECK(shattering_strength(cube(2)) == 4);
  CHECK(shattering_strength(zero_star(2)) == 1);
  CHECK(shattering_strength(PartialConceptClass::from_strings({"000", "111"})) == 4);
}

TEST_CASE("multiclass dimension examples") {
  auto m = multiclass_dimensions(cube(2));
  CHECK(m.natarajan == 2);
  CHECK(m.support_vc == 0);
  auto p = multiclass_dimensions(PartialConceptClass::from_strings({"0*", "*0"}));
  CHECK(p.support_vc == 1);
  // Star counts as a third label here, so {0} is Natarajan-shattered by (0, *).
  CHECK(p.natarajan == 1);
  CHECK(p.natarajan == oracle::natarajan({"0*", "*0"}, 2));
}

TEST_CASE("dual VC dimension") {
  CHECK(dual_vc_dimension(PartialConceptClass::from_strings({"000"})) == 0);
  // A single non-constant concept: its points give both values on the one dual point.
  CHECK(dual_vc_dimension(PartialConceptClass::from_strings({"010"})) == 1);
  CHECK(dual_vc_dimension(cube(2)) == 1);
  CHECK(dual_vc_dimension(PartialConceptClass::from_strings({"100", "010", "001"})) == 1);
  CHECK_THROWS_AS(dual_vc_dimension(PartialConceptClass::from_strings({"0*"})), ContractViolation);
}

TEST_CASE("dimensions agree with brute force on random classes") {
  for (const auto& c : random_classes(120, 11)) {
    const auto rows = c.to_strings();
    const std::size_t n = c.domain_size();
    CAPTURE(rows);
    int vc = vc_dimension(c);
    int ld = littlestone_dimension(c);
    int td = threshold_dimension(c);
    CHECK(vc == oracle::vc(rows, n));
    CHECK(vc_dimension(c, Parallelism::Serial) == vc);
    CHECK(ld == oracle::ld(rows, n));
    CHECK(td == oracle::td(rows, n));
    CHECK(shattering_strength(c) == oracle::strength(rows, n));
    CHECK(natarajan_dimension(c) == oracle::natarajan(rows, n));
    CHECK(graph_dimension(c) == oracle::graph_dim(rows, n));
    CHECK(support_vc_dimension(c) == oracle::support_vc(rows, n));
    CHECK(vc <= ld);
    if (td > 0) CHECK(ld >= static_cast<int>(std::floor(std::log2(td))));
  }
}

TEST_CASE("strength halves under restriction") {
  for (const auto& c : random_classes(60, 12)) {
    auto s = shattering_strength(c);
    std::uint64_t bound = 0;
    for (int i = 0; i <= vc_dimension(c); ++i) {
      std::uint64_t b = 1;
      for (int j = 0; j < i; ++j) b = b * (c.domain_size() - static_cast<std::size_t>(j)) / static_cast<std::uint64_t>(j + 1);
      bound += b;
    }
    CHECK(s <= bound);
    for (std::size_t x = 0; x < c.domain_size(); ++x) {
      auto c0 = restrict(c, x, 0);
      auto c1 = restrict(c, x, 1);
      std::uint64_t s0 = c0 ? shattering_strength(*c0) : 0;
      std::uint64_t s1 = c1 ? shattering_strength(*c1) : 0;
      CHECK(s >= s0 + s1);
    }
  }
}

TEST_CASE("witnesses re-verify") {
  for (const auto& c : random_classes(60, 13)) {
    auto w = vc_witness(c);
    CHECK(static_cast<int>(w.size()) == vc_dimension(c));
    CHECK(verify_shattered(c, w));
    int ld = littlestone_dimension(c);
    auto t = littlestone_tree(c, static_cast<std::size_t>(ld));
    CHECK(verify_littlestone_tree(c, t));
    auto chain = threshold_chain(c);
    CHECK(static_cast<int>(chain.points.size()) == threshold_dimension(c));
    CHECK(verify_threshold_chain(c, chain));
    CHECK_THROWS_AS(littlestone_tree(c, static_cast<std::size_t>(ld + 1)), ContractViolation);
  }
}

TEST_CASE("serial and parallel kernels agree") {
  for (const auto& c : random_classes(80, 14)) {
    auto s = kernels::serial::shattered_sets(c.concepts(), c.domain_size());
    auto p = kernels::parallel::shattered_sets(c.concepts(), c.domain_size());
    CHECK(s.count == p.count);
    CHECK(s.max_size == p.max_size);
    CHECK(s.witness == p.witness);
  }
  auto big = cube(10);
  auto s = kernels::serial::shattered_sets(big.concepts(), 10);
  auto p = kernels::parallel::shattered_sets(big.concepts(), 10);
  CHECK(s.count == 1024);
  CHECK(p.count == 1024);
  CHECK(s.witness == p.witness);
}

TEST_CASE("dimension report carries witnesses on request") {
  auto c = cube(3);
  auto r = compute_dimension(c, "vc", true);
  CHECK(r.value == 3);
  REQUIRE(r.shattered_set);
  auto l = compute_dimension(c, "ld", true);
  REQUIRE(l.tree);
  CHECK(l.tree->depth == 3);
  CHECK(compute_dimension(c, "strength", false).value == 8);
  CHECK_THROWS(compute_dimension(c, "bogus", false));
}
