#include "doctest.h"

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/errors.hpp"
#include "pcl/experiments.hpp"

using namespace pcl;

namespace {

PartialConceptClass zero_star(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (Mask m = 0; m < bit(n); ++m) cs.push_back(PartialConcept(n, m, 0));
  return {n, cs};
}

PartialConceptClass one_star(std::size_t n) {
  std::vector<PartialConcept> cs;
  for (Mask m = 0; m < bit(n); ++m) cs.push_back(PartialConcept(n, m, m));
  return {n, cs};
}

// Re-runs the strength-majority procedure on strings.
std::string majority_extension(const oracle::Rows& h, const std::string& c, std::size_t& updates) {
  const std::size_t n = c.size();
  oracle::Rows cur = h;
  std::string out(n, '0');
  updates = 0;
  for (std::size_t x = 0; x < n; ++x) {
    auto r0 = oracle::restrict(cur, x, '0');
    auto r1 = oracle::restrict(cur, x, '1');
    std::uint64_t s0 = r0.empty() ? 0 : oracle::strength(r0, n);
    std::uint64_t s1 = r1.empty() ? 0 : oracle::strength(r1, n);
    char m = s1 > s0 ? '1' : '0';
    if (c[x] != '*' && c[x] != m) {
      m = c[x];
      cur = m == '1' ? r1 : r0;
      ++updates;
    }
    out[x] = m;
  }
  return out;
}

double binom_sum(std::size_t n, double upto) {
  double s = 0;
  for (std::size_t i = 0; i <= n && static_cast<double>(i) <= upto + 1e-12; ++i)
    s += std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)));
  return s;
}

}  // namespace

TEST_CASE("majority disambiguation examples") {
  auto d = vc_majority_disambiguate(zero_star(2));
  CHECK(d.totals.as_partial().to_strings() == std::vector<std::string>{"00"});
  for (auto u : d.updates) CHECK(u == 0);

  auto e = vc_majority_disambiguate(PartialConceptClass::from_strings({"000", "111"}));
  CHECK(e.totals.as_partial().to_strings() == std::vector<std::string>{"000", "111"});
  for (auto u : e.updates) CHECK(u <= 2);
}

TEST_CASE("majority disambiguation matches a string re-implementation") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    std::size_t n = 2 + rng.below(4);
    auto g = experiments::generate_random_class(n, 2 + rng.below(8), 0.3, seed);
    const auto& c = g.cls;
    auto rows = c.to_strings();
    auto d = vc_majority_disambiguate(c);
    auto ds = vc_majority_disambiguate(c, Parallelism::Serial);
    CHECK(d.totals.as_partial() == ds.totals.as_partial());
    REQUIRE(d.sources.size() == c.size());
    const double s = static_cast<double>(oracle::strength(rows, n));
    std::size_t max_u = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::size_t u = 0;
      CHECK(d.extensions[i].to_string() == majority_extension(rows, d.sources[i].to_string(), u));
      CHECK(d.updates[i] == u);
      CHECK(static_cast<double>(u) <= std::log2(s) + 1e-12);
      max_u = std::max(max_u, u);
    }
    CHECK(is_disambiguation(c, d.totals, CheckMode::strong()));
    CHECK(static_cast<double>(d.totals.size()) <= binom_sum(n, static_cast<double>(max_u)));
    int vc = oracle::vc(rows, n);
    CHECK(static_cast<double>(d.totals.size()) <= binom_sum(n, 1 + vc * std::log2(n)));
    CHECK(d.stats.at("halving_ok") == 1);
  }
}

TEST_CASE("weighted disambiguation") {
  auto z = weighted_disambiguate(zero_star(3), 0);
  CHECK(z.totals.as_partial().to_strings() == std::vector<std::string>{"000"});
  for (const auto& p : z.prefix_updates)
    for (auto u : p) CHECK(u == 0);

  auto padded = PartialConceptClass::from_strings({"0**", "1**"});
  auto w = weighted_disambiguate(padded, 1);
  CHECK(w.totals.size() == 2);
  CHECK(is_disambiguation(padded, w.totals, CheckMode::strong()));
  for (const auto& p : w.prefix_updates)
    for (std::size_t m = 1; m <= p.size(); ++m)
      CHECK(static_cast<double>(p[m - 1]) <= 2 * std::log2(static_cast<double>(m)) + 2);

  CHECK_THROWS_AS(weighted_disambiguate(padded, 2), ContractViolation);

  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    auto c = experiments::generate_random_class(6, 10, 0.3, seed).cls;
    int d = vc_dimension(c);
    auto r = weighted_disambiguate(c, d);
    CHECK(is_disambiguation(c, r.totals, CheckMode::strong()));
    CHECK(r.stats.at("halving_ok") == 1);
    for (const auto& p : r.prefix_updates)
      for (std::size_t m = 1; m <= p.size(); ++m)
        CHECK(static_cast<double>(p[m - 1]) <= (d + 1) * std::log2(static_cast<double>(m)) + 2 + 1e-12);
  }
}

TEST_CASE("compression-based disambiguation") {
  auto single = PartialConceptClass::from_strings({"01*"});
  auto s = compression_to_disambiguation(single, ld_compression_scheme(single), 0);
  CHECK(s.totals.size() == 1);

  auto c = PartialConceptClass::from_strings({"000", "111"});
  auto d = compression_to_disambiguation(c, ld_compression_scheme(c), 1);
  CHECK(d.totals.size() <= 3 * 2 * 2);
  CHECK(d.totals.as_partial().contains(PartialConcept::from_string("000")));
  CHECK(d.totals.as_partial().contains(PartialConcept::from_string("111")));
  CHECK(is_disambiguation(c, d.totals, CheckMode::weak(3)));

  CompressionScheme broken = ld_compression_scheme(c);
  broken.reconstruct = [](const CompressionOutput&) { return Hypothesis::constant(3, 0); };
  CHECK_THROWS_AS(compression_to_disambiguation(c, broken, 1), SchemeInconsistency);
}

TEST_CASE("star partition of K4") {
  auto inst = complete_graph_star_partition(4);
  auto c = biclique_class(inst);
  CHECK(c.domain_size() == 3);
  CHECK(c.to_strings() == std::vector<std::string>{"0**", "10*", "110", "111"});
  CHECK(vc_dimension(c) == 1);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      std::set<std::pair<char, char>> pats;
      for (const auto& r : c.to_strings())
        if (r[a] != '*' && r[b] != '*') pats.insert({r[a], r[b]});
      CHECK(pats.size() <= 2);
    }
}

TEST_CASE("biclique validation names the offending edge") {
  BicliqueInstance bad{3, {{0, 1}, {1, 2}}, {{{0}, {1}}}};
  CHECK_THROWS_AS(validate_biclique(bad), ValidationError);
  BicliqueInstance overlap{2, {{0, 1}}, {{{0}, {1}}, {{0}, {1}}}};
  CHECK_THROWS_AS(validate_biclique(overlap), ValidationError);
  try {
    validate_biclique(bad);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("coloring lower bound") {
  for (std::size_t m : {4u, 8u}) {
    auto inst = complete_graph_star_partition(m);
    auto d = vc_majority_disambiguate(biclique_class(inst));
    auto cert = certify_coloring_lower_bound(inst, d);
    CHECK(cert.is_proper);
    CHECK(cert.colors_used >= m);
  }
  BicliqueInstance edge{2, {{0, 1}}, {{{0}, {1}}}};
  auto cert = certify_coloring_lower_bound(edge, vc_majority_disambiguate(biclique_class(edge)));
  CHECK(cert.is_proper);
  CHECK(cert.colors_used == 2);
}

TEST_CASE("support indicator disambiguation") {
  auto total = PartialConceptClass::from_strings({"01", "10"});
  CHECK(support_indicator_disambiguation(total).totals.as_partial() == total);
  auto s = support_indicator_disambiguation(PartialConceptClass::from_strings({"1*", "*1"}));
  CHECK(s.totals.size() == 2);
  CHECK(s.totals.as_partial().contains(PartialConcept::from_string("10")));
  CHECK(s.totals.as_partial().contains(PartialConcept::from_string("01")));
  auto z = support_indicator_disambiguation(zero_star(3));
  CHECK(z.totals.as_partial().to_strings() == std::vector<std::string>{"000"});
  CHECK(z.stats.at("vc") == 0);
}

TEST_CASE("majority composition") {
  for (std::size_t n = 2; n <= 4; ++n) {
    auto comp = majority_compose({zero_star(n), one_star(n)}, TernaryFunction::pairwise_majority());
    CHECK(vc_dimension(comp) == static_cast<int>(n));
  }
  auto c = PartialConceptClass::from_strings({"01*", "1*0"});
  CHECK(majority_compose({c}, TernaryFunction::identity()) == c);
  CHECK(majority_compose({c}, TernaryFunction::support_indicator()) ==
        support_indicator_disambiguation(c).totals.as_partial());
  CHECK_THROWS(majority_compose({c}, TernaryFunction::pairwise_majority()));
}

TEST_CASE("disambiguation checks") {
  auto c = PartialConceptClass::from_strings({"000", "111"});
  CHECK(is_disambiguation(c, c, CheckMode::strong()));
  CHECK_FALSE(is_disambiguation(PartialConceptClass::from_strings({"0*", "*1"}),
                                PartialConceptClass::from_strings({"00"}), CheckMode::strong()));
  auto k4 = biclique_class(complete_graph_star_partition(4));
  auto forced = PartialConceptClass::from_strings({"000", "100", "110", "111"});
  CHECK(is_disambiguation(k4, forced, CheckMode::weak(3)));
}
