#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "pcl/disambiguation.hpp"
#include "pcl/errors.hpp"
#include "pcl/geometry.hpp"

using namespace pcl;
using namespace pcl::geometry;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector v1(double a) {
  Vector v(1);
  v << a;
  return v;
}

EuclideanDataset pair_data(double gamma) {
  EuclideanDataset d;
  d.points = {v2(1, 0), v2(-1, 0)};
  d.labels = {1, 0};
  d.radius = 1;
  d.gamma = gamma;
  return d;
}

}  // namespace

TEST_CASE("separability examples") {
  auto r = separability(pair_data(1));
  CHECK(r.separable);
  CHECK(r.ball_radius == doctest::Approx(1));
  CHECK(r.hull_distance == doctest::Approx(2));
  CHECK_FALSE(is_r_gamma_separable(pair_data(1.01)));

  EuclideanDataset one;
  one.points = {v2(0.3, 0.4)};
  one.labels = {1};
  one.radius = 0.5;
  CHECK(is_r_gamma_separable(one));
  CHECK(std::isinf(separability(one).hull_distance));
}

TEST_CASE("minimum enclosing ball and hull distance") {
  auto b = minimum_enclosing_ball({v2(0, 0), v2(2, 0), v2(1, 1)});
  CHECK(b.exact);
  CHECK(b.radius == doctest::Approx(1));
  CHECK((b.center - v2(1, 0)).norm() == doctest::Approx(0).epsilon(1e-9));
  // Two segments at distance 1.
  auto h = hull_distance({v2(0, 0), v2(0, 2)}, {v2(1, 1), v2(3, 1)});
  CHECK(h.distance == doctest::Approx(1));
  CHECK(h.converged);
  CHECK(std::isinf(hull_distance({v2(0, 0)}, {}).distance));
}

TEST_CASE("perceptron") {
  EuclideanDataset s = pair_data(1);
  s.points.clear();
  s.labels.clear();
  for (int i = 0; i < 10; ++i) {
    s.points.push_back(v2(1, 0));
    s.labels.push_back(1);
    s.points.push_back(v2(-1, 0));
    s.labels.push_back(0);
  }
  auto r = perceptron_run(s);
  CHECK(r.mistakes <= 5);
  CHECK(static_cast<double>(r.mistakes) <= r.bound);
  PerceptronOptions warm;
  warm.initial = r.weights;
  CHECK(perceptron_run(s, warm).mistakes == 0);
}

TEST_CASE("perceptron stays under its bound on the orthonormal instance") {
  auto inst = orthonormal_shattering_instance(3, 1);
  REQUIRE(inst.points.size() == 9);
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    EuclideanDataset s = inst;
    for (auto& l : s.labels) l = static_cast<std::uint8_t>(rng.coin());
    EuclideanDataset stream = s;
    stream.points.clear();
    stream.labels.clear();
    for (int pass = 0; pass < 5; ++pass) {
      std::vector<std::size_t> order(s.points.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng.engine());
      for (auto i : order) {
        stream.points.push_back(s.points[i]);
        stream.labels.push_back(s.labels[i]);
      }
    }
    auto r = perceptron_run(stream);
    CHECK(static_cast<double>(r.mistakes) <= r.bound);
  }
}

TEST_CASE("orthonormal shattering certificates") {
  auto c1 = certify_orthonormal_shattering(1, 1);
  CHECK(c1.points == 1);
  CHECK(c1.labelings == 2);
  CHECK(c1.all_certified());
  auto c2 = certify_orthonormal_shattering(2, 1);
  CHECK(c2.points == 4);
  CHECK(c2.labelings == 16);
  CHECK(c2.all_certified());
  CHECK(certify_orthonormal_shattering(3, 1).all_certified());
}

TEST_CASE("gamma realizability examples") {
  auto b = TotalConceptClass::from_strings({"01"});
  CHECK(gamma_realizable_check(b, {{0, 0}, {1, 1}}, 1.0).realizable);
  auto one_err = gamma_realizable_check(b, {{0, 0}, {1, 0}}, Rational(0));
  // The adversary puts all its mass on the erring point.
  CHECK(one_err.value == 1);
  CHECK_FALSE(one_err.realizable);
  CHECK(gamma_realizable_check(b, {{0, 0}, {1, 0}}, Rational(-1)).realizable);
  auto opp = TotalConceptClass::from_strings({"0", "1"});
  CHECK(gamma_realizable_check(opp, {{0, 1}}, 1.0).realizable);
  CHECK(gamma_realizable_check(opp, {{0, 0}}, 1.0).realizable);
}

TEST_CASE("gamma realizability agrees with a grid adversary") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng.below(3);
    std::vector<PartialConcept> base;
    for (std::size_t k = 0, cnt = 1 + rng.below(4); k < cnt; ++k)
      base.push_back(PartialConcept::total(n, rng.below(bit(n))));
    TotalConceptClass b(n, base);
    LabeledSample s;
    for (std::size_t x = 0; x < n; ++x) s.push_back({x, static_cast<std::uint8_t>(rng.coin())});
    std::vector<std::vector<int>> err;
    for (const auto& h : b) {
      std::vector<int> row;
      for (auto e : s) row.push_back((h[e.x] == Label::One) != (e.y == 1));
      err.push_back(row);
    }
    auto rep = gamma_realizable_check(b, s, Rational(0));
    auto [g16, d16] = oracle::grid_game_value(err, 16);
    CHECK(Rational(g16) / d16 <= rep.value);
    CHECK(rep.value <= Rational(g16 + 2) / d16);
    auto [g48, d48] = oracle::grid_game_value(err, 48);
    CHECK(rep.value == Rational(g48) / d48);
  }
}

TEST_CASE("boosting disambiguation of a gamma-realizable sample") {
  auto b = TotalConceptClass::from_strings({"110", "011", "101"});
  LabeledSample s{{0, 1}, {1, 1}, {2, 1}};
  auto rep = gamma_realizable_check(b, s, Rational(1, 3));
  CHECK(rep.value == Rational(1, 3));
  CHECK(rep.realizable);
  auto r = boosting_disambiguate_sample(b, s, 1.0 / 3);
  CHECK(empirical_error(r.hypothesis, s) == 0);
  CHECK(r.chosen.size() <= r.cap);

  auto single = boosting_disambiguate_sample(TotalConceptClass::from_strings({"010", "111"}),
                                             {{0, 0}, {1, 1}}, 1.0);
  CHECK(single.chosen.size() == 1);
  CHECK(empirical_error(single.hypothesis, {{0, 0}, {1, 1}}) == 0);

  CHECK_THROWS_AS(boosting_disambiguate_sample(TotalConceptClass::from_strings({"000"}), s, 0.5),
                  AlgorithmFailure);
}

TEST_CASE("greedy packing and Voronoi cells") {
  auto p = greedy_packing({v1(0), v1(0.5), v1(1)}, 1.0);
  CHECK(p.chosen == std::vector<std::size_t>{0, 1, 2});
  auto single = greedy_packing({v2(0.2, 0.2)}, 0.5);
  CHECK(single.chosen.size() == 1);
  CHECK(single.cell == std::vector<std::size_t>{0});

  auto grid = grid_points(5);
  CHECK(grid.size() == 25);
  auto g = greedy_packing(grid, 0.6);
  CHECK(max_cell_diameter(grid, g) < 0.6);
  for (std::size_t i = 0; i < g.chosen.size(); ++i)
    for (std::size_t j = i + 1; j < g.chosen.size(); ++j)
      CHECK((grid[g.chosen[i]] - grid[g.chosen[j]]).norm() >= 0.3 - 1e-12);
  for (const auto& x : grid) {
    double best = std::numeric_limits<double>::infinity();
    for (auto c : g.chosen) best = std::min(best, (grid[c] - x).norm());
    CHECK(best < 0.3);
  }
}

TEST_CASE("greedy packing is maximum on small grids") {
  auto grid = grid_points(3);
  for (double gamma : {0.6, 1.0, 1.2, 1.5, 2.2}) {
    CAPTURE(gamma);
    CHECK(greedy_packing(grid, gamma).chosen.size() == max_packing(grid, gamma / 2).size());
  }
}

TEST_CASE("Voronoi disambiguation matches separated labelings") {
  auto pts = grid_points(3);
  auto packing = greedy_packing(pts, 0.6);
  auto cls = separated_class(pts, 0.6);
  for (const auto& h : cls) {
    std::vector<Label> lab;
    for (std::size_t i = 0; i < pts.size(); ++i) lab.push_back(h[i]);
    CHECK(is_gamma_separated_labeling(pts, lab, 0.6));
    auto out = voronoi_disambiguate(packing, lab);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (lab[i] != Label::Star) CHECK(out[i] == static_cast<std::uint8_t>(lab[i]));
  }
  CHECK(is_disambiguation(cls, voronoi_class(packing), CheckMode::strong()));
}

TEST_CASE("ERM failure simulation") {
  auto r = erm_failure_simulate(20, 5, 1000, 7);
  CHECK(r.improper_mean == 0);
  CHECK(to_double(r.proper_mean) >= 0.2);
  auto full = erm_failure_simulate(4, 60, 200, 3);
  CHECK(to_double(full.proper_mean) < 0.01);
  CHECK_THROWS(erm_failure_simulate(5, 2, 10, 1));
}
