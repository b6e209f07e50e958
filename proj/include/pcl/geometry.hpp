#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcl/core.hpp"
#include "pcl/learners.hpp"
#include "pcl/rational.hpp"

namespace pcl::geometry {

using Vector = Eigen::VectorXd;

struct EuclideanDataset {
  std::vector<Vector> points;
  std::vector<std::uint8_t> labels;
  double radius = 1;  // R
  double gamma = 1;

  std::size_t dim() const { return points.empty() ? 0 : static_cast<std::size_t>(points[0].size()); }
  // Throws ContractViolation on ragged, empty-dimension or non-finite data.
  void validate() const;
};

struct Ball {
  Vector center;
  double radius = 0;
  bool exact = true;  // false when the iterative approximation was used
};

Ball minimum_enclosing_ball(const std::vector<Vector>& points);

struct HullDistance {
  double distance = 0;  // +inf if either side is empty
  Vector closest_a;     // in conv(a)
  Vector closest_b;     // in conv(b)
  std::size_t iterations = 0;
  bool converged = true;
};

// Minimum-norm point of conv(a) - conv(b) (Wolfe's method).
HullDistance hull_distance(const std::vector<Vector>& a, const std::vector<Vector>& b,
                           double tol = 1e-9);

struct SeparabilityReport {
  bool separable = false;
  bool marginal = false;  // one of the two quantities sits within tol of its threshold
  double ball_radius = 0;
  double hull_distance = 0;
};

SeparabilityReport separability(const EuclideanDataset& data, double tol = 1e-6);
bool is_r_gamma_separable(const EuclideanDataset& data, double tol = 1e-6);

struct PerceptronOptions {
  std::optional<Vector> initial;  // lifted weights (dimension D+1)
  std::size_t passes = 1;
  bool until_clean_pass = false;
  std::size_t max_updates = 1000000;
};

struct PerceptronReport {
  std::size_t mistakes = 0;
  bool converged = true;  // false if the update cap was hit
  Vector weights;         // lifted
  // Mistake bound (R'/rho)^2 for runs started at zero weights, where R' bounds the
  // lifted norms and rho is the lifted margin of the unit separator built from the
  // closest pair of the two hulls. Infinite if no such separator exists.
  double bound = 0;
  double lifted_radius = 0;
  double lifted_margin = 0;
  std::string formula;
};

PerceptronReport perceptron_run(const EuclideanDataset& stream, const PerceptronOptions& opt = {});

// Points R e_i for i < floor(R^2/gamma^2); labels all zero.
EuclideanDataset orthonormal_shattering_instance(double radius, double gamma);

struct ShatteringCertificate {
  std::size_t points = 0;
  std::uint64_t labelings = 0;
  std::uint64_t witness_ok = 0;  // labelings certified by w = (gamma/R)(sum_A e_i - sum_B e_i)
  std::uint64_t checker_ok = 0;  // labelings accepted by is_r_gamma_separable
  std::uint64_t disagreements = 0;
  std::uint64_t marginal = 0;
  bool all_certified() const {
    return witness_ok == labelings && checker_ok == labelings && disagreements == 0;
  }
};

ShatteringCertificate certify_orthonormal_shattering(double radius, double gamma);

struct GammaReport {
  bool realizable = false;
  Rational value;      // max over distributions of the best base error
  Rational threshold;  // (1 - gamma) / 2
  std::vector<PartialConcept> patterns;  // base concepts, one per distinct error profile
  std::vector<Rational> mixture;         // optimal distribution over `patterns`
  LabeledSample points;                  // distinct labeled sample points
  std::vector<Rational> adversary;       // optimal distribution over `points`
};

GammaReport gamma_realizable_check(const TotalConceptClass& base, const LabeledSample& sample,
                                   const Rational& gamma);
GammaReport gamma_realizable_check(const TotalConceptClass& base, const LabeledSample& sample,
                                   double gamma);

struct BoostingDisambiguationResult {
  Hypothesis hypothesis;
  std::vector<std::size_t> chosen;  // base indices per round
  std::size_t k = 0;
  std::size_t cap = 0;  // ceil(8 ln(m+2) / gamma^2)
  int dual_vc = 0;
  double envelope = 0;  // max(dual_vc, 1) / gamma^2
};

// Throws AlgorithmFailure if a round finds no base concept with error <= (1-gamma)/2
// or the cap is reached without a consistent vote.
BoostingDisambiguationResult boosting_disambiguate_sample(const TotalConceptClass& base,
                                                          const LabeledSample& sample,
                                                          double gamma);

struct PackingResult {
  std::vector<std::size_t> chosen;  // indices into the point list, in pick order
  double min_distance = 0;          // over chosen pairs; +inf below two points
  std::vector<std::size_t> cell;    // per point: position in `chosen` of its nearest center
};

// First-fit maximal (gamma/2)-packing in input order, with Voronoi cells (ties to
// the earlier center).
PackingResult greedy_packing(const std::vector<Vector>& points, double gamma);
// Nearest chosen center, ties to the smaller position.
std::size_t voronoi_cell(const std::vector<Vector>& points, const PackingResult& packing,
                         const Vector& x);
// Largest subset with pairwise distances >= separation (exhaustive; small inputs).
std::vector<std::size_t> max_packing(const std::vector<Vector>& points, double separation);
double max_cell_diameter(const std::vector<Vector>& points, const PackingResult& packing);

// Each cell takes the label of a supported point inside it (the first one), else 0.
std::vector<std::uint8_t> voronoi_disambiguate(const PackingResult& packing,
                                               const std::vector<Label>& labeling);
// The 2^m total concepts constant on cells (point count <= 64, m <= 20).
TotalConceptClass voronoi_class(const PackingResult& packing);
// Partial labeling whose differently labeled supported points are all >= gamma apart.
bool is_gamma_separated_labeling(const std::vector<Vector>& points,
                                 const std::vector<Label>& labeling, double gamma);
// Every partial concept on the points with cross-label distances >= gamma (n <= 12).
PartialConceptClass separated_class(const std::vector<Vector>& points, double gamma);

std::vector<Vector> grid_points(std::size_t side, double lo = 0, double hi = 1);

struct ErmFailureResult {
  Rational proper_mean;
  Rational improper_mean;
  std::size_t trials = 0;
};

// Target h_A with |A| = n/2 drawn uniformly, m draws from the uniform marginal on A.
// The proper learner completes the observed points to a random half; the improper
// learner predicts 0 everywhere.
ErmFailureResult erm_failure_simulate(std::size_t n, std::size_t m, std::size_t trials,
                                      std::uint64_t seed);

}  // namespace pcl::geometry
