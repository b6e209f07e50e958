#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/online.hpp"
#include "pcl/rational.hpp"

namespace pcl {

// Total predictor over a finite domain: an explicit total concept or a
// majority vote of sub-hypotheses (ties go to 0).
class Hypothesis {
 public:
  Hypothesis() = default;
  static Hypothesis total(PartialConcept c);
  static Hypothesis constant(std::size_t n, std::uint8_t label);
  static Hypothesis majority(std::size_t n, std::vector<Hypothesis> parts);

  std::size_t domain_size() const { return n_; }
  std::uint8_t operator()(std::size_t x) const;
  PartialConcept materialize() const;
  bool is_composite() const { return std::holds_alternative<std::vector<Hypothesis>>(body_); }
  std::size_t parts() const;

 private:
  std::size_t n_ = 0;
  std::variant<PartialConcept, std::vector<Hypothesis>> body_;
};

Rational empirical_error(const Hypothesis& h, const LabeledSample& sample);
Rational population_error(const Hypothesis& h, const FiniteDistribution& p);

// Transductive one-inclusion graph predictor with a per-point-set orientation cache.
class OneInclusionPredictor {
 public:
  struct Orientation {
    std::vector<std::size_t> points;  // sorted domain points; pattern bit j = label of points[j]
    std::vector<Mask> patterns;       // sorted realizable total patterns
    std::vector<Mask> out;            // per vertex: coordinates whose edge leaves the vertex
    int vc = 0;
    int max_out_degree = 0;
  };

  explicit OneInclusionPredictor(PartialConceptClass cls);
  const PartialConceptClass& cls() const { return cls_; }

  std::uint8_t predict(const LabeledSample& train, std::size_t test);
  const Orientation& orientation(Mask point_set);
  // Full prediction over the domain for a fixed training set.
  Hypothesis hypothesis(const LabeledSample& train);

 private:
  PartialConceptClass cls_;
  std::map<Mask, Orientation> cache_;
};

std::uint8_t one_inclusion_predict(const PartialConceptClass& cls, const LabeledSample& train,
                                   std::size_t test);

struct CompressionOutput {
  LabeledSample subsample;
  std::vector<std::uint8_t> bits;
  std::size_t size() const { return subsample.size() + bits.size(); }
};

std::string bits_to_hex(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> bits_from_hex(const std::string& hex, std::size_t bit_length);

struct PacPlan {
  int vc = 1;  // floored at 1
  std::size_t batches = 0;      // k
  std::size_t batch_size = 0;   // n
  std::size_t validation = 0;   // t
  std::size_t required = 0;     // k*n + t
};

PacPlan pac_plan(int vc, double epsilon, double delta);

struct PacResult {
  Hypothesis hypothesis;
  PacPlan plan;
  std::size_t chosen = 0;
  std::vector<Rational> validation_errors;
};

PacResult pac_learn_realizable(const PartialConceptClass& cls, const LabeledSample& sample,
                               double epsilon, double delta);

struct BoostOptions {
  std::uint64_t seed = 0x5eed;
  std::size_t random_tries = 256;
  std::size_t exhaustive_budget = 200000;
  // Rounds cap; 0 means ceil(72 ln(m+2)).
  std::size_t max_rounds = 0;
};

struct BoostResult {
  Hypothesis hypothesis;
  CompressionOutput compression;
  std::size_t rounds = 0;
  std::size_t k = 0;
  std::size_t round_cap = 0;
};

std::size_t boost_round_cap(std::size_t sample_size);
BoostResult alpha_boost_compress(const PartialConceptClass& cls, const LabeledSample& sample,
                                 const BoostOptions& opt = {});
CompressionOutput ld_compress(const PartialConceptClass& cls, const LabeledSample& sample);
// Empty bits select the SOA reconstruction, otherwise the boosted majority.
Hypothesis reconstruct(const PartialConceptClass& cls, const CompressionOutput& comp);

struct AgnosticReport {
  Rational empirical_error;
  Rational class_error;
  std::vector<std::size_t> realizable_indices;
  std::size_t compression_size = 0;
  double constant = 4;
  double bound = 0;  // êr + sqrt(êr*B) + B with B = a(|κ| ln m + ln(1/δ))/m
};

struct AgnosticResult {
  Hypothesis hypothesis;
  AgnosticReport report;
};

AgnosticResult agnostic_learn(const PartialConceptClass& cls, const LabeledSample& sample,
                              double delta, const BoostOptions& opt = {});

using BatchLearner = std::function<Hypothesis(const PartialConceptClass&, const LabeledSample&)>;

struct SrmLevel {
  PartialConceptClass cls;
  BatchLearner learner;
};

enum class SrmMode { Realizable, Agnostic };

struct SrmResult {
  std::size_t index = 0;  // 1-based position in the hierarchy
  Hypothesis hypothesis;
  double bound = 0;
  std::vector<double> scores;  // per level; +inf where not eligible
};

// Penalty B_i(n, δ) = a (VC_i log^2 n + log(1/δ)) / n, evaluated at δ/(i(i+1)).
double srm_penalty(int vc, std::size_t n, double delta, double a);
SrmResult srm_select(const std::vector<SrmLevel>& hierarchy, const LabeledSample& sample,
                     double delta, SrmMode mode, double a = 4);

}  // namespace pcl
