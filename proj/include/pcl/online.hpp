#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/rational.hpp"
#include "pcl/rng.hpp"

namespace pcl {

// Standard Optimal Algorithm on top of a shared Littlestone memo.
class SoaPredictor {
 public:
  explicit SoaPredictor(PartialConceptClass cls);

  // Version-space form; an empty version space predicts 0.
  std::uint8_t predict(const ConceptSet& version_space, std::size_t x);
  // Throws ContractViolation if the history is not realizable.
  std::uint8_t predict(const LabeledSample& history, std::size_t x);

  LittlestoneEngine& engine() { return engine_; }
  const ClassIndex& index() const { return engine_.index(); }

 private:
  LittlestoneEngine engine_;
};

std::uint8_t soa_predict(const PartialConceptClass& cls, const LabeledSample& history,
                         std::size_t x);

class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;
  virtual std::string name() const = 0;
  virtual void reset() = 0;
  // Probability of predicting 1 at x.
  virtual double predict(std::size_t x) = 0;
  virtual void observe(std::size_t x, std::uint8_t y) = 0;
};

class SoaLearner : public OnlineLearner {
 public:
  explicit SoaLearner(PartialConceptClass cls);
  std::string name() const override { return "soa"; }
  void reset() override;
  double predict(std::size_t x) override;
  void observe(std::size_t x, std::uint8_t y) override;

 private:
  SoaPredictor soa_;
  ConceptSet version_;
};

class ConstantLearner : public OnlineLearner {
 public:
  explicit ConstantLearner(std::uint8_t label = 0) : label_(label) {}
  std::string name() const override { return "constant-" + std::to_string(label_); }
  void reset() override {}
  double predict(std::size_t) override { return label_; }
  void observe(std::size_t, std::uint8_t) override {}

 private:
  std::uint8_t label_;
};

// Predicts with the concept that has made the fewest mistakes so far
// (Star counts as a mistake; ties go to the smallest index; Star predicts 0).
class FollowTheLeaderLearner : public OnlineLearner {
 public:
  explicit FollowTheLeaderLearner(PartialConceptClass cls);
  std::string name() const override { return "follow-the-leader"; }
  void reset() override;
  double predict(std::size_t x) override;
  void observe(std::size_t x, std::uint8_t y) override;

 private:
  PartialConceptClass cls_;
  std::vector<std::size_t> losses_;
};

// Exponential weights with absolute loss and learning rate sqrt(8 ln N / T).
class ExponentialWeights {
 public:
  ExponentialWeights(std::size_t experts, std::size_t horizon);
  double eta() const { return eta_; }
  double mixture(const std::vector<double>& predictions) const;
  void update(const std::vector<double>& predictions, double outcome);
  const std::vector<double>& losses() const { return losses_; }

 private:
  double eta_;
  std::vector<double> losses_;
};

struct ExpertsResult {
  std::vector<double> mixture;  // per round
  double loss = 0;              // cumulative absolute loss of the mixture
  double best_expert_loss = 0;
  double regret = 0;
  double bound = 0;  // sqrt((T/2) ln N)
  double eta = 0;
};

// predictions is T x N, outcomes has length T; all values in [0,1].
ExpertsResult experts_aggregate(const std::vector<std::vector<double>>& predictions,
                                const std::vector<double>& outcomes);

double experts_regret_bound(std::size_t horizon, std::size_t experts);

struct AgnosticOnlineOptions {
  std::size_t max_horizon = 14;
  int max_ld = 3;
  std::size_t max_experts = 5000;
};

// Runs one SOA copy per index set J of at most LD rounds, each flipping its own
// prediction on the rounds in J, and mixes them with exponential weights.
class AgnosticOnlineLearner : public OnlineLearner {
 public:
  AgnosticOnlineLearner(PartialConceptClass cls, std::size_t horizon,
                        AgnosticOnlineOptions opt = {});
  std::string name() const override { return "agnostic-experts"; }
  void reset() override;
  double predict(std::size_t x) override;
  void observe(std::size_t x, std::uint8_t y) override;

  std::size_t expert_count() const { return flips_.size(); }
  int littlestone() const { return ld_; }
  std::size_t horizon() const { return horizon_; }
  double regret_bound() const { return experts_regret_bound(horizon_, flips_.size()); }

 private:
  SoaPredictor soa_;
  std::size_t horizon_;
  int ld_;
  std::vector<std::uint64_t> flips_;  // J as a bitmask over rounds
  std::vector<ConceptSet> histories_;
  std::vector<double> current_;
  std::size_t round_ = 0;
  std::size_t pending_x_ = 0;
  bool pending_ = false;
  ExponentialWeights weights_;
};

std::unique_ptr<AgnosticOnlineLearner> agnostic_online_learn(const PartialConceptClass& cls,
                                                             std::size_t horizon,
                                                             AgnosticOnlineOptions opt = {});

struct Round {
  std::size_t x = 0;
  double probability = 0;
  std::uint8_t prediction = 0;
  std::uint8_t y = 0;
  bool mistake = false;
};

struct OnlineTranscript {
  std::vector<Round> rounds;
  std::size_t mistakes = 0;
  double expected_mistakes = 0;  // sum of |p_t - y_t|
  std::size_t best_in_class = 0;
  std::int64_t regret = 0;
  double expected_regret = 0;
};

// min over h of the number of rounds with h(x_t) != y_t (Star is a mistake).
std::size_t best_in_class_loss(const PartialConceptClass& cls, const LabeledSample& sequence);

// Plays the sequence against the learner (after reset); randomized predictions are rounded with rng.
OnlineTranscript play(OnlineLearner& learner, const PartialConceptClass& cls,
                      const LabeledSample& sequence, Rng& rng);

// Walks a Littlestone tree along uniformly random branch bits.
class MistakeAdversary {
 public:
  MistakeAdversary(const PartialConceptClass& cls, std::size_t depth, Rng rng);
  MistakeAdversary(LittlestoneTree tree, Rng rng);

  bool done() const { return step_ == tree_.depth; }
  std::size_t point() const { return tree_.nodes[node_]; }
  // Draws the label for the current point and moves down the tree.
  std::uint8_t reveal();
  const LittlestoneTree& tree() const { return tree_; }

 private:
  LittlestoneTree tree_;
  Rng rng_;
  std::size_t node_ = 0;
  std::size_t step_ = 0;
};

struct MonteCarloStats {
  double mean = 0;
  double stddev = 0;  // sample standard deviation of one trial
  std::size_t trials = 0;
  double standard_error() const;
};

MonteCarloStats mistake_game(OnlineLearner& learner, const LittlestoneTree& tree,
                             std::size_t trials, std::uint64_t seed);
// Exact expectation over all 2^depth branch strings of sum |p_t - y_t|.
Rational exact_expected_mistakes(OnlineLearner& learner, const LittlestoneTree& tree);

struct RegretBlock {
  std::size_t point = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  std::uint8_t majority = 0;  // ties go to 0
};

// Oblivious block construction: d blocks of fair-coin labels at the tree nodes
// chosen by the majorities of the previous blocks; the last block absorbs the remainder.
class RegretAdversary {
 public:
  RegretAdversary(LittlestoneTree tree, std::size_t horizon);
  LabeledSample generate(Rng& rng, std::vector<RegretBlock>* blocks = nullptr) const;
  std::size_t horizon() const { return horizon_; }
  const LittlestoneTree& tree() const { return tree_; }

 private:
  LittlestoneTree tree_;
  std::size_t horizon_;
};

RegretAdversary regret_adversary(const PartialConceptClass& cls, std::size_t depth,
                                 std::size_t horizon);

// Regret measured with expected mistakes of the learner against the class optimum.
MonteCarloStats regret_game(OnlineLearner& learner, const PartialConceptClass& cls,
                            const RegretAdversary& adversary, std::size_t trials,
                            std::uint64_t seed);

}  // namespace pcl
