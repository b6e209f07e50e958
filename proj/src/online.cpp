#include "pcl/online.hpp"

#include <algorithm>
#include <cmath>

#include "pcl/errors.hpp"

namespace pcl {

SoaPredictor::SoaPredictor(PartialConceptClass cls) : engine_(std::move(cls)) {}

std::uint8_t SoaPredictor::predict(const ConceptSet& version_space, std::size_t x) {
  if (x >= engine_.domain_size()) throw DomainError("point " + std::to_string(x) + " outside domain");
  const auto& idx = engine_.index();
  int l0 = engine_.ld(idx.restrict(version_space, x, 0));
  int l1 = engine_.ld(idx.restrict(version_space, x, 1));
  return l1 > l0 ? 1 : 0;
}

std::uint8_t SoaPredictor::predict(const LabeledSample& history, std::size_t x) {
  ConceptSet v = index().consistent(history);
  if (v.empty() || constraint_of(engine_.domain_size(), history).contradictory)
    throw ContractViolation("SOA history is not realizable");
  return predict(v, x);
}

std::uint8_t soa_predict(const PartialConceptClass& cls, const LabeledSample& history,
                         std::size_t x) {
  SoaPredictor p(cls);
  return p.predict(history, x);
}

SoaLearner::SoaLearner(PartialConceptClass cls)
    : soa_(std::move(cls)), version_(soa_.index().all()) {}

void SoaLearner::reset() { version_ = soa_.index().all(); }

double SoaLearner::predict(std::size_t x) { return soa_.predict(version_, x); }

void SoaLearner::observe(std::size_t x, std::uint8_t y) {
  version_ = soa_.index().restrict(version_, x, y);
}

FollowTheLeaderLearner::FollowTheLeaderLearner(PartialConceptClass cls)
    : cls_(std::move(cls)), losses_(cls_.size(), 0) {}

void FollowTheLeaderLearner::reset() { std::fill(losses_.begin(), losses_.end(), 0); }

double FollowTheLeaderLearner::predict(std::size_t x) {
  auto it = std::min_element(losses_.begin(), losses_.end());
  Label l = cls_[static_cast<std::size_t>(it - losses_.begin())].at(x);
  return l == Label::One ? 1.0 : 0.0;
}

void FollowTheLeaderLearner::observe(std::size_t x, std::uint8_t y) {
  for (std::size_t i = 0; i < cls_.size(); ++i) {
    Label l = cls_[i].at(x);
    if (l == Label::Star || static_cast<std::uint8_t>(l) != y) ++losses_[i];
  }
}

double experts_regret_bound(std::size_t horizon, std::size_t experts) {
  return std::sqrt(0.5 * static_cast<double>(horizon) * std::log(static_cast<double>(experts)));
}

ExponentialWeights::ExponentialWeights(std::size_t experts, std::size_t horizon)
    : eta_(0), losses_(experts, 0.0) {
  if (experts == 0 || horizon == 0) throw ContractViolation("experts need N >= 1 and T >= 1");
  eta_ = std::sqrt(8.0 * std::log(static_cast<double>(experts)) / static_cast<double>(horizon));
}

double ExponentialWeights::mixture(const std::vector<double>& predictions) const {
  if (predictions.size() != losses_.size()) throw ContractViolation("expert count mismatch");
  double lmin = *std::min_element(losses_.begin(), losses_.end());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < losses_.size(); ++i) {
    double w = std::exp(-eta_ * (losses_[i] - lmin));
    num += w * predictions[i];
    den += w;
  }
  return std::clamp(num / den, 0.0, 1.0);
}

void ExponentialWeights::update(const std::vector<double>& predictions, double outcome) {
  for (std::size_t i = 0; i < losses_.size(); ++i) losses_[i] += std::abs(predictions[i] - outcome);
}

ExpertsResult experts_aggregate(const std::vector<std::vector<double>>& predictions,
                                const std::vector<double>& outcomes) {
  const std::size_t t_len = predictions.size();
  if (t_len == 0 || outcomes.size() != t_len) throw ContractViolation("need T >= 1 rounds with outcomes");
  const std::size_t n = predictions.front().size();
  ExponentialWeights ew(n, t_len);
  ExpertsResult r;
  r.eta = ew.eta();
  for (std::size_t t = 0; t < t_len; ++t) {
    const auto& row = predictions[t];
    for (double v : row)
      if (!(v >= 0 && v <= 1)) throw ContractViolation("expert prediction outside [0,1]");
    if (!(outcomes[t] >= 0 && outcomes[t] <= 1)) throw ContractViolation("outcome outside [0,1]");
    double m = ew.mixture(row);
    r.mixture.push_back(m);
    r.loss += std::abs(m - outcomes[t]);
    ew.update(row, outcomes[t]);
  }
  r.best_expert_loss = *std::min_element(ew.losses().begin(), ew.losses().end());
  r.regret = r.loss - r.best_expert_loss;
  r.bound = experts_regret_bound(t_len, n);
  return r;
}

namespace {

std::vector<std::uint64_t> index_sets(std::size_t horizon, int max_size) {
  std::vector<std::uint64_t> out;
  for (int k = 0; k <= max_size && k <= static_cast<int>(horizon); ++k) {
    if (k == 0) {
      out.push_back(0);
      continue;
    }
    std::uint64_t s = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << horizon;
    while (s < limit) {
      out.push_back(s);
      std::uint64_t c = s & -s;
      std::uint64_t r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
  }
  return out;
}

std::size_t count_index_sets(std::size_t horizon, int max_size) {
  std::size_t total = 0, binom = 1;
  for (int k = 0; k <= max_size && k <= static_cast<int>(horizon); ++k) {
    total += binom;
    binom = binom * (horizon - static_cast<std::size_t>(k)) / static_cast<std::size_t>(k + 1);
  }
  return total;
}

}  // namespace

AgnosticOnlineLearner::AgnosticOnlineLearner(PartialConceptClass cls, std::size_t horizon,
                                             AgnosticOnlineOptions opt)
    : soa_(std::move(cls)), horizon_(horizon), ld_(0), weights_(1, 1) {
  if (horizon == 0) throw ContractViolation("horizon must be positive");
  ld_ = soa_.engine().ld();
  if (horizon > opt.max_horizon || horizon > 63)
    throw BudgetError("horizon " + std::to_string(horizon) + " exceeds budget " +
                      std::to_string(opt.max_horizon));
  if (ld_ > opt.max_ld)
    throw BudgetError("Littlestone dimension " + std::to_string(ld_) + " exceeds budget " +
                      std::to_string(opt.max_ld));
  std::size_t n = count_index_sets(horizon, ld_);
  if (n > opt.max_experts)
    throw BudgetError("expert count " + std::to_string(n) + " exceeds budget " +
                      std::to_string(opt.max_experts));
  flips_ = index_sets(horizon, ld_);
  reset();
}

void AgnosticOnlineLearner::reset() {
  histories_.assign(flips_.size(), soa_.index().all());
  current_.assign(flips_.size(), 0.0);
  weights_ = ExponentialWeights(flips_.size(), horizon_);
  round_ = 0;
  pending_ = false;
}

double AgnosticOnlineLearner::predict(std::size_t x) {
  if (round_ >= horizon_) throw ContractViolation("agnostic learner used past its horizon");
  for (std::size_t i = 0; i < flips_.size(); ++i) {
    std::uint8_t base = soa_.predict(histories_[i], x);
    current_[i] = (flips_[i] >> round_ & 1) ? 1 - base : base;
  }
  pending_x_ = x;
  pending_ = true;
  return weights_.mixture(current_);
}

void AgnosticOnlineLearner::observe(std::size_t x, std::uint8_t y) {
  if (!pending_ || x != pending_x_) throw ContractViolation("observe must follow predict on the same point");
  weights_.update(current_, y);
  // Each expert's history holds its own flipped predictions, never the revealed labels.
  for (std::size_t i = 0; i < flips_.size(); ++i)
    if (flips_[i] >> round_ & 1)
      histories_[i] = soa_.index().restrict(histories_[i], x, static_cast<std::uint8_t>(current_[i]));
  ++round_;
  pending_ = false;
}

std::unique_ptr<AgnosticOnlineLearner> agnostic_online_learn(const PartialConceptClass& cls,
                                                             std::size_t horizon,
                                                             AgnosticOnlineOptions opt) {
  return std::make_unique<AgnosticOnlineLearner>(cls, horizon, opt);
}

std::size_t best_in_class_loss(const PartialConceptClass& cls, const LabeledSample& sequence) {
  check_sample(cls.domain_size(), sequence);
  std::size_t best = sequence.size();
  for (const auto& h : cls) {
    std::size_t loss = 0;
    for (const auto& e : sequence) {
      Label l = h[e.x];
      if (l == Label::Star || static_cast<std::uint8_t>(l) != e.y) ++loss;
    }
    best = std::min(best, loss);
  }
  return best;
}

OnlineTranscript play(OnlineLearner& learner, const PartialConceptClass& cls,
                      const LabeledSample& sequence, Rng& rng) {
  check_sample(cls.domain_size(), sequence);
  learner.reset();
  OnlineTranscript tr;
  for (const auto& e : sequence) {
    Round r;
    r.x = e.x;
    r.y = e.y;
    r.probability = learner.predict(e.x);
    if (r.probability <= 0) r.prediction = 0;
    else if (r.probability >= 1) r.prediction = 1;
    else r.prediction = rng.bernoulli(r.probability) ? 1 : 0;
    r.mistake = r.prediction != r.y;
    tr.mistakes += r.mistake;
    tr.expected_mistakes += std::abs(r.probability - r.y);
    learner.observe(e.x, e.y);
    tr.rounds.push_back(r);
  }
  tr.best_in_class = best_in_class_loss(cls, sequence);
  tr.regret = static_cast<std::int64_t>(tr.mistakes) - static_cast<std::int64_t>(tr.best_in_class);
  tr.expected_regret = tr.expected_mistakes - static_cast<double>(tr.best_in_class);
  return tr;
}

MistakeAdversary::MistakeAdversary(const PartialConceptClass& cls, std::size_t depth, Rng rng)
    : tree_(littlestone_tree(cls, depth)), rng_(rng) {}

MistakeAdversary::MistakeAdversary(LittlestoneTree tree, Rng rng) : tree_(std::move(tree)), rng_(rng) {}

std::uint8_t MistakeAdversary::reveal() {
  if (done()) throw ContractViolation("mistake adversary has no rounds left");
  std::uint8_t y = rng_.coin() ? 1 : 0;
  node_ = 2 * node_ + 1 + y;
  ++step_;
  return y;
}

double MonteCarloStats::standard_error() const {
  return trials == 0 ? 0.0 : stddev / std::sqrt(static_cast<double>(trials));
}

namespace {

MonteCarloStats summarize(const std::vector<double>& xs) {
  MonteCarloStats s;
  s.trials = xs.size();
  if (xs.empty()) return s;
  double sum = 0;
  for (double v : xs) sum += v;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0;
  for (double v : xs) ss += (v - s.mean) * (v - s.mean);
  s.stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

}  // namespace

MonteCarloStats mistake_game(OnlineLearner& learner, const LittlestoneTree& tree,
                             std::size_t trials, std::uint64_t seed) {
  std::vector<double> results;
  results.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    MistakeAdversary adv(tree, Rng::derive(seed, "mistake-game", t));
    Rng coin = Rng::derive(seed, "mistake-game-learner", t);
    learner.reset();
    std::size_t mistakes = 0;
    while (!adv.done()) {
      std::size_t x = adv.point();
      double p = learner.predict(x);
      std::uint8_t pred = p >= 1 ? 1 : (p <= 0 ? 0 : (coin.bernoulli(p) ? 1 : 0));
      std::uint8_t y = adv.reveal();
      mistakes += pred != y;
      learner.observe(x, y);
    }
    results.push_back(static_cast<double>(mistakes));
  }
  return summarize(results);
}

Rational exact_expected_mistakes(OnlineLearner& learner, const LittlestoneTree& tree) {
  if (tree.depth > 20) throw BudgetError("exact enumeration limited to depth 20");
  Rational total = 0;
  const std::uint64_t paths = std::uint64_t{1} << tree.depth;
  for (std::uint64_t b = 0; b < paths; ++b) {
    learner.reset();
    for (const auto& e : tree.path(b)) {
      double p = learner.predict(e.x);
      total += Rational(std::abs(p - e.y));
      learner.observe(e.x, e.y);
    }
  }
  return total / paths;
}

RegretAdversary::RegretAdversary(LittlestoneTree tree, std::size_t horizon)
    : tree_(std::move(tree)), horizon_(horizon) {
  if (tree_.depth == 0) throw ContractViolation("regret adversary needs depth >= 1");
  if (horizon_ < tree_.depth) throw ContractViolation("regret adversary needs T >= d");
}

LabeledSample RegretAdversary::generate(Rng& rng, std::vector<RegretBlock>* blocks) const {
  const std::size_t d = tree_.depth;
  const std::size_t k = horizon_ / d;
  LabeledSample out;
  out.reserve(horizon_);
  std::size_t node = 0;
  if (blocks) blocks->clear();
  for (std::size_t i = 0; i < d; ++i) {
    RegretBlock b;
    b.point = tree_.nodes[node];
    b.start = out.size();
    b.length = i + 1 == d ? horizon_ - k * (d - 1) : k;
    std::size_t ones = 0;
    for (std::size_t j = 0; j < b.length; ++j) {
      std::uint8_t y = rng.coin() ? 1 : 0;
      ones += y;
      out.push_back({b.point, y});
    }
    b.majority = 2 * ones > b.length ? 1 : 0;
    node = 2 * node + 1 + b.majority;
    if (blocks) blocks->push_back(b);
  }
  return out;
}

RegretAdversary regret_adversary(const PartialConceptClass& cls, std::size_t depth,
                                 std::size_t horizon) {
  return RegretAdversary(littlestone_tree(cls, depth), horizon);
}

MonteCarloStats regret_game(OnlineLearner& learner, const PartialConceptClass& cls,
                            const RegretAdversary& adversary, std::size_t trials,
                            std::uint64_t seed) {
  std::vector<double> results;
  results.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, "regret-game", t);
    LabeledSample seq = adversary.generate(rng);
    Rng coin = Rng::derive(seed, "regret-game-learner", t);
    results.push_back(play(learner, cls, seq, coin).expected_regret);
  }
  return summarize(results);
}

}  // namespace pcl
