#include "pcl/learners.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

#include "pcl/dimensions.hpp"
#include "pcl/errors.hpp"

namespace pcl {

Hypothesis Hypothesis::total(PartialConcept c) {
  if (!c.is_total()) throw ContractViolation("hypothesis must be total");
  Hypothesis h;
  h.n_ = c.size();
  h.body_ = c;
  return h;
}

Hypothesis Hypothesis::constant(std::size_t n, std::uint8_t label) {
  return total(PartialConcept::total(n, label ? low_bits(n) : 0));
}

Hypothesis Hypothesis::majority(std::size_t n, std::vector<Hypothesis> parts) {
  for (const auto& p : parts)
    if (p.n_ != n) throw ContractViolation("majority parts have different domains");
  Hypothesis h;
  h.n_ = n;
  h.body_ = std::move(parts);
  return h;
}

std::uint8_t Hypothesis::operator()(std::size_t x) const {
  if (x >= n_) throw DomainError("point " + std::to_string(x) + " outside domain");
  if (const auto* c = std::get_if<PartialConcept>(&body_)) return c->ones() >> x & 1;
  const auto& parts = std::get<std::vector<Hypothesis>>(body_);
  std::size_t ones = 0;
  for (const auto& p : parts) ones += p(x);
  return 2 * ones > parts.size() ? 1 : 0;
}

PartialConcept Hypothesis::materialize() const {
  if (const auto* c = std::get_if<PartialConcept>(&body_)) return *c;
  Mask ones = 0;
  for (std::size_t x = 0; x < n_; ++x)
    if ((*this)(x)) ones |= bit(x);
  return PartialConcept::total(n_, ones);
}

std::size_t Hypothesis::parts() const {
  if (const auto* v = std::get_if<std::vector<Hypothesis>>(&body_)) return v->size();
  return 1;
}

Rational empirical_error(const Hypothesis& h, const LabeledSample& sample) {
  return empirical_error(h.materialize(), sample);
}

Rational population_error(const Hypothesis& h, const FiniteDistribution& p) {
  return population_error(h.materialize(), p);
}

OneInclusionPredictor::OneInclusionPredictor(PartialConceptClass cls) : cls_(std::move(cls)) {}

const OneInclusionPredictor::Orientation& OneInclusionPredictor::orientation(Mask point_set) {
  if (auto it = cache_.find(point_set); it != cache_.end()) return it->second;
  Orientation o;
  for (Mask m = point_set; m; m &= m - 1) o.points.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  const std::size_t width = o.points.size();
  for (const auto& h : cls_)
    if ((h.defined() & point_set) == point_set) o.patterns.push_back(extract_bits(h.ones(), point_set));
  std::sort(o.patterns.begin(), o.patterns.end());
  o.patterns.erase(std::unique(o.patterns.begin(), o.patterns.end()), o.patterns.end());

  std::vector<PartialConcept> induced;
  for (Mask p : o.patterns) induced.push_back(PartialConcept::total(width, p));
  o.vc = induced.empty() ? 0
                         : vc_dimension(PartialConceptClass(width, std::move(induced)), Parallelism::Serial);

  const std::size_t v = o.patterns.size();
  auto find = [&](Mask p) -> long {
    auto it = std::lower_bound(o.patterns.begin(), o.patterns.end(), p);
    return (it != o.patterns.end() && *it == p) ? static_cast<long>(it - o.patterns.begin()) : -1;
  };
  // Start with every edge pointing from the 0 side to the 1 side.
  o.out.assign(v, 0);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < width; ++j)
      if (!(o.patterns[i] >> j & 1) && find(o.patterns[i] | bit(j)) >= 0) o.out[i] |= bit(j);

  const int d = o.vc;
  auto degree = [&](std::size_t i) { return std::popcount(o.out[i]); };
  std::vector<long> parent(v);
  std::vector<int> via(v);
  for (std::size_t u = 0; u < v; ++u) {
    while (degree(u) > d) {
      // Breadth-first search along out-edges for a vertex with spare capacity.
      std::fill(parent.begin(), parent.end(), -2);
      std::deque<std::size_t> queue{u};
      parent[u] = -1;
      long target = -1;
      while (!queue.empty() && target < 0) {
        std::size_t a = queue.front();
        queue.pop_front();
        for (Mask m = o.out[a]; m; m &= m - 1) {
          int j = std::countr_zero(m);
          auto b = static_cast<std::size_t>(find(o.patterns[a] ^ bit(static_cast<std::size_t>(j))));
          if (parent[b] != -2) continue;
          parent[b] = static_cast<long>(a);
          via[b] = j;
          if (degree(b) < d) {
            target = static_cast<long>(b);
            break;
          }
          queue.push_back(b);
        }
      }
      if (target < 0)
        throw AlgorithmFailure("one-inclusion orientation: no augmenting path from a vertex of excess out-degree");
      for (auto b = static_cast<std::size_t>(target); parent[b] >= 0;) {
        auto a = static_cast<std::size_t>(parent[b]);
        Mask e = bit(static_cast<std::size_t>(via[b]));
        o.out[a] &= ~e;
        o.out[b] |= e;
        b = a;
      }
    }
  }
  for (std::size_t i = 0; i < v; ++i) o.max_out_degree = std::max(o.max_out_degree, degree(i));
  if (o.max_out_degree > d) throw AlgorithmFailure("one-inclusion orientation exceeds VC bound");
  return cache_.emplace(point_set, std::move(o)).first->second;
}

std::uint8_t OneInclusionPredictor::predict(const LabeledSample& train, std::size_t test) {
  if (test >= cls_.domain_size()) throw DomainError("test point outside domain");
  auto c = constraint_of(cls_.domain_size(), train);
  if (!is_realizable(cls_, train)) throw ContractViolation("one-inclusion training sample is not realizable");
  if (c.points & bit(test)) return (c.ones >> test & 1) ? 1 : 0;
  const Mask ps = c.points | bit(test);
  const auto& o = orientation(ps);
  const Mask train_bits = extract_bits(c.points, ps);
  const Mask train_vals = extract_bits(c.ones, ps);
  const Mask test_bit = extract_bits(bit(test), ps);
  long with0 = -1, with1 = -1;
  for (std::size_t i = 0; i < o.patterns.size(); ++i) {
    Mask p = o.patterns[i];
    if ((p & train_bits) != train_vals) continue;
    if (p & test_bit) with1 = static_cast<long>(i);
    else with0 = static_cast<long>(i);
  }
  if (with0 >= 0 && with1 >= 0) return (o.out[static_cast<std::size_t>(with0)] & test_bit) ? 1 : 0;
  if (with1 >= 0) return 1;
  return 0;
}

Hypothesis OneInclusionPredictor::hypothesis(const LabeledSample& train) {
  Mask ones = 0;
  for (std::size_t x = 0; x < cls_.domain_size(); ++x)
    if (predict(train, x)) ones |= bit(x);
  return Hypothesis::total(PartialConcept::total(cls_.domain_size(), ones));
}

std::uint8_t one_inclusion_predict(const PartialConceptClass& cls, const LabeledSample& train,
                                   std::size_t test) {
  OneInclusionPredictor p(cls);
  return p.predict(train, test);
}

std::string bits_to_hex(const std::vector<std::uint8_t>& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (std::size_t j = 0; j < 4; ++j) v = v * 2 + (i + j < bits.size() ? bits[i + j] : 0);
    out.push_back(digits[v]);
  }
  return out;
}

std::vector<std::uint8_t> bits_from_hex(const std::string& hex, std::size_t bit_length) {
  if (hex.size() != (bit_length + 3) / 4) throw ParseError("hex bit string has the wrong length");
  std::vector<std::uint8_t> bits;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ParseError(std::string("bad hex digit '") + c + "'");
    for (int j = 3; j >= 0; --j) bits.push_back(static_cast<std::uint8_t>(v >> j & 1));
  }
  for (std::size_t i = bit_length; i < bits.size(); ++i)
    if (bits[i]) throw ParseError("nonzero padding in hex bit string");
  bits.resize(bit_length);
  return bits;
}

PacPlan pac_plan(int vc, double epsilon, double delta) {
  if (!(epsilon > 0 && epsilon < 1)) throw ContractViolation("epsilon must be in (0,1)");
  if (!(delta > 0 && delta <= 1)) throw ContractViolation("delta must be in (0,1]");
  PacPlan p;
  p.vc = std::max(vc, 1);
  p.batches = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log2(2.0 / delta) - 1e-9)));
  p.batch_size = static_cast<std::size_t>(std::floor(4.0 * p.vc / epsilon + 1e-9));
  double k = static_cast<double>(p.batches);
  p.validation = static_cast<std::size_t>(std::ceil(32.0 / epsilon * std::log(2.0 * k / delta) - 1e-9));
  p.required = p.batches * p.batch_size + p.validation;
  return p;
}

PacResult pac_learn_realizable(const PartialConceptClass& cls, const LabeledSample& sample,
                               double epsilon, double delta) {
  check_sample(cls.domain_size(), sample);
  PacResult r;
  r.plan = pac_plan(vc_dimension(cls), epsilon, delta);
  if (sample.size() < r.plan.required) throw SampleSizeError(r.plan.required, sample.size());
  const auto& p = r.plan;
  LabeledSample validation(sample.begin() + static_cast<long>(p.batches * p.batch_size),
                           sample.begin() + static_cast<long>(p.required));
  OneInclusionPredictor oi(cls);
  std::vector<Hypothesis> hs;
  for (std::size_t i = 0; i < p.batches; ++i) {
    LabeledSample batch(sample.begin() + static_cast<long>(i * p.batch_size),
                        sample.begin() + static_cast<long>((i + 1) * p.batch_size));
    hs.push_back(oi.hypothesis(batch));
    r.validation_errors.push_back(empirical_error(hs.back(), validation));
  }
  r.chosen = static_cast<std::size_t>(
      std::min_element(r.validation_errors.begin(), r.validation_errors.end()) - r.validation_errors.begin());
  r.hypothesis = hs[r.chosen];
  return r;
}

namespace {

void gamma_encode(std::size_t v, std::vector<std::uint8_t>& out) {
  int width = static_cast<int>(std::bit_width(v));
  for (int i = 1; i < width; ++i) out.push_back(0);
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> i & 1));
}

std::size_t gamma_decode(const std::vector<std::uint8_t>& bits, std::size_t& pos) {
  std::size_t zeros = 0;
  while (pos < bits.size() && bits[pos] == 0) {
    ++zeros;
    ++pos;
  }
  if (pos >= bits.size() || zeros > 40) throw ParseError("truncated Elias-gamma code");
  std::size_t v = 0;
  for (std::size_t i = 0; i <= zeros; ++i) {
    if (pos >= bits.size()) throw ParseError("truncated Elias-gamma code");
    if (bits[pos] > 1) throw ParseError("bit string holds a non-bit value");
    v = v * 2 + bits[pos++];
  }
  return v;
}

struct WeakCandidate {
  std::vector<std::size_t> picks;  // indices into the sample
  PartialConcept prediction;
  double error = 2;
};

}  // namespace

std::size_t boost_round_cap(std::size_t sample_size) {
  return static_cast<std::size_t>(std::ceil(72.0 * std::log(static_cast<double>(sample_size) + 2.0)));
}

BoostResult alpha_boost_compress(const PartialConceptClass& cls, const LabeledSample& sample,
                                 const BoostOptions& opt) {
  check_sample(cls.domain_size(), sample);
  if (!is_realizable(cls, sample)) throw ContractViolation("boosting input sample is not realizable");
  const std::size_t n = cls.domain_size();
  const std::size_t m = sample.size();
  BoostResult r;
  r.k = 3 * static_cast<std::size_t>(std::max(vc_dimension(cls), 1));
  r.round_cap = opt.max_rounds ? opt.max_rounds : boost_round_cap(m);
  const double alpha = 0.5 * std::log(2.0);
  const double target = 1.0 / 3.0 + 1e-12;

  OneInclusionPredictor oi(cls);
  std::vector<double> w(m, m ? 1.0 / static_cast<double>(m) : 0.0);
  std::vector<std::size_t> votes(m, 0);
  std::vector<Hypothesis> parts;
  Rng rng = Rng::derive(opt.seed, "alpha-boost", m);

  auto evaluate = [&](const std::vector<std::size_t>& picks) {
    WeakCandidate c;
    c.picks = picks;
    LabeledSample train;
    for (auto i : picks) train.push_back(sample[i]);
    c.prediction = oi.hypothesis(train).materialize();
    c.error = 0;
    for (std::size_t i = 0; i < m; ++i)
      if ((c.prediction.ones() >> sample[i].x & 1) != sample[i].y) c.error += w[i];
    return c;
  };

  // Distinct (x, y) entries, for the exhaustive fallback.
  std::vector<std::size_t> distinct;
  {
    std::vector<Example> seen;
    for (std::size_t i = 0; i < m; ++i)
      if (std::find(seen.begin(), seen.end(), sample[i]) == seen.end()) {
        seen.push_back(sample[i]);
        distinct.push_back(i);
      }
  }

  auto consistent = [&] {
    for (std::size_t i = 0; i < m; ++i) {
      std::uint8_t maj = 2 * votes[i] > parts.size() ? 1 : 0;
      if (maj != sample[i].y) return false;
    }
    return true;
  };

  while (m > 0 && !consistent()) {
    if (parts.size() >= r.round_cap)
      throw AlgorithmFailure("boosting reached the round cap of " + std::to_string(r.round_cap) +
                             " without a consistent majority");
    std::vector<double> cdf(m);
    std::partial_sum(w.begin(), w.end(), cdf.begin());
    std::optional<WeakCandidate> found;
    for (std::size_t t = 0; t < opt.random_tries && !found; ++t) {
      std::vector<std::size_t> picks(r.k);
      for (auto& p : picks) {
        double u = rng.uniform() * cdf.back();
        p = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (p >= m) p = m - 1;
      }
      auto c = evaluate(picks);
      if (c.error <= target) found = std::move(c);
    }
    if (!found) {
      // Exhaustive search over k-multisets of distinct entries.
      const std::size_t u = distinct.size();
      double count = 1;
      for (std::size_t i = 1; i <= r.k; ++i) count = count * static_cast<double>(u + i - 1) / static_cast<double>(i);
      if (count > static_cast<double>(opt.exhaustive_budget))
        throw AlgorithmFailure("weak learner search exceeded its budget");
      std::vector<std::size_t> idx(r.k, 0);
      WeakCandidate best;
      while (true) {
        std::vector<std::size_t> picks;
        for (auto i : idx) picks.push_back(distinct[i]);
        auto c = evaluate(picks);
        if (c.error < best.error) best = std::move(c);
        if (best.error <= target) break;
        std::size_t pos = r.k;
        while (pos > 0 && idx[pos - 1] == u - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < r.k; ++j) idx[j] = idx[pos - 1];
      }
      if (best.error > target)
        throw AlgorithmFailure("no weak hypothesis with error <= 1/3 exists; best error " +
                               std::to_string(best.error));
      found = std::move(best);
    }
    double total = 0;
    for (std::size_t i = 0; i < m; ++i) {
      bool pred = found->prediction.ones() >> sample[i].x & 1;
      if (pred) ++votes[i];
      if (pred != (sample[i].y == 1)) w[i] *= std::exp(2 * alpha);
      total += w[i];
    }
    for (auto& v : w) v /= total;
    for (auto i : found->picks) r.compression.subsample.push_back(sample[i]);
    parts.push_back(Hypothesis::total(found->prediction));
  }
  r.rounds = parts.size();
  gamma_encode(r.k, r.compression.bits);
  gamma_encode(r.rounds + 1, r.compression.bits);
  r.hypothesis = Hypothesis::majority(n, std::move(parts));
  return r;
}

CompressionOutput ld_compress(const PartialConceptClass& cls, const LabeledSample& sample) {
  check_sample(cls.domain_size(), sample);
  if (!is_realizable(cls, sample)) throw ContractViolation("compression input sample is not realizable");
  SoaPredictor soa(cls);
  CompressionOutput out;
  while (true) {
    ConceptSet v = soa.index().consistent(out.subsample);
    auto miss = std::find_if(sample.begin(), sample.end(),
                             [&](const Example& e) { return soa.predict(v, e.x) != e.y; });
    if (miss == sample.end()) break;
    out.subsample.push_back(*miss);
  }
  return out;
}

Hypothesis reconstruct(const PartialConceptClass& cls, const CompressionOutput& comp) {
  const std::size_t n = cls.domain_size();
  for (const auto& e : comp.subsample)
    if (e.x >= n || e.y > 1) throw ParseError("compression subsample entry outside domain");
  for (auto b : comp.bits)
    if (b > 1) throw ParseError("bit string holds a non-bit value");
  if (comp.bits.empty()) {
    SoaPredictor soa(cls);
    ConceptSet v = soa.index().consistent(comp.subsample);
    if (v.empty() || constraint_of(n, comp.subsample).contradictory)
      throw ParseError("compression subsample is not realizable");
    Mask ones = 0;
    for (std::size_t x = 0; x < n; ++x)
      if (soa.predict(v, x)) ones |= bit(x);
    return Hypothesis::total(PartialConcept::total(n, ones));
  }
  std::size_t pos = 0;
  std::size_t k = gamma_decode(comp.bits, pos);
  std::size_t rounds = gamma_decode(comp.bits, pos) - 1;
  if (pos != comp.bits.size()) throw ParseError("trailing bits after compression header");
  if (k == 0 || comp.subsample.size() != k * rounds)
    throw ParseError("compression header does not match the subsample length");
  OneInclusionPredictor oi(cls);
  std::vector<Hypothesis> parts;
  for (std::size_t t = 0; t < rounds; ++t) {
    LabeledSample train(comp.subsample.begin() + static_cast<long>(t * k),
                        comp.subsample.begin() + static_cast<long>((t + 1) * k));
    if (!is_realizable(cls, train)) throw ParseError("compression block is not realizable");
    parts.push_back(oi.hypothesis(train));
  }
  return Hypothesis::majority(n, std::move(parts));
}

AgnosticResult agnostic_learn(const PartialConceptClass& cls, const LabeledSample& sample,
                              double delta, const BoostOptions& opt) {
  if (sample.empty()) throw ContractViolation("agnostic learning needs a nonempty sample");
  if (!(delta > 0 && delta < 1)) throw ContractViolation("delta must be in (0,1)");
  AgnosticResult r;
  r.report.realizable_indices = max_realizable_subsequence(cls, sample).indices;
  if (r.report.realizable_indices.empty()) {
    r.hypothesis = Hypothesis::constant(cls.domain_size(), 0);
  } else {
    LabeledSample sub;
    for (auto i : r.report.realizable_indices) sub.push_back(sample[i]);
    auto b = alpha_boost_compress(cls, sub, opt);
    r.hypothesis = std::move(b.hypothesis);
    r.report.compression_size = b.compression.size();
  }
  r.report.empirical_error = empirical_error(r.hypothesis, sample);
  r.report.class_error = class_empirical_error(cls, sample);
  const double m = static_cast<double>(sample.size());
  const double a = r.report.constant;
  const double big_b =
      a * (static_cast<double>(r.report.compression_size) * std::log(m) + std::log(1.0 / delta)) / m;
  const double er = to_double(r.report.empirical_error);
  r.report.bound = er + std::sqrt(er * big_b) + big_b;
  return r;
}

double srm_penalty(int vc, std::size_t n, double delta, double a) {
  double ln = std::log(static_cast<double>(n));
  return a * (static_cast<double>(vc) * ln * ln + std::log(1.0 / delta)) / static_cast<double>(n);
}

SrmResult srm_select(const std::vector<SrmLevel>& hierarchy, const LabeledSample& sample,
                     double delta, SrmMode mode, double a) {
  if (hierarchy.empty()) throw ContractViolation("SRM hierarchy is empty");
  if (sample.empty()) throw ContractViolation("SRM needs a nonempty sample");
  SrmResult r;
  const double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  for (std::size_t i = 1; i <= hierarchy.size(); ++i) {
    const auto& level = hierarchy[i - 1];
    const double di = delta / (static_cast<double>(i) * static_cast<double>(i + 1));
    const double pen = srm_penalty(vc_dimension(level.cls), sample.size(), di, a);
    const Rational er = class_empirical_error(level.cls, sample);
    double score = inf;
    if (mode == SrmMode::Realizable) {
      if (er == 0) score = pen;
    } else {
      score = to_double(er) + std::sqrt(pen);
    }
    r.scores.push_back(score);
    if (score < best) {
      best = score;
      r.index = i;
    }
  }
  if (r.index == 0) throw ContractViolation("no class in the hierarchy is consistent with the sample");
  r.bound = best;
  const auto& chosen = hierarchy[r.index - 1];
  r.hypothesis = chosen.learner(chosen.cls, sample);
  return r;
}

}  // namespace pcl
