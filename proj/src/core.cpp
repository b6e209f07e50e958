#include "pcl/core.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "pcl/errors.hpp"

namespace pcl {

char to_char(Label l) {
  switch (l) {
    case Label::Zero: return '0';
    case Label::One: return '1';
    default: return '*';
  }
}

Label label_from_char(char c) {
  switch (c) {
    case '0': return Label::Zero;
    case '1': return Label::One;
    case '*': return Label::Star;
  }
  throw ParseError(std::string("bad label character '") + c + "'");
}

Mask extract_bits(Mask value, Mask select) {
#if defined(__BMI2__)
  return __builtin_ia32_pext_di(value, select);
#else
  Mask out = 0;
  int k = 0;
  while (select) {
    int i = std::countr_zero(select);
    out |= (value >> i & 1) << k++;
    select &= select - 1;
  }
  return out;
#endif
}

PartialConcept::PartialConcept(std::size_t n, Mask defined, Mask ones)
    : size_(static_cast<std::uint32_t>(n)), defined_(defined), ones_(ones) {
  if (n == 0 || n > kMaxDomain) throw ContractViolation("domain size must be in [1, 64]");
  if ((defined_ & ~low_bits(n)) || (ones_ & ~defined_))
    throw ContractViolation("concept masks inconsistent with domain");
}

PartialConcept::PartialConcept(std::span<const Label> labels) {
  if (labels.empty() || labels.size() > kMaxDomain)
    throw ContractViolation("domain size must be in [1, 64]");
  size_ = static_cast<std::uint32_t>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::Star) continue;
    defined_ |= bit(i);
    if (labels[i] == Label::One) ones_ |= bit(i);
  }
}

PartialConcept PartialConcept::from_string(std::string_view s) {
  if (s.empty() || s.size() > kMaxDomain) throw ParseError("concept length must be in [1, 64]");
  std::vector<Label> labels;
  labels.reserve(s.size());
  for (char c : s) labels.push_back(label_from_char(c));
  return PartialConcept(labels);
}

Label PartialConcept::at(std::size_t x) const {
  if (x >= size_) throw DomainError("point " + std::to_string(x) + " outside domain");
  return (*this)[x];
}

std::vector<std::size_t> PartialConcept::support() const {
  std::vector<std::size_t> out;
  for (Mask m = defined_; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::string PartialConcept::to_string() const {
  std::string s(size_, '*');
  for (std::size_t i = 0; i < size_; ++i) s[i] = to_char((*this)[i]);
  return s;
}

PartialConceptClass::PartialConceptClass(std::size_t domain_size,
                                         std::vector<PartialConcept> concepts)
    : n_(domain_size), concepts_(std::move(concepts)) {
  if (n_ == 0 || n_ > kMaxDomain) throw ContractViolation("domain size must be in [1, 64]");
  if (concepts_.empty()) throw ContractViolation("concept class must be nonempty");
  for (const auto& h : concepts_)
    if (h.size() != n_) throw ContractViolation("concept length differs from domain size");
  std::sort(concepts_.begin(), concepts_.end());
  concepts_.erase(std::unique(concepts_.begin(), concepts_.end()), concepts_.end());
}

PartialConceptClass PartialConceptClass::from_strings(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ParseError("concept list is empty");
  std::vector<PartialConcept> cs;
  for (const auto& r : rows) cs.push_back(PartialConcept::from_string(r));
  std::size_t n = cs.front().size();
  for (const auto& h : cs)
    if (h.size() != n) throw ParseError("concepts have different lengths");
  return PartialConceptClass(n, std::move(cs));
}

PartialConceptClass PartialConceptClass::from_strings(std::initializer_list<const char*> rows) {
  return from_strings(std::vector<std::string>(rows.begin(), rows.end()));
}

bool PartialConceptClass::is_total() const {
  return std::all_of(concepts_.begin(), concepts_.end(), [](const auto& h) { return h.is_total(); });
}

std::optional<std::size_t> PartialConceptClass::index_of(const PartialConcept& h) const {
  auto it = std::lower_bound(concepts_.begin(), concepts_.end(), h);
  if (it == concepts_.end() || *it != h) return std::nullopt;
  return static_cast<std::size_t>(it - concepts_.begin());
}

std::vector<std::string> PartialConceptClass::to_strings() const {
  std::vector<std::string> out;
  for (const auto& h : concepts_) out.push_back(h.to_string());
  return out;
}

TotalConceptClass::TotalConceptClass(PartialConceptClass cls) : cls_(std::move(cls)) {
  if (!cls_.is_total()) throw ContractViolation("total class contains a Star label");
}

void check_sample(std::size_t domain_size, const LabeledSample& sample) {
  for (const auto& e : sample) {
    if (e.x >= domain_size)
      throw DomainError("sample point " + std::to_string(e.x) + " outside domain of size " +
                        std::to_string(domain_size));
    if (e.y > 1) throw ContractViolation("sample label must be 0 or 1");
  }
}

SampleConstraint constraint_of(std::size_t domain_size, const LabeledSample& sample) {
  check_sample(domain_size, sample);
  SampleConstraint c;
  for (const auto& e : sample) {
    Mask b = bit(e.x);
    if ((c.points & b) && (((c.ones & b) != 0) != (e.y == 1))) c.contradictory = true;
    c.points |= b;
    if (e.y) c.ones |= b;
  }
  return c;
}

bool is_realizable(const PartialConceptClass& cls, const LabeledSample& sample) {
  auto c = constraint_of(cls.domain_size(), sample);
  if (c.contradictory) return false;
  return std::any_of(cls.begin(), cls.end(), [&](const auto& h) { return satisfies(h, c); });
}

Rational empirical_error(const PartialConcept& h, const LabeledSample& sample) {
  if (sample.empty()) throw ContractViolation("empirical error of an empty sample");
  check_sample(h.size(), sample);
  std::size_t wrong = 0;
  for (const auto& e : sample) {
    Label l = h[e.x];
    if (l == Label::Star || static_cast<std::uint8_t>(l) != e.y) ++wrong;
  }
  return Rational(wrong, sample.size());
}

Rational class_empirical_error(const PartialConceptClass& cls, const LabeledSample& sample) {
  Rational best = 2;
  for (const auto& h : cls) best = std::min(best, empirical_error(h, sample));
  return best;
}

std::optional<PartialConceptClass> restrict(const PartialConceptClass& cls, std::size_t x,
                                            std::uint8_t y) {
  return restrict(cls, LabeledSample{{x, y}});
}

std::optional<PartialConceptClass> restrict(const PartialConceptClass& cls,
                                            const LabeledSample& sample) {
  auto c = constraint_of(cls.domain_size(), sample);
  std::vector<PartialConcept> kept;
  for (const auto& h : cls)
    if (satisfies(h, c)) kept.push_back(h);
  if (kept.empty()) return std::nullopt;
  return PartialConceptClass(cls.domain_size(), std::move(kept));
}

FiniteDistribution::FiniteDistribution(std::size_t domain_size, std::vector<Atom> atoms)
    : n_(domain_size) {
  std::map<Example, Rational> merged;
  for (auto& a : atoms) {
    check_sample(n_, {a.example});
    if (a.weight <= 0) throw ContractViolation("distribution weights must be positive");
    merged[a.example] += a.weight;
  }
  if (merged.empty()) throw ContractViolation("distribution has no atoms");
  Rational total = 0;
  for (auto& [e, w] : merged) {
    total += w;
    atoms_.push_back({e, w});
  }
  if (total != 1) throw ContractViolation("distribution weights sum to " + to_string(total));
  double acc = 0;
  for (const auto& a : atoms_) {
    acc += to_double(a.weight);
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

FiniteDistribution FiniteDistribution::uniform(std::size_t domain_size,
                                               const std::vector<Example>& support) {
  std::vector<Example> s = support;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<Atom> atoms;
  for (const auto& e : s) atoms.push_back({e, Rational(1, s.size())});
  return FiniteDistribution(domain_size, std::move(atoms));
}

LabeledSample FiniteDistribution::support() const {
  LabeledSample out;
  for (const auto& a : atoms_) out.push_back(a.example);
  return out;
}

Example FiniteDistribution::sample(Rng& rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].example;
}

LabeledSample FiniteDistribution::sample(Rng& rng, std::size_t count) const {
  LabeledSample out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample(rng));
  return out;
}

bool distribution_realizable(const PartialConceptClass& cls, const FiniteDistribution& p) {
  return is_realizable(cls, p.support());
}

Rational population_error(const PartialConcept& h, const FiniteDistribution& p) {
  Rational err = 0;
  for (const auto& a : p.atoms()) {
    Label l = h.at(a.example.x);
    if (l == Label::Star || static_cast<std::uint8_t>(l) != a.example.y) err += a.weight;
  }
  return err;
}

SubsequenceResult max_realizable_subsequence(const PartialConceptClass& cls,
                                             const LabeledSample& sample) {
  check_sample(cls.domain_size(), sample);
  // A subset is realizable iff it lies inside the agreement set of one concept,
  // so the maximum realizable subsets are exactly the largest agreement sets.
  SubsequenceResult best;
  bool have = false;
  for (const auto& h : cls) {
    std::vector<std::size_t> agree;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      Label l = h[sample[i].x];
      if (l != Label::Star && static_cast<std::uint8_t>(l) == sample[i].y) agree.push_back(i);
    }
    if (!have || agree.size() > best.indices.size() ||
        (agree.size() == best.indices.size() && agree < best.indices)) {
      best.indices = std::move(agree);
      have = true;
    }
  }
  return best;
}

Rational approximation_error(const PartialConceptClass& cls, const FiniteDistribution& p,
                             std::size_t n, const ApproximationOptions& opt) {
  if (n == 0) throw ContractViolation("approximation error needs n >= 1");
  const auto& atoms = p.atoms();
  if (p.domain_size() != cls.domain_size())
    throw ContractViolation("distribution and class domains differ");
  if (opt.exact) {
    double count = 1;
    for (std::size_t i = 0; i < n; ++i) count *= static_cast<double>(atoms.size());
    if (count > 2e6) throw BudgetError("exact approximation error needs too many sequences");
    Rational total = 0;
    std::vector<std::size_t> idx(n, 0);
    LabeledSample s(n);
    while (true) {
      Rational w = 1;
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = atoms[idx[i]].example;
        w *= atoms[idx[i]].weight;
      }
      total += w * class_empirical_error(cls, s);
      std::size_t k = 0;
      while (k < n && ++idx[k] == atoms.size()) idx[k++] = 0;
      if (k == n) break;
    }
    return total;
  }
  if (opt.trials == 0) throw ContractViolation("approximation error needs trials >= 1");
  Rational total = 0;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng = Rng::derive(opt.seed, "approximation_error", t);
    total += class_empirical_error(cls, p.sample(rng, n));
  }
  return total / opt.trials;
}

}  // namespace pcl
