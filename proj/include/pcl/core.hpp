#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcl/rational.hpp"
#include "pcl/rng.hpp"

namespace pcl {

using Mask = std::uint64_t;
inline constexpr std::size_t kMaxDomain = 64;

enum class Label : std::uint8_t { Zero = 0, One = 1, Star = 2 };

char to_char(Label l);
Label label_from_char(char c);

inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline Mask low_bits(std::size_t n) { return n >= 64 ? ~Mask{0} : (bit(n) - 1); }

// Gathers the bits of `value` selected by `select` into the low bits (pext).
Mask extract_bits(Mask value, Mask select);

// Ternary labeling of {0..n-1}. Stored as two masks: `defined` is the support,
// `ones` the points labeled 1 (always a subset of `defined`).
class PartialConcept {
 public:
  PartialConcept() = default;
  PartialConcept(std::size_t n, Mask defined, Mask ones);
  explicit PartialConcept(std::span<const Label> labels);
  static PartialConcept from_string(std::string_view s);
  static PartialConcept total(std::size_t n, Mask ones) { return {n, low_bits(n), ones}; }

  std::size_t size() const { return size_; }
  Mask defined() const { return defined_; }
  Mask ones() const { return ones_; }
  Mask zeros() const { return defined_ & ~ones_; }

  Label operator[](std::size_t x) const {
    if (!(defined_ >> x & 1)) return Label::Star;
    return (ones_ >> x & 1) ? Label::One : Label::Zero;
  }
  Label at(std::size_t x) const;
  bool defined_at(std::size_t x) const { return defined_ >> x & 1; }
  bool is_total() const { return defined_ == low_bits(size_); }
  std::vector<std::size_t> support() const;
  std::string to_string() const;

  friend bool operator==(const PartialConcept&, const PartialConcept&) = default;
  friend std::strong_ordering operator<=>(const PartialConcept&, const PartialConcept&) = default;

 private:
  std::uint32_t size_ = 0;
  Mask defined_ = 0;
  Mask ones_ = 0;
};

struct Example {
  std::size_t x = 0;
  std::uint8_t y = 0;
  friend bool operator==(const Example&, const Example&) = default;
  friend auto operator<=>(const Example&, const Example&) = default;
};

using LabeledSample = std::vector<Example>;

// Finite, nonempty, duplicate-free, sorted set of partial concepts.
class PartialConceptClass {
 public:
  PartialConceptClass(std::size_t domain_size, std::vector<PartialConcept> concepts);
  static PartialConceptClass from_strings(const std::vector<std::string>& rows);
  static PartialConceptClass from_strings(std::initializer_list<const char*> rows);

  std::size_t domain_size() const { return n_; }
  std::size_t size() const { return concepts_.size(); }
  const std::vector<PartialConcept>& concepts() const { return concepts_; }
  const PartialConcept& operator[](std::size_t i) const { return concepts_[i]; }
  auto begin() const { return concepts_.begin(); }
  auto end() const { return concepts_.end(); }

  bool is_total() const;
  std::optional<std::size_t> index_of(const PartialConcept& h) const;
  bool contains(const PartialConcept& h) const { return index_of(h).has_value(); }
  std::vector<std::string> to_strings() const;

  friend bool operator==(const PartialConceptClass&, const PartialConceptClass&) = default;

 private:
  std::size_t n_;
  std::vector<PartialConcept> concepts_;
};

// A class in which no concept uses Star.
class TotalConceptClass {
 public:
  explicit TotalConceptClass(PartialConceptClass cls);
  TotalConceptClass(std::size_t domain_size, std::vector<PartialConcept> concepts)
      : TotalConceptClass(PartialConceptClass(domain_size, std::move(concepts))) {}
  static TotalConceptClass from_strings(std::initializer_list<const char*> rows) {
    return TotalConceptClass(PartialConceptClass::from_strings(rows));
  }

  const PartialConceptClass& as_partial() const { return cls_; }
  operator const PartialConceptClass&() const { return cls_; }
  std::size_t domain_size() const { return cls_.domain_size(); }
  std::size_t size() const { return cls_.size(); }
  const PartialConcept& operator[](std::size_t i) const { return cls_[i]; }
  auto begin() const { return cls_.begin(); }
  auto end() const { return cls_.end(); }

 private:
  PartialConceptClass cls_;
};

// Sample reduced to point/label masks; `contradictory` if a point carries both labels.
struct SampleConstraint {
  Mask points = 0;
  Mask ones = 0;
  bool contradictory = false;
};

void check_sample(std::size_t domain_size, const LabeledSample& sample);
SampleConstraint constraint_of(std::size_t domain_size, const LabeledSample& sample);
inline bool satisfies(const PartialConcept& h, const SampleConstraint& c) {
  return !c.contradictory && (c.points & ~h.defined()) == 0 && ((h.ones() ^ c.ones) & c.points) == 0;
}

bool is_realizable(const PartialConceptClass& cls, const LabeledSample& sample);
Rational empirical_error(const PartialConcept& h, const LabeledSample& sample);
// min over the class of the empirical error.
Rational class_empirical_error(const PartialConceptClass& cls, const LabeledSample& sample);
std::optional<PartialConceptClass> restrict(const PartialConceptClass& cls, std::size_t x,
                                            std::uint8_t y);
std::optional<PartialConceptClass> restrict(const PartialConceptClass& cls,
                                            const LabeledSample& sample);

struct Atom {
  Example example;
  Rational weight;
};

// Rational-weighted distribution over labeled points.
class FiniteDistribution {
 public:
  // Merges repeated pairs; weights must be positive and sum to 1 exactly.
  FiniteDistribution(std::size_t domain_size, std::vector<Atom> atoms);
  static FiniteDistribution uniform(std::size_t domain_size, const std::vector<Example>& support);

  std::size_t domain_size() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  LabeledSample support() const;
  Example sample(Rng& rng) const;
  LabeledSample sample(Rng& rng, std::size_t count) const;

 private:
  std::size_t n_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

bool distribution_realizable(const PartialConceptClass& cls, const FiniteDistribution& p);
// er_P(h), Star counted as an error.
Rational population_error(const PartialConcept& h, const FiniteDistribution& p);

enum class SubsequenceMode { Exact };

struct SubsequenceResult {
  std::vector<std::size_t> indices;  // sorted
  SubsequenceMode mode = SubsequenceMode::Exact;
};

// Longest realizable subsequence; ties go to the lexicographically smallest index list.
SubsequenceResult max_realizable_subsequence(const PartialConceptClass& cls,
                                             const LabeledSample& sample);

struct ApproximationOptions {
  bool exact = false;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

// E over S ~ P^n of min_h êr_S(h). Exact mode enumerates every length-n sequence.
Rational approximation_error(const PartialConceptClass& cls, const FiniteDistribution& p,
                             std::size_t n, const ApproximationOptions& opt);

}  // namespace pcl
