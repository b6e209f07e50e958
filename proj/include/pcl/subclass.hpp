#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pcl/core.hpp"

namespace pcl {

// Subset of the concepts of a fixed class, as a bitset over concept indices.
class ConceptSet {
 public:
  ConceptSet() = default;
  explicit ConceptSet(std::size_t universe, bool full = false);

  std::size_t universe() const { return universe_; }
  std::size_t count() const;
  bool empty() const;
  bool test(std::size_t i) const { return words_[i >> 6] >> (i & 63) & 1; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  std::vector<std::size_t> indices() const;

  ConceptSet& operator&=(const ConceptSet& o);
  friend ConceptSet operator&(ConceptSet a, const ConceptSet& b) { return a &= b; }
  friend bool operator==(const ConceptSet&, const ConceptSet&) = default;
  std::size_t hash() const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ConceptSetHash {
  std::size_t operator()(const ConceptSet& s) const { return s.hash(); }
};

// Class plus precomputed "h(x) = y" membership sets.
class ClassIndex {
 public:
  explicit ClassIndex(PartialConceptClass cls);

  const PartialConceptClass& cls() const { return cls_; }
  std::size_t domain_size() const { return cls_.domain_size(); }
  ConceptSet all() const { return ConceptSet(cls_.size(), true); }
  const ConceptSet& with(std::size_t x, std::uint8_t y) const { return by_label_[2 * x + y]; }
  ConceptSet restrict(const ConceptSet& s, std::size_t x, std::uint8_t y) const {
    return s & with(x, y);
  }
  ConceptSet consistent(const LabeledSample& sample) const;
  std::vector<PartialConcept> members(const ConceptSet& s) const;

 private:
  PartialConceptClass cls_;
  std::vector<ConceptSet> by_label_;
};

}  // namespace pcl
