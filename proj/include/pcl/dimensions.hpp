#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/subclass.hpp"

namespace pcl {

enum class Parallelism { Serial, Parallel };

int vc_dimension(const PartialConceptClass& cls, Parallelism par = Parallelism::Parallel);
// A lexicographically-first largest shattered set.
std::vector<std::size_t> vc_witness(const PartialConceptClass& cls);
bool verify_shattered(const PartialConceptClass& cls, const std::vector<std::size_t>& points);

// Number of shattered subsets, the empty set included.
std::uint64_t shattering_strength(const PartialConceptClass& cls,
                                  Parallelism par = Parallelism::Parallel);
std::uint64_t shattering_strength(const std::vector<PartialConcept>& concepts, std::size_t n);

// Littlestone dimension by memoized recursion over concept subsets.
// The memo lives as long as the engine.
class LittlestoneEngine {
 public:
  explicit LittlestoneEngine(PartialConceptClass cls);

  const ClassIndex& index() const { return index_; }
  std::size_t domain_size() const { return index_.domain_size(); }
  // -1 for the empty subclass.
  int ld(const ConceptSet& s);
  int ld() { return ld(index_.all()); }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  ClassIndex index_;
  std::unordered_map<ConceptSet, int, ConceptSetHash> memo_;
};

int littlestone_dimension(const PartialConceptClass& cls);

// Complete binary tree in heap order: node i has children 2i+1 (label 0) and 2i+2 (label 1).
struct LittlestoneTree {
  std::size_t depth = 0;
  std::vector<std::size_t> nodes;  // domain point per internal node, size 2^depth - 1

  // Labeled path for a branch string (bit i = direction taken at depth i).
  LabeledSample path(std::uint64_t branches) const;
};

LittlestoneTree littlestone_tree(const PartialConceptClass& cls, std::size_t depth);
LittlestoneTree littlestone_tree(LittlestoneEngine& engine, std::size_t depth);
bool verify_littlestone_tree(const PartialConceptClass& cls, const LittlestoneTree& tree);

struct ThresholdChain {
  std::vector<std::size_t> points;    // x_1..x_d
  std::vector<std::size_t> concepts;  // indices of h_1..h_d in the class
};

int threshold_dimension(const PartialConceptClass& cls);
ThresholdChain threshold_chain(const PartialConceptClass& cls);
bool verify_threshold_chain(const PartialConceptClass& cls, const ThresholdChain& chain);

struct MulticlassDimensions {
  int natarajan = 0;
  int graph = 0;
  int support_vc = 0;
};

int natarajan_dimension(const PartialConceptClass& cls);
int graph_dimension(const PartialConceptClass& cls);
// VC dimension of the set system of supports.
int support_vc_dimension(const PartialConceptClass& cls);
MulticlassDimensions multiclass_dimensions(const PartialConceptClass& cls);

// VC dimension of the transposed class; total classes only.
int dual_vc_dimension(const PartialConceptClass& cls);

struct DimensionReport {
  std::string measure;
  std::int64_t value = 0;
  std::optional<std::vector<std::size_t>> shattered_set;
  std::optional<LittlestoneTree> tree;
  std::optional<ThresholdChain> chain;
};

// measure: vc | ld | td | strength | natarajan | graph | support-vc | dual
DimensionReport compute_dimension(const PartialConceptClass& cls, const std::string& measure,
                                  bool witness);

}  // namespace pcl
