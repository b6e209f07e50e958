#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/dimensions.hpp"
#include "pcl/errors.hpp"
#include "pcl/learners.hpp"

namespace pcl {

enum class DisambiguationMode { Strong, Weak };

struct Disambiguation {
  explicit Disambiguation(TotalConceptClass t, DisambiguationMode m = DisambiguationMode::Strong)
      : totals(std::move(t)), mode(m) {}

  TotalConceptClass totals;
  DisambiguationMode mode = DisambiguationMode::Strong;
  // Strong mode: extensions[i] extends sources[i].
  std::vector<PartialConcept> sources;
  std::vector<PartialConcept> extensions;
  std::vector<std::size_t> updates;                      // per source
  std::vector<std::vector<std::size_t>> prefix_updates;  // per source, u(m) for m = 1..n
  std::map<std::string, std::int64_t> stats;

  std::optional<PartialConcept> extension_of(const PartialConcept& h) const;
};

// Unweighted strength-majority procedure (ties go to 0).
Disambiguation vc_majority_disambiguate(const PartialConceptClass& cls,
                                        Parallelism par = Parallelism::Parallel);
// Suffix-weighted version; d must equal the VC dimension of the class.
Disambiguation weighted_disambiguate(const PartialConceptClass& cls, int d,
                                     Parallelism par = Parallelism::Parallel);

struct CompressionScheme {
  std::function<CompressionOutput(const LabeledSample&)> compress;
  std::function<Hypothesis(const CompressionOutput&)> reconstruct;
  std::size_t size = 0;      // bound on |subsample| + |bits|
  std::size_t max_bits = 0;  // longest bit string the reconstructor accepts
};

CompressionScheme ld_compression_scheme(const PartialConceptClass& cls);

struct SchemeInconsistency : Error {
  SchemeInconsistency(const std::string& what, LabeledSample w) : Error(what), witness(std::move(w)) {}
  LabeledSample witness;
};

// All reconstructions of realizable subsamples of at most k distinct points with
// at most max_bits bits; throws SchemeInconsistency if the scheme fails on a sample.
Disambiguation compression_to_disambiguation(const PartialConceptClass& cls,
                                             const CompressionScheme& scheme, std::size_t k,
                                             std::size_t check_length = 4);

struct BicliqueInstance {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> partition;  // (L_i, R_i)
};

// Throws ValidationError naming the offending edge or vertex.
void validate_biclique(const BicliqueInstance& inst);
// K_m with the star partition ({i} | {i+1..m-1}) for i = 0..m-2.
BicliqueInstance complete_graph_star_partition(std::size_t m);
// Concept of vertex v: 0 on blocks with v in L, 1 on blocks with v in R, Star elsewhere.
PartialConcept biclique_vertex_concept(const BicliqueInstance& inst, std::size_t v);
PartialConceptClass biclique_class(const BicliqueInstance& inst);

struct ColoringCertificate {
  bool is_proper = false;
  std::size_t colors_used = 0;
  std::optional<std::pair<std::size_t, std::size_t>> conflict_edge;
};

ColoringCertificate certify_coloring_lower_bound(const BicliqueInstance& inst,
                                                 const Disambiguation& disamb);

// Maps Star to 0; stats carry the VC of the result and the graph dimension of the input.
Disambiguation support_indicator_disambiguation(const PartialConceptClass& cls);

// Total function {0,1,*}^k -> {0,1,*}; table index is sum_i label_i * 3^i with Star = 2.
struct TernaryFunction {
  std::size_t arity = 1;
  std::vector<Label> table;

  Label operator()(const std::vector<Label>& args) const;
  static TernaryFunction identity();
  static TernaryFunction support_indicator();
  // 1 on {1,1},{1,*}; 0 on {0,0},{0,*}; Star otherwise.
  static TernaryFunction pairwise_majority();
  // Label with a strict majority of the k votes, else Star.
  static TernaryFunction majority(std::size_t k);
};

PartialConceptClass majority_compose(const std::vector<PartialConceptClass>& classes,
                                     const TernaryFunction& u, std::size_t budget = 2000000);

struct DisambiguationCheck {
  bool ok = true;
  bool exhaustive = true;
  std::uint64_t checked = 0;
  std::optional<PartialConcept> missing_extension;  // strong mode failure
  std::optional<LabeledSample> counterexample;      // weak mode failure
};

struct CheckMode {
  DisambiguationMode mode = DisambiguationMode::Strong;
  std::size_t max_len = 3;
  std::uint64_t samples = 20000;  // randomized subsets when max_len > 6
  std::uint64_t seed = 0;

  static CheckMode strong() { return {}; }
  static CheckMode weak(std::size_t len) { return {DisambiguationMode::Weak, len}; }
};

DisambiguationCheck check_disambiguation(const PartialConceptClass& cls,
                                         const PartialConceptClass& totals, const CheckMode& mode);
bool is_disambiguation(const PartialConceptClass& cls, const PartialConceptClass& totals,
                       const CheckMode& mode);

}  // namespace pcl
