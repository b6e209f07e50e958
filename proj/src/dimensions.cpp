#include "pcl/dimensions.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <utility>

#include "pcl/errors.hpp"
#include "pcl/kernels.hpp"

namespace pcl {

namespace {

std::vector<std::size_t> mask_points(Mask m) {
  std::vector<std::size_t> out;
  for (; m; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return out;
}

int floor_log2(std::size_t v) { return v == 0 ? -1 : static_cast<int>(std::bit_width(v)) - 1; }

kernels::FamilyStats shattered(const PartialConceptClass& cls, Parallelism par) {
  std::span<const PartialConcept> hs(cls.concepts());
  return par == Parallelism::Parallel ? kernels::parallel::shattered_sets(hs, cls.domain_size())
                                      : kernels::serial::shattered_sets(hs, cls.domain_size());
}

// Ternary pattern on a point set: bit j of `def` says defined, bit j of `one` says label 1.
struct Pattern {
  Mask def;
  Mask one;
  int label(int j) const { return (def >> j & 1) ? static_cast<int>(one >> j & 1) : 2; }
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

std::vector<Pattern> patterns_on(const PartialConceptClass& cls, Mask s) {
  std::vector<Pattern> ps;
  for (const auto& h : cls) ps.push_back({extract_bits(h.defined(), s), extract_bits(h.ones(), s)});
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

using Groups = std::vector<std::vector<int>>;

// Tries to pick, coordinate by coordinate, a binary split under which every
// cell of the resulting 2^k grid is hit by some pattern.
template <class Split>
bool find_box(const std::vector<Pattern>& ps, const Groups& groups, int j, int k,
              const Split& split) {
  if (j == k) return true;
  for (int choice = 0; choice < 3; ++choice) {
    Groups next;
    next.reserve(groups.size() * 2);
    bool ok = true;
    for (const auto& g : groups) {
      std::vector<int> a, b;
      for (int p : g) {
        int side = split(choice, ps[static_cast<std::size_t>(p)].label(j));
        if (side == 0) a.push_back(p);
        else if (side == 1) b.push_back(p);
      }
      if (a.empty() || b.empty()) {
        ok = false;
        break;
      }
      next.push_back(std::move(a));
      next.push_back(std::move(b));
    }
    if (ok && find_box(ps, next, j + 1, k, split)) return true;
  }
  return false;
}

// Natarajan: choice picks the label pair {0,1}, {0,*} or {1,*}.
int natarajan_side(int choice, int label) {
  static constexpr int table[3][3] = {{0, 1, -1}, {0, -1, 1}, {-1, 0, 1}};
  return table[choice][label];
}

// Graph: choice is h0's label; side 0 = agrees with h0, side 1 = disagrees.
int graph_side(int choice, int label) { return label == choice ? 0 : 1; }

template <class Split>
bool box_shattered(const PartialConceptClass& cls, Mask s, const Split& split) {
  const int k = std::popcount(s);
  if (k == 0) return true;
  if (k > 30 || (std::size_t{1} << k) > cls.size()) return false;
  auto ps = patterns_on(cls, s);
  if (ps.size() < (std::size_t{1} << k)) return false;
  Groups all(1);
  for (std::size_t i = 0; i < ps.size(); ++i) all[0].push_back(static_cast<int>(i));
  return find_box(ps, all, 0, k, split);
}

}  // namespace

int vc_dimension(const PartialConceptClass& cls, Parallelism par) {
  return static_cast<int>(shattered(cls, par).max_size);
}

std::vector<std::size_t> vc_witness(const PartialConceptClass& cls) {
  return mask_points(shattered(cls, Parallelism::Serial).witness);
}

bool verify_shattered(const PartialConceptClass& cls, const std::vector<std::size_t>& points) {
  Mask s = 0;
  for (auto x : points) {
    if (x >= cls.domain_size()) throw DomainError("witness point outside domain");
    s |= bit(x);
  }
  if (static_cast<std::size_t>(std::popcount(s)) != points.size()) return false;
  return kernels::is_shattered(cls.concepts(), s);
}

std::uint64_t shattering_strength(const PartialConceptClass& cls, Parallelism par) {
  return shattered(cls, par).count;
}

std::uint64_t shattering_strength(const std::vector<PartialConcept>& concepts, std::size_t n) {
  if (concepts.empty()) return 0;
  return kernels::serial::shattered_sets(concepts, n).count;
}

LittlestoneEngine::LittlestoneEngine(PartialConceptClass cls) : index_(std::move(cls)) {}

int LittlestoneEngine::ld(const ConceptSet& s) {
  const std::size_t c = s.count();
  if (c == 0) return -1;
  if (c == 1) return 0;
  if (auto it = memo_.find(s); it != memo_.end()) return it->second;
  const int upper = floor_log2(c);
  int best = 0;
  for (std::size_t x = 0; x < domain_size() && best < upper; ++x) {
    ConceptSet s0 = s & index_.with(x, 0);
    std::size_t c0 = s0.count();
    if (c0 == 0) continue;
    ConceptSet s1 = s & index_.with(x, 1);
    std::size_t c1 = s1.count();
    if (c1 == 0) continue;
    if (1 + floor_log2(std::min(c0, c1)) <= best) continue;
    ConceptSet& small = c0 <= c1 ? s0 : s1;
    ConceptSet& large = c0 <= c1 ? s1 : s0;
    int a = ld(small);
    if (1 + a <= best) continue;
    int b = ld(large);
    best = std::max(best, 1 + std::min(a, b));
  }
  memo_.emplace(s, best);
  return best;
}

int littlestone_dimension(const PartialConceptClass& cls) {
  LittlestoneEngine e(cls);
  return e.ld();
}

LabeledSample LittlestoneTree::path(std::uint64_t branches) const {
  LabeledSample out;
  std::size_t node = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    std::uint8_t y = static_cast<std::uint8_t>(branches >> i & 1);
    out.push_back({nodes[node], y});
    node = 2 * node + 1 + y;
  }
  return out;
}

namespace {

void build_tree(LittlestoneEngine& e, const ConceptSet& s, std::size_t node, std::size_t d,
                LittlestoneTree& t) {
  if (d == 0) return;
  const auto& idx = e.index();
  for (std::size_t x = 0; x < e.domain_size(); ++x) {
    ConceptSet s0 = idx.restrict(s, x, 0);
    ConceptSet s1 = idx.restrict(s, x, 1);
    if (e.ld(s0) >= static_cast<int>(d) - 1 && e.ld(s1) >= static_cast<int>(d) - 1) {
      t.nodes[node] = x;
      build_tree(e, s0, 2 * node + 1, d - 1, t);
      build_tree(e, s1, 2 * node + 2, d - 1, t);
      return;
    }
  }
  throw AlgorithmFailure("Littlestone tree extraction found no splitting point");
}

}  // namespace

LittlestoneTree littlestone_tree(LittlestoneEngine& engine, std::size_t depth) {
  if (depth > 62) throw ContractViolation("tree depth too large");
  int ld = engine.ld();
  if (static_cast<int>(depth) > ld)
    throw ContractViolation("requested tree depth " + std::to_string(depth) +
                            " exceeds Littlestone dimension " + std::to_string(ld));
  LittlestoneTree t;
  t.depth = depth;
  t.nodes.assign((std::size_t{1} << depth) - 1, 0);
  build_tree(engine, engine.index().all(), 0, depth, t);
  return t;
}

LittlestoneTree littlestone_tree(const PartialConceptClass& cls, std::size_t depth) {
  LittlestoneEngine e(cls);
  return littlestone_tree(e, depth);
}

bool verify_littlestone_tree(const PartialConceptClass& cls, const LittlestoneTree& tree) {
  if (tree.nodes.size() + 1 != (std::size_t{1} << tree.depth)) return false;
  for (auto x : tree.nodes)
    if (x >= cls.domain_size()) return false;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << tree.depth); ++b)
    if (!is_realizable(cls, tree.path(b))) return false;
  return true;
}

namespace {

struct ThresholdSearch {
  const PartialConceptClass& cls;
  std::map<std::pair<Mask, Mask>, int> memo;

  // Longest continuation given chosen points and the set of points on which
  // every chosen concept is 1.
  int best(Mask chosen, Mask common_ones) {
    auto key = std::make_pair(chosen, common_ones);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int result = 0;
    const int cap = std::popcount(common_ones & ~chosen);
    for (const auto& h : cls) {
      if (result >= cap) break;
      if ((h.zeros() & chosen) != chosen) continue;
      Mask xs = common_ones & h.ones();
      for (Mask m = xs; m; m &= m - 1) {
        Mask x = m & -m;
        result = std::max(result, 1 + best(chosen | x, common_ones & h.ones()));
        if (result >= cap) break;
      }
    }
    memo.emplace(key, result);
    return result;
  }

  ThresholdChain chain() {
    ThresholdChain out;
    Mask chosen = 0, common = low_bits(cls.domain_size());
    int remaining = best(chosen, common);
    while (remaining > 0) {
      bool advanced = false;
      for (std::size_t i = 0; i < cls.size() && !advanced; ++i) {
        const auto& h = cls[i];
        if ((h.zeros() & chosen) != chosen) continue;
        for (Mask m = common & h.ones(); m; m &= m - 1) {
          Mask x = m & -m;
          if (1 + best(chosen | x, common & h.ones()) == remaining) {
            out.concepts.push_back(i);
            out.points.push_back(static_cast<std::size_t>(std::countr_zero(x)));
            chosen |= x;
            common &= h.ones();
            --remaining;
            advanced = true;
            break;
          }
        }
      }
      if (!advanced) throw AlgorithmFailure("threshold chain reconstruction failed");
    }
    return out;
  }
};

}  // namespace

int threshold_dimension(const PartialConceptClass& cls) {
  ThresholdSearch s{cls, {}};
  return s.best(0, low_bits(cls.domain_size()));
}

ThresholdChain threshold_chain(const PartialConceptClass& cls) {
  ThresholdSearch s{cls, {}};
  return s.chain();
}

bool verify_threshold_chain(const PartialConceptClass& cls, const ThresholdChain& chain) {
  const std::size_t d = chain.points.size();
  if (chain.concepts.size() != d) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (chain.concepts[i] >= cls.size()) return false;
    const auto& h = cls[chain.concepts[i]];
    for (std::size_t j = 0; j < d; ++j) {
      Label want = i <= j ? Label::One : Label::Zero;
      if (h.at(chain.points[j]) != want) return false;
    }
  }
  return true;
}

int natarajan_dimension(const PartialConceptClass& cls) {
  auto pred = [&](Mask s) { return box_shattered(cls, s, natarajan_side); };
  return static_cast<int>(kernels::enumerate_family_serial(low_bits(cls.domain_size()), pred).max_size);
}

int graph_dimension(const PartialConceptClass& cls) {
  auto pred = [&](Mask s) { return box_shattered(cls, s, graph_side); };
  return static_cast<int>(kernels::enumerate_family_serial(low_bits(cls.domain_size()), pred).max_size);
}

int support_vc_dimension(const PartialConceptClass& cls) {
  std::vector<PartialConcept> supports;
  for (const auto& h : cls) supports.push_back(PartialConcept::total(cls.domain_size(), h.defined()));
  return vc_dimension(PartialConceptClass(cls.domain_size(), std::move(supports)), Parallelism::Serial);
}

MulticlassDimensions multiclass_dimensions(const PartialConceptClass& cls) {
  return {natarajan_dimension(cls), graph_dimension(cls), support_vc_dimension(cls)};
}

int dual_vc_dimension(const PartialConceptClass& cls) {
  if (!cls.is_total()) throw ContractViolation("dual VC dimension is defined for total classes only");
  const std::size_t n = cls.domain_size();
  const std::size_t m = cls.size();
  // Concept subsets C are shattered by points when all 2^|C| columns appear.
  int best = 0;
  std::vector<std::size_t> chosen;
  auto shattered_by_points = [&](const std::vector<std::size_t>& c) {
    const std::size_t need = std::size_t{1} << c.size();
    if (need > n) return false;
    std::vector<char> seen(need, 0);
    std::size_t distinct = 0;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t p = 0;
      for (std::size_t j = 0; j < c.size(); ++j)
        if (cls[c[j]][x] == Label::One) p |= std::size_t{1} << j;
      if (!seen[p]) {
        seen[p] = 1;
        if (++distinct == need) return true;
      }
    }
    return false;
  };
  auto rec = [&](auto&& self, std::size_t start) -> void {
    best = std::max(best, static_cast<int>(chosen.size()));
    for (std::size_t i = start; i < m; ++i) {
      chosen.push_back(i);
      if (shattered_by_points(chosen)) self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

DimensionReport compute_dimension(const PartialConceptClass& cls, const std::string& measure,
                                  bool witness) {
  DimensionReport r;
  r.measure = measure;
  if (measure == "vc") {
    r.value = vc_dimension(cls);
    if (witness) r.shattered_set = vc_witness(cls);
  } else if (measure == "ld") {
    LittlestoneEngine e(cls);
    r.value = e.ld();
    if (witness) r.tree = littlestone_tree(e, static_cast<std::size_t>(r.value));
  } else if (measure == "td") {
    ThresholdSearch s{cls, {}};
    r.value = s.best(0, low_bits(cls.domain_size()));
    if (witness) r.chain = s.chain();
  } else if (measure == "strength") {
    r.value = static_cast<std::int64_t>(shattering_strength(cls));
  } else if (measure == "natarajan") {
    r.value = natarajan_dimension(cls);
  } else if (measure == "graph") {
    r.value = graph_dimension(cls);
  } else if (measure == "support-vc") {
    r.value = support_vc_dimension(cls);
  } else if (measure == "dual") {
    r.value = dual_vc_dimension(cls);
  } else {
    throw ValidationError("unknown measure '" + measure + "'");
  }
  return r;
}

}  // namespace pcl
