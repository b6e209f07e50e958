#include "pcl/disambiguation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <unordered_map>

#include "pcl/errors.hpp"
#include "pcl/kernels.hpp"
#include "pcl/subclass.hpp"

namespace pcl {

std::optional<PartialConcept> Disambiguation::extension_of(const PartialConcept& h) const {
  auto it = std::lower_bound(sources.begin(), sources.end(), h);
  if (it != sources.end() && *it == h) return extensions[static_cast<std::size_t>(it - sources.begin())];
  return std::nullopt;
}

namespace {

bool extends(const PartialConcept& total, const PartialConcept& h) {
  return ((total.ones() ^ h.ones()) & h.defined()) == 0;
}

Disambiguation make_strong(std::size_t n, std::vector<PartialConcept> sources,
                           std::vector<PartialConcept> extensions) {
  std::vector<PartialConcept> totals = extensions;
  Disambiguation d(TotalConceptClass(n, std::move(totals)));
  d.mode = DisambiguationMode::Strong;
  d.sources = std::move(sources);
  d.extensions = std::move(extensions);
  return d;
}

class StrengthMemo {
 public:
  explicit StrengthMemo(const ClassIndex& idx) : idx_(idx) {}
  std::uint64_t operator()(const ConceptSet& s) {
    if (s.empty()) return 0;
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    auto members = idx_.members(s);
    std::uint64_t v = kernels::serial::shattered_sets(members, idx_.domain_size()).count;
    memo_.emplace(s, v);
    return v;
  }

 private:
  const ClassIndex& idx_;
  std::unordered_map<ConceptSet, std::uint64_t, ConceptSetHash> memo_;
};

struct SuffixKey {
  ConceptSet set;
  std::size_t start;
  friend bool operator==(const SuffixKey&, const SuffixKey&) = default;
};

struct SuffixKeyHash {
  std::size_t operator()(const SuffixKey& k) const { return k.set.hash() ^ (k.start * 0x9e3779b97f4a7c15ULL); }
};

// Sum over nonempty shattered subsets S of the suffix {start..n-1} of 1/(max(S)+1)^(d+1).
class WeightMemo {
 public:
  WeightMemo(const ClassIndex& idx, int d) : idx_(idx), d_(d) {
    for (std::size_t j = 0; j < idx.domain_size(); ++j) {
      BigInt p = 1;
      for (int i = 0; i <= d; ++i) p *= static_cast<long>(j + 1);
      inverse_.push_back(Rational(BigInt(1), p));
    }
  }

  Rational operator()(const ConceptSet& s, std::size_t start) {
    const std::size_t n = idx_.domain_size();
    if (s.empty() || start >= n) return 0;
    SuffixKey key{s, start};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto members = idx_.members(s);
    std::vector<std::uint64_t> by_max(n, 0);
    Mask universe = low_bits(n) & ~low_bits(start);
    kernels::for_each_member(universe, kernels::ShatterPredicate{members}, [&](Mask m) {
      if (m) ++by_max[63 - static_cast<std::size_t>(std::countl_zero(m))];
    });
    Rational w = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (by_max[j]) w += inverse_[j] * static_cast<long>(by_max[j]);
    memo_.emplace(std::move(key), w);
    return w;
  }

 private:
  const ClassIndex& idx_;
  int d_;
  std::vector<Rational> inverse_;
  std::unordered_map<SuffixKey, Rational, SuffixKeyHash> memo_;
};

struct RunOutput {
  PartialConcept extension;
  std::size_t updates = 0;
  std::vector<std::size_t> prefix;
  bool halving_ok = true;
};

// Sequential procedure shared by both algorithms. `choose(s0, s1, x)` returns
// the majority label; `potential(s, start)` is used for the halving check.
template <class Choose, class Potential>
RunOutput run_sequential(const ClassIndex& idx, std::size_t i, Choose& choose, Potential& potential) {
  const std::size_t n = idx.domain_size();
  const PartialConcept& h = idx.cls()[i];
  ConceptSet cur = idx.all();
  std::size_t start = 0;
  Mask ones = 0;
  RunOutput out;
  for (std::size_t x = 0; x < n; ++x) {
    ConceptSet s0 = idx.restrict(cur, x, 0);
    ConceptSet s1 = idx.restrict(cur, x, 1);
    std::uint8_t m = choose(s0, s1, x);
    Label l = h[x];
    std::uint8_t written = m;
    if (l != Label::Star && static_cast<std::uint8_t>(l) != m) {
      written = static_cast<std::uint8_t>(l);
      ConceptSet next = written ? std::move(s1) : std::move(s0);
      auto before = potential(cur, start);
      auto after = potential(next, x + 1);
      if (after * 2 > before) out.halving_ok = false;
      cur = std::move(next);
      start = x + 1;
      ++out.updates;
    }
    if (written) ones |= bit(x);
    out.prefix.push_back(out.updates);
  }
  out.extension = PartialConcept::total(n, ones);
  return out;
}

template <class MakeChooser>
Disambiguation sequential_disambiguate(const PartialConceptClass& cls, Parallelism par,
                                       const MakeChooser& make) {
  ClassIndex idx(cls);
  const std::size_t m = cls.size();
  std::vector<RunOutput> runs(m);
  auto body = [&](auto& chooser, auto& potential, long lo, long hi, long step) {
    for (long i = lo; i < hi; i += step)
      runs[static_cast<std::size_t>(i)] = run_sequential(idx, static_cast<std::size_t>(i), chooser, potential);
  };
  if (par == Parallelism::Parallel) {
#pragma omp parallel
    {
      auto [chooser, potential] = make(idx);
#pragma omp for schedule(dynamic, 1)
      for (long i = 0; i < static_cast<long>(m); ++i)
        runs[static_cast<std::size_t>(i)] = run_sequential(idx, static_cast<std::size_t>(i), chooser, potential);
    }
  } else {
    auto [chooser, potential] = make(idx);
    body(chooser, potential, 0, static_cast<long>(m), 1);
  }
  std::vector<PartialConcept> exts;
  bool halving = true;
  std::size_t max_u = 0;
  for (const auto& r : runs) {
    exts.push_back(r.extension);
    halving = halving && r.halving_ok;
    max_u = std::max(max_u, r.updates);
  }
  Disambiguation d = make_strong(cls.domain_size(), cls.concepts(), std::move(exts));
  for (auto& r : runs) {
    d.updates.push_back(r.updates);
    d.prefix_updates.push_back(std::move(r.prefix));
  }
  d.stats["halving_ok"] = halving ? 1 : 0;
  d.stats["max_updates"] = static_cast<std::int64_t>(max_u);
  d.stats["totals"] = static_cast<std::int64_t>(d.totals.size());
  return d;
}

}  // namespace

Disambiguation vc_majority_disambiguate(const PartialConceptClass& cls, Parallelism par) {
  auto make = [](const ClassIndex& idx) {
    auto memo = std::make_shared<StrengthMemo>(idx);
    auto chooser = [memo](const ConceptSet& s0, const ConceptSet& s1, std::size_t) -> std::uint8_t {
      return (*memo)(s1) > (*memo)(s0) ? 1 : 0;
    };
    auto potential = [memo](const ConceptSet& s, std::size_t) { return (*memo)(s); };
    return std::make_pair(chooser, potential);
  };
  Disambiguation d = sequential_disambiguate(cls, par, make);
  d.stats["strength"] = static_cast<std::int64_t>(shattering_strength(cls));
  return d;
}

Disambiguation weighted_disambiguate(const PartialConceptClass& cls, int d, Parallelism par) {
  int vc = vc_dimension(cls);
  if (d != vc)
    throw ContractViolation("weighted disambiguation expects d = VC = " + std::to_string(vc) +
                            ", got " + std::to_string(d));
  auto make = [d](const ClassIndex& idx) {
    auto memo = std::make_shared<WeightMemo>(idx, d);
    auto chooser = [memo](const ConceptSet& s0, const ConceptSet& s1, std::size_t x) -> std::uint8_t {
      Rational w0 = (*memo)(s0, x + 1);
      Rational w1 = (*memo)(s1, x + 1);
      if (w1 != w0) return w1 > w0 ? 1 : 0;
      // Equal weights: a label with no remaining concept never wins.
      return (s0.empty() && !s1.empty()) ? 1 : 0;
    };
    auto potential = [memo](const ConceptSet& s, std::size_t start) { return (*memo)(s, start); };
    return std::make_pair(chooser, potential);
  };
  return sequential_disambiguate(cls, par, make);
}

CompressionScheme ld_compression_scheme(const PartialConceptClass& cls) {
  CompressionScheme s;
  s.compress = [cls](const LabeledSample& sample) { return ld_compress(cls, sample); };
  s.reconstruct = [cls](const CompressionOutput& c) {
    if (!c.bits.empty()) throw ParseError("LD compression carries no bits");
    return reconstruct(cls, c);
  };
  s.size = static_cast<std::size_t>(std::max(0, littlestone_dimension(cls)));
  s.max_bits = 0;
  return s;
}

namespace {

// Calls visit(points_mask, pattern) for every realizable labeling of every set
// of at most max_len distinct points.
template <class Visit>
void for_each_realizable_labeling(const PartialConceptClass& cls, std::size_t max_len, const Visit& visit) {
  const std::size_t n = cls.domain_size();
  auto rec = [&](auto&& self, Mask p, std::size_t next, std::size_t size) -> bool {
    std::vector<Mask> pats;
    for (const auto& h : cls)
      if ((h.defined() & p) == p) pats.push_back(extract_bits(h.ones(), p));
    std::sort(pats.begin(), pats.end());
    pats.erase(std::unique(pats.begin(), pats.end()), pats.end());
    for (Mask q : pats)
      if (!visit(p, q)) return false;
    if (pats.empty() || size == max_len) return true;
    for (std::size_t x = next; x < n; ++x)
      if (!self(self, p | bit(x), x + 1, size + 1)) return false;
    return true;
  };
  rec(rec, 0, 0, 0);
}

LabeledSample sample_of(Mask points, Mask pattern) {
  LabeledSample s;
  int j = 0;
  for (Mask m = points; m; m &= m - 1, ++j)
    s.push_back({static_cast<std::size_t>(std::countr_zero(m)), static_cast<std::uint8_t>(pattern >> j & 1)});
  return s;
}

}  // namespace

Disambiguation compression_to_disambiguation(const PartialConceptClass& cls,
                                             const CompressionScheme& scheme, std::size_t k,
                                             std::size_t check_length) {
  const std::size_t n = cls.domain_size();
  if (scheme.max_bits > 16) throw BudgetError("bit strings longer than 16 are not enumerated");
  std::set<PartialConcept> totals;
  std::uint64_t enumerated = 0;
  LabeledSample seq;
  Mask used = 0;
  auto rec = [&](auto&& self) -> void {
    if (!is_realizable(cls, seq)) return;
    for (std::size_t len = 0; len <= scheme.max_bits; ++len) {
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << len); ++b) {
        CompressionOutput c{seq, {}};
        for (std::size_t i = 0; i < len; ++i) c.bits.push_back(static_cast<std::uint8_t>(b >> i & 1));
        ++enumerated;
        try {
          totals.insert(scheme.reconstruct(c).materialize());
        } catch (const Error&) {
          // Not a valid code word for this scheme.
        }
      }
    }
    if (seq.size() == k) return;
    for (std::size_t x = 0; x < n; ++x) {
      if (used & bit(x)) continue;
      for (std::uint8_t y = 0; y < 2; ++y) {
        seq.push_back({x, y});
        used |= bit(x);
        self(self);
        used &= ~bit(x);
        seq.pop_back();
      }
    }
  };
  rec(rec);
  if (totals.empty()) throw SchemeInconsistency("scheme reconstructs nothing", {});

  // Every realizable sample must compress into the enumerated range and rebuild consistently.
  for_each_realizable_labeling(cls, std::min(check_length, n), [&](Mask p, Mask q) {
    LabeledSample s = sample_of(p, q);
    CompressionOutput c = scheme.compress(s);
    if (c.subsample.size() > k || c.bits.size() > scheme.max_bits)
      throw SchemeInconsistency("compression exceeds the declared size", s);
    for (const auto& e : c.subsample)
      if (std::find(s.begin(), s.end(), e) == s.end())
        throw SchemeInconsistency("compression subsample is not drawn from the sample", s);
    PartialConcept h = scheme.reconstruct(c).materialize();
    for (const auto& e : s)
      if ((h.ones() >> e.x & 1) != e.y) throw SchemeInconsistency("reconstruction errs on the sample", s);
    if (!totals.count(h)) throw SchemeInconsistency("reconstruction outside the enumerated totals", s);
    return true;
  });

  Disambiguation d(TotalConceptClass(n, std::vector<PartialConcept>(totals.begin(), totals.end())));
  d.mode = DisambiguationMode::Weak;
  d.stats["enumerated"] = static_cast<std::int64_t>(enumerated);
  double bound = std::pow(2.0 * static_cast<double>(n), static_cast<double>(k)) * std::pow(2.0, static_cast<double>(k));
  d.stats["pair_bound"] = bound < 9e18 ? static_cast<std::int64_t>(bound) : -1;
  d.stats["totals"] = static_cast<std::int64_t>(d.totals.size());
  return d;
}

void validate_biclique(const BicliqueInstance& inst) {
  const std::size_t v = inst.vertices;
  auto edge_name = [](std::size_t a, std::size_t b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  };
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (auto [a, b] : inst.edges) {
    if (a >= v || b >= v) throw ValidationError("edge " + edge_name(a, b) + " references a missing vertex");
    if (a == b) throw ValidationError("self-loop at vertex " + std::to_string(a));
    if (!edges.insert({std::min(a, b), std::max(a, b)}).second)
      throw ValidationError("duplicate edge " + edge_name(a, b));
  }
  std::set<std::pair<std::size_t, std::size_t>> covered;
  for (std::size_t i = 0; i < inst.partition.size(); ++i) {
    const auto& [l, r] = inst.partition[i];
    if (l.empty() || r.empty()) throw ValidationError("biclique " + std::to_string(i) + " has an empty side");
    for (auto a : l)
      for (auto b : r) {
        if (a >= v || b >= v) throw ValidationError("biclique " + std::to_string(i) + " references a missing vertex");
        if (a == b) throw ValidationError("vertex " + std::to_string(a) + " on both sides of biclique " + std::to_string(i));
        auto e = std::make_pair(std::min(a, b), std::max(a, b));
        if (!edges.count(e)) throw ValidationError("biclique edge " + edge_name(a, b) + " is not a graph edge");
        if (!covered.insert(e).second) throw ValidationError("edge " + edge_name(a, b) + " is covered twice");
      }
  }
  for (const auto& e : edges)
    if (!covered.count(e)) throw ValidationError("edge " + edge_name(e.first, e.second) + " is not covered");
  if (inst.partition.empty() || inst.partition.size() > kMaxDomain)
    throw ValidationError("partition must have between 1 and 64 bicliques");
}

BicliqueInstance complete_graph_star_partition(std::size_t m) {
  if (m < 2) throw ContractViolation("complete graph needs at least 2 vertices");
  BicliqueInstance inst;
  inst.vertices = m;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) inst.edges.push_back({a, b});
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::vector<std::size_t> r;
    for (std::size_t b = i + 1; b < m; ++b) r.push_back(b);
    inst.partition.push_back({{i}, r});
  }
  return inst;
}

PartialConcept biclique_vertex_concept(const BicliqueInstance& inst, std::size_t v) {
  Mask def = 0, ones = 0;
  for (std::size_t i = 0; i < inst.partition.size(); ++i) {
    const auto& [l, r] = inst.partition[i];
    if (std::find(l.begin(), l.end(), v) != l.end()) def |= bit(i);
    if (std::find(r.begin(), r.end(), v) != r.end()) {
      def |= bit(i);
      ones |= bit(i);
    }
  }
  return PartialConcept(inst.partition.size(), def, ones);
}

PartialConceptClass biclique_class(const BicliqueInstance& inst) {
  validate_biclique(inst);
  std::vector<PartialConcept> cs;
  for (std::size_t v = 0; v < inst.vertices; ++v) cs.push_back(biclique_vertex_concept(inst, v));
  return PartialConceptClass(inst.partition.size(), std::move(cs));
}

ColoringCertificate certify_coloring_lower_bound(const BicliqueInstance& inst, const Disambiguation& disamb) {
  validate_biclique(inst);
  std::vector<PartialConcept> color(inst.vertices);
  for (std::size_t v = 0; v < inst.vertices; ++v) {
    PartialConcept c = biclique_vertex_concept(inst, v);
    if (auto e = disamb.extension_of(c)) {
      if (!extends(*e, c)) throw ContractViolation("recorded extension does not agree with its concept");
      color[v] = *e;
      continue;
    }
    auto it = std::find_if(disamb.totals.begin(), disamb.totals.end(),
                           [&](const PartialConcept& t) { return extends(t, c); });
    if (it == disamb.totals.end())
      throw ContractViolation("vertex " + std::to_string(v) + " has no extension in the disambiguation");
    color[v] = *it;
  }
  ColoringCertificate cert;
  cert.is_proper = true;
  for (auto [a, b] : inst.edges)
    if (color[a] == color[b]) {
      cert.is_proper = false;
      cert.conflict_edge = std::make_pair(a, b);
      break;
    }
  std::set<PartialConcept> used(color.begin(), color.end());
  cert.colors_used = used.size();
  return cert;
}

Disambiguation support_indicator_disambiguation(const PartialConceptClass& cls) {
  const std::size_t n = cls.domain_size();
  std::vector<PartialConcept> exts;
  for (const auto& h : cls) exts.push_back(PartialConcept::total(n, h.ones()));
  Disambiguation d = make_strong(n, cls.concepts(), std::move(exts));
  d.stats["vc"] = vc_dimension(d.totals);
  d.stats["graph_dimension"] = graph_dimension(cls);
  d.stats["bound_ok"] = d.stats["vc"] <= d.stats["graph_dimension"] ? 1 : 0;
  return d;
}

Label TernaryFunction::operator()(const std::vector<Label>& args) const {
  if (args.size() != arity) throw ContractViolation("ternary function arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = arity; i-- > 0;) idx = idx * 3 + static_cast<std::size_t>(args[i]);
  return table[idx];
}

namespace {

template <class F>
TernaryFunction tabulate(std::size_t k, const F& f) {
  TernaryFunction u;
  u.arity = k;
  std::size_t size = 1;
  for (std::size_t i = 0; i < k; ++i) size *= 3;
  std::vector<Label> args(k);
  for (std::size_t idx = 0; idx < size; ++idx) {
    std::size_t r = idx;
    for (std::size_t i = 0; i < k; ++i, r /= 3) args[i] = static_cast<Label>(r % 3);
    u.table.push_back(f(args));
  }
  return u;
}

}  // namespace

TernaryFunction TernaryFunction::identity() {
  return tabulate(1, [](const std::vector<Label>& a) { return a[0]; });
}

TernaryFunction TernaryFunction::support_indicator() {
  return tabulate(1, [](const std::vector<Label>& a) { return a[0] == Label::One ? Label::One : Label::Zero; });
}

TernaryFunction TernaryFunction::pairwise_majority() {
  return tabulate(2, [](const std::vector<Label>& a) {
    auto in = [&](Label x, Label y) { return (a[0] == x || a[0] == y) && (a[1] == x || a[1] == y); };
    bool has1 = a[0] == Label::One || a[1] == Label::One;
    bool has0 = a[0] == Label::Zero || a[1] == Label::Zero;
    if (has1 && in(Label::One, Label::Star)) return Label::One;
    if (has0 && in(Label::Zero, Label::Star)) return Label::Zero;
    return Label::Star;
  });
}

TernaryFunction TernaryFunction::majority(std::size_t k) {
  if (k == 0 || k > 10) throw ContractViolation("majority arity must be in [1, 10]");
  return tabulate(k, [k](const std::vector<Label>& a) {
    std::size_t ones = 0, zeros = 0;
    for (Label l : a) {
      ones += l == Label::One;
      zeros += l == Label::Zero;
    }
    if (2 * ones > k) return Label::One;
    if (2 * zeros > k) return Label::Zero;
    return Label::Star;
  });
}

PartialConceptClass majority_compose(const std::vector<PartialConceptClass>& classes,
                                     const TernaryFunction& u, std::size_t budget) {
  if (classes.size() != u.arity)
    throw ContractViolation("composition arity mismatch: " + std::to_string(classes.size()) +
                            " classes for a " + std::to_string(u.arity) + "-ary function");
  const std::size_t n = classes.front().domain_size();
  double combos = 1;
  for (const auto& c : classes) {
    if (c.domain_size() != n) throw ContractViolation("composed classes have different domains");
    combos *= static_cast<double>(c.size());
  }
  if (combos > static_cast<double>(budget)) throw BudgetError("composition exceeds its budget");
  std::vector<std::size_t> idx(classes.size(), 0);
  std::vector<PartialConcept> out;
  std::vector<Label> args(classes.size());
  while (true) {
    std::vector<Label> labels(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t i = 0; i < classes.size(); ++i) args[i] = classes[i][idx[i]][x];
      labels[x] = u(args);
    }
    out.emplace_back(labels);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == classes[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return PartialConceptClass(n, std::move(out));
}

DisambiguationCheck check_disambiguation(const PartialConceptClass& cls, const PartialConceptClass& totals,
                                         const CheckMode& mode) {
  if (cls.domain_size() != totals.domain_size()) throw ContractViolation("domains differ");
  if (!totals.is_total()) throw ContractViolation("disambiguation contains a Star label");
  DisambiguationCheck r;
  if (mode.mode == DisambiguationMode::Strong) {
    for (const auto& h : cls) {
      ++r.checked;
      bool found = std::any_of(totals.begin(), totals.end(), [&](const auto& t) { return extends(t, h); });
      if (!found) {
        r.ok = false;
        r.missing_extension = h;
        return r;
      }
    }
    return r;
  }
  const std::size_t n = cls.domain_size();
  auto total_patterns_contain = [&](Mask p, Mask q) {
    return std::any_of(totals.begin(), totals.end(),
                       [&](const auto& t) { return extract_bits(t.ones(), p) == q; });
  };
  const std::size_t exhaustive_len = std::min<std::size_t>({mode.max_len, 6, n});
  for_each_realizable_labeling(cls, exhaustive_len, [&](Mask p, Mask q) {
    ++r.checked;
    if (!total_patterns_contain(p, q)) {
      r.ok = false;
      r.counterexample = sample_of(p, q);
      return false;
    }
    return true;
  });
  if (!r.ok || mode.max_len <= exhaustive_len || n <= exhaustive_len) return r;
  r.exhaustive = false;
  Rng rng = Rng::derive(mode.seed, "weak-disambiguation-check", 0);
  const std::size_t top = std::min(mode.max_len, n);
  for (std::uint64_t s = 0; s < mode.samples; ++s) {
    std::size_t size = exhaustive_len + 1 + rng.below(top - exhaustive_len);
    Mask p = 0;
    while (static_cast<std::size_t>(std::popcount(p)) < size) p |= bit(rng.below(n));
    for (const auto& h : cls) {
      if ((h.defined() & p) != p) continue;
      Mask q = extract_bits(h.ones(), p);
      ++r.checked;
      if (!total_patterns_contain(p, q)) {
        r.ok = false;
        r.counterexample = sample_of(p, q);
        return r;
      }
    }
  }
  return r;
}

bool is_disambiguation(const PartialConceptClass& cls, const PartialConceptClass& totals, const CheckMode& mode) {
  return check_disambiguation(cls, totals, mode).ok;
}

}  // namespace pcl
