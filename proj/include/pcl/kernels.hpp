#pragma once

// Enumeration kernels over downward-closed set families (shattered sets and
// their multiclass analogues). Each kernel has a serial reference and an
// OpenMP version that splits the search by the smallest element of the set;
// both return identical results, including the witness.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pcl/core.hpp"

namespace pcl::kernels {

struct FamilyStats {
  std::uint64_t count = 0;   // number of member sets, including the empty set
  std::size_t max_size = 0;  // largest member size
  Mask witness = 0;          // first largest member in depth-first order
  bool nonempty = false;     // false if even the empty set is excluded
};

namespace detail {

template <class Pred>
void extend(Mask s, std::size_t size, Mask candidates, const Pred& member, FamilyStats& st) {
  while (candidates) {
    int x = std::countr_zero(candidates);
    candidates &= candidates - 1;
    Mask t = s | bit(static_cast<std::size_t>(x));
    if (!member(t)) continue;
    ++st.count;
    if (size + 1 > st.max_size) {
      st.max_size = size + 1;
      st.witness = t;
    }
    extend(t, size + 1, candidates, member, st);
  }
}

inline void merge(FamilyStats& into, const FamilyStats& part) {
  into.count += part.count;
  if (part.max_size > into.max_size) {
    into.max_size = part.max_size;
    into.witness = part.witness;
  }
}

}  // namespace detail

// `member` must describe a downward-closed family of subsets of `universe`.
template <class Pred>
FamilyStats enumerate_family_serial(Mask universe, const Pred& member) {
  FamilyStats st;
  if (!member(Mask{0})) return st;
  st.nonempty = true;
  st.count = 1;
  std::vector<int> firsts;
  for (Mask u = universe; u; u &= u - 1) firsts.push_back(std::countr_zero(u));
  for (int x : firsts) {
    FamilyStats part;
    Mask s = bit(static_cast<std::size_t>(x));
    if (!member(s)) continue;
    part.count = 1;
    part.max_size = 1;
    part.witness = s;
    detail::extend(s, 1, universe & ~low_bits(static_cast<std::size_t>(x) + 1), member, part);
    detail::merge(st, part);
  }
  return st;
}

template <class Pred>
FamilyStats enumerate_family_parallel(Mask universe, const Pred& member) {
  FamilyStats st;
  if (!member(Mask{0})) return st;
  st.nonempty = true;
  st.count = 1;
  std::vector<int> firsts;
  for (Mask u = universe; u; u &= u - 1) firsts.push_back(std::countr_zero(u));
  std::vector<FamilyStats> parts(firsts.size());
  const long m = static_cast<long>(firsts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < m; ++i) {
    int x = firsts[static_cast<std::size_t>(i)];
    Mask s = bit(static_cast<std::size_t>(x));
    if (!member(s)) continue;
    FamilyStats& part = parts[static_cast<std::size_t>(i)];
    part.count = 1;
    part.max_size = 1;
    part.witness = s;
    detail::extend(s, 1, universe & ~low_bits(static_cast<std::size_t>(x) + 1), member, part);
  }
  for (const auto& p : parts) detail::merge(st, p);
  return st;
}

// Visits every member of a downward-closed family in depth-first order.
template <class Pred, class Visit>
void for_each_member(Mask universe, const Pred& member, const Visit& visit) {
  if (!member(Mask{0})) return;
  visit(Mask{0});
  auto rec = [&](auto&& self, Mask s, Mask candidates) -> void {
    while (candidates) {
      int x = std::countr_zero(candidates);
      candidates &= candidates - 1;
      Mask t = s | bit(static_cast<std::size_t>(x));
      if (!member(t)) continue;
      visit(t);
      self(self, t, candidates);
    }
  };
  rec(rec, Mask{0}, universe);
}

// True iff every binary pattern on `s` is realized by a concept defined on all of `s`.
bool is_shattered(std::span<const PartialConcept> hs, Mask s);

struct ShatterPredicate {
  std::span<const PartialConcept> hs;
  bool operator()(Mask s) const { return is_shattered(hs, s); }
};

namespace serial {
FamilyStats shattered_sets(std::span<const PartialConcept> hs, std::size_t n);
}
namespace parallel {
FamilyStats shattered_sets(std::span<const PartialConcept> hs, std::size_t n);
}

}  // namespace pcl::kernels
