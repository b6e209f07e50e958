#include "pcl/kernels.hpp"

namespace pcl::kernels {

bool is_shattered(std::span<const PartialConcept> hs, Mask s) {
  const int k = std::popcount(s);
  if (k == 0) return !hs.empty();
  if (k > 30) return false;
  const std::size_t need = std::size_t{1} << k;
  if (hs.size() < need) return false;
  std::vector<std::uint64_t> seen((need + 63) / 64, 0);
  std::size_t distinct = 0;
  for (const auto& h : hs) {
    if ((h.defined() & s) != s) continue;
    Mask p = extract_bits(h.ones(), s);
    std::uint64_t& w = seen[p >> 6];
    std::uint64_t b = std::uint64_t{1} << (p & 63);
    if (w & b) continue;
    w |= b;
    if (++distinct == need) return true;
  }
  return false;
}

namespace serial {
FamilyStats shattered_sets(std::span<const PartialConcept> hs, std::size_t n) {
  return enumerate_family_serial(low_bits(n), ShatterPredicate{hs});
}
}  // namespace serial

namespace parallel {
FamilyStats shattered_sets(std::span<const PartialConcept> hs, std::size_t n) {
  return enumerate_family_parallel(low_bits(n), ShatterPredicate{hs});
}
}  // namespace parallel

}  // namespace pcl::kernels
