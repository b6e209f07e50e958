#include "pcl/subclass.hpp"

#include <bit>

#include "pcl/errors.hpp"

namespace pcl {

ConceptSet::ConceptSet(std::size_t universe, bool full)
    : universe_(universe), words_((universe + 63) / 64, full ? ~std::uint64_t{0} : 0) {
  if (full && (universe & 63)) words_.back() = (std::uint64_t{1} << (universe & 63)) - 1;
}

std::size_t ConceptSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool ConceptSet::empty() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::vector<std::size_t> ConceptSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < words_.size(); ++k)
    for (auto w = words_[k]; w; w &= w - 1) out.push_back(64 * k + std::countr_zero(w));
  return out;
}

ConceptSet& ConceptSet::operator&=(const ConceptSet& o) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
  return *this;
}

std::size_t ConceptSet::hash() const {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ universe_;
  for (auto w : words_) h = splitmix64(h ^ w);
  return static_cast<std::size_t>(h);
}

ClassIndex::ClassIndex(PartialConceptClass cls) : cls_(std::move(cls)) {
  std::size_t n = cls_.domain_size();
  by_label_.assign(2 * n, ConceptSet(cls_.size()));
  for (std::size_t i = 0; i < cls_.size(); ++i) {
    const auto& h = cls_[i];
    for (std::size_t x = 0; x < n; ++x) {
      Label l = h[x];
      if (l != Label::Star) by_label_[2 * x + static_cast<std::size_t>(l)].set(i);
    }
  }
}

ConceptSet ClassIndex::consistent(const LabeledSample& sample) const {
  check_sample(domain_size(), sample);
  ConceptSet s = all();
  for (const auto& e : sample) s &= with(e.x, e.y);
  return s;
}

std::vector<PartialConcept> ClassIndex::members(const ConceptSet& s) const {
  std::vector<PartialConcept> out;
  for (auto i : s.indices()) out.push_back(cls_[i]);
  return out;
}

}  // namespace pcl
