#pragma once

#include "udist/integer.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace udist {

struct IntEntry {
  std::size_t index;
  Integer value;
};

/// Sparse integer vector: entries sorted by index, no stored zeros.
class SparseIntVector {
 public:
  SparseIntVector() = default;

  /// Builds from unsorted (index, value) pairs, summing duplicates.
  static SparseIntVector from_pairs(std::vector<std::pair<std::size_t, Integer>> pairs);
  static SparseIntVector unit(std::size_t index, const Integer& value = 1);

  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<IntEntry>& entries() const { return entries_; }
  [[nodiscard]] Integer get(std::size_t index) const;
  [[nodiscard]] const Integer* find(std::size_t index) const;
  /// Largest index + 1, or 0 when empty.
  [[nodiscard]] std::size_t extent() const { return empty() ? 0 : entries_.back().index + 1; }

  void set(std::size_t index, const Integer& value);
  void add_scaled(const SparseIntVector& other, const Integer& factor);
  void scale(const Integer& factor);
  void negate();
  /// Keeps only indices for which keep(index) holds, renumbered via map(index).
  template <typename Keep, typename Map>
  [[nodiscard]] SparseIntVector remapped(Keep keep, Map map) const {
    std::vector<std::pair<std::size_t, Integer>> out;
    for (const auto& e : entries_)
      if (keep(e.index)) out.emplace_back(map(e.index), e.value);
    return from_pairs(std::move(out));
  }

  friend bool operator==(const SparseIntVector& a, const SparseIntVector& b);
  friend SparseIntVector operator+(const SparseIntVector& a, const SparseIntVector& b);
  friend SparseIntVector operator-(const SparseIntVector& a, const SparseIntVector& b);
  friend SparseIntVector operator*(const Integer& k, const SparseIntVector& a);

  std::vector<IntEntry>& mutable_entries() { return entries_; }

 private:
  std::vector<IntEntry> entries_;
};

/// dst += factor * src, reporting indices that appear in (added) or vanish from (removed) dst.
template <typename OnAdd, typename OnRemove>
void axpy_tracked(SparseIntVector& dst, const SparseIntVector& src, const Integer& factor,
                  OnAdd on_add, OnRemove on_remove) {
  const auto& a = dst.entries();
  const auto& b = src.entries();
  std::vector<IntEntry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Integer tmp;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].index < a[i].index) {
      tmp = factor * b[j].value;
      if (tmp != 0) {
        on_add(b[j].index);
        out.push_back({b[j].index, tmp});
      }
      ++j;
    } else {
      tmp = a[i].value + factor * b[j].value;
      if (tmp != 0) {
        out.push_back({a[i].index, tmp});
      } else {
        on_remove(a[i].index);
      }
      ++i;
      ++j;
    }
  }
  dst.mutable_entries() = std::move(out);
}

struct ModEntry {
  std::uint32_t index;
  Residue value;
  friend bool operator==(const ModEntry& a, const ModEntry& b) { return a.index == b.index && a.value == b.value; }
};

/// Sparse vector over Z/M: entries sorted by index, values in (0, M).
using ModVector = std::vector<ModEntry>;

ModVector mod_from_pairs(std::vector<std::pair<std::uint32_t, std::int64_t>> pairs, std::uint32_t modulus);
ModVector mod_reduce(const SparseIntVector& v, std::uint32_t modulus);
Residue mod_get(const ModVector& v, std::uint32_t index);

/// dst += factor * src (mod M), with add/remove callbacks on the support.
template <typename OnAdd, typename OnRemove>
void mod_axpy_tracked(ModVector& dst, const ModVector& src, Residue factor, std::uint32_t modulus,
                      OnAdd on_add, OnRemove on_remove) {
  if (factor == 0 || src.empty()) return;
  ModVector out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  const std::uint64_t m = modulus;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].index < src[j].index)) {
      out.push_back(dst[i++]);
    } else if (i == dst.size() || src[j].index < dst[i].index) {
      auto v = static_cast<Residue>((std::uint64_t{factor} * src[j].value) % m);
      if (v != 0) {
        on_add(src[j].index);
        out.push_back({src[j].index, v});
      }
      ++j;
    } else {
      auto v = static_cast<Residue>((dst[i].value + std::uint64_t{factor} * src[j].value) % m);
      if (v != 0) {
        out.push_back({dst[i].index, v});
      } else {
        on_remove(dst[i].index);
      }
      ++i;
      ++j;
    }
  }
  dst = std::move(out);
}

inline void mod_axpy(ModVector& dst, const ModVector& src, Residue factor, std::uint32_t modulus) {
  mod_axpy_tracked(dst, src, factor, modulus, [](std::uint32_t) {}, [](std::uint32_t) {});
}

void mod_scale(ModVector& v, Residue factor, std::uint32_t modulus);

}  // namespace udist
