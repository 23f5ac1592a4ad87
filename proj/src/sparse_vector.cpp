#include "udist/sparse_vector.hpp"

#include <algorithm>

namespace udist {

SparseIntVector SparseIntVector::from_pairs(std::vector<std::pair<std::size_t, Integer>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  SparseIntVector v;
  for (auto& [idx, val] : pairs) {
    if (!v.entries_.empty() && v.entries_.back().index == idx) {
      v.entries_.back().value += val;
      if (v.entries_.back().value == 0) v.entries_.pop_back();
    } else if (val != 0) {
      v.entries_.push_back({idx, std::move(val)});
    }
  }
  return v;
}

SparseIntVector SparseIntVector::unit(std::size_t index, const Integer& value) {
  SparseIntVector v;
  if (value != 0) v.entries_.push_back({index, value});
  return v;
}

const Integer* SparseIntVector::find(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const IntEntry& e, std::size_t i) { return e.index < i; });
  if (it == entries_.end() || it->index != index) return nullptr;
  return &it->value;
}

Integer SparseIntVector::get(std::size_t index) const {
  const Integer* p = find(index);
  return p ? *p : Integer(0);
}

void SparseIntVector::set(std::size_t index, const Integer& value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const IntEntry& e, std::size_t i) { return e.index < i; });
  if (it != entries_.end() && it->index == index) {
    if (value == 0)
      entries_.erase(it);
    else
      it->value = value;
  } else if (value != 0) {
    entries_.insert(it, {index, value});
  }
}

void SparseIntVector::add_scaled(const SparseIntVector& other, const Integer& factor) {
  if (factor == 0) return;
  axpy_tracked(*this, other, factor, [](std::size_t) {}, [](std::size_t) {});
}

void SparseIntVector::scale(const Integer& factor) {
  if (factor == 0) {
    entries_.clear();
    return;
  }
  for (auto& e : entries_) e.value *= factor;
}

void SparseIntVector::negate() {
  for (auto& e : entries_) e.value = -e.value;
}

bool operator==(const SparseIntVector& a, const SparseIntVector& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i)
    if (a.entries_[i].index != b.entries_[i].index || a.entries_[i].value != b.entries_[i].value)
      return false;
  return true;
}

SparseIntVector operator+(const SparseIntVector& a, const SparseIntVector& b) {
  SparseIntVector r = a;
  r.add_scaled(b, 1);
  return r;
}

SparseIntVector operator-(const SparseIntVector& a, const SparseIntVector& b) {
  SparseIntVector r = a;
  r.add_scaled(b, -1);
  return r;
}

SparseIntVector operator*(const Integer& k, const SparseIntVector& a) {
  SparseIntVector r = a;
  r.scale(k);
  return r;
}

ModVector mod_from_pairs(std::vector<std::pair<std::uint32_t, std::int64_t>> pairs,
                         std::uint32_t modulus) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  ModVector out;
  const auto m = static_cast<std::int64_t>(modulus);
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::size_t j = i;
    std::int64_t acc = 0;
    while (j < pairs.size() && pairs[j].first == pairs[i].first) acc = mod_i64(acc + mod_i64(pairs[j++].second, m), m);
    if (acc != 0) out.push_back({pairs[i].first, static_cast<Residue>(acc)});
    i = j;
  }
  return out;
}

ModVector mod_reduce(const SparseIntVector& v, std::uint32_t modulus) {
  ModVector out;
  out.reserve(v.size());
  for (const auto& e : v.entries()) {
    Residue r = to_residue(e.value, modulus);
    if (r != 0) out.push_back({static_cast<std::uint32_t>(e.index), r});
  }
  return out;
}

Residue mod_get(const ModVector& v, std::uint32_t index) {
  auto it = std::lower_bound(v.begin(), v.end(), index,
                             [](const ModEntry& e, std::uint32_t i) { return e.index < i; });
  return (it != v.end() && it->index == index) ? it->value : 0;
}

void mod_scale(ModVector& v, Residue factor, std::uint32_t modulus) {
  ModVector out;
  out.reserve(v.size());
  for (const auto& e : v) {
    auto x = static_cast<Residue>((std::uint64_t{e.value} * factor) % modulus);
    if (x != 0) out.push_back({e.index, x});
  }
  v = std::move(out);
}

}  // namespace udist
