#include "udist/mod_echelon.hpp"

#include "udist/integer.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace udist {

std::uint32_t gcd_u32(std::uint32_t a, std::uint32_t b) {
  while (b != 0) {
    std::uint32_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Residue normalizing_unit(Residue a, std::uint32_t modulus) {
  const std::uint32_t g = gcd_u32(a, modulus);
  const std::uint32_t n = modulus / g;
  const std::int64_t base = n == 1 ? 0 : inverse_mod(static_cast<std::int64_t>(a / g), n);
  for (std::uint32_t k = 0; k <= g; ++k) {
    auto u = static_cast<std::uint32_t>((base + std::int64_t{k} * n) % modulus);
    if (gcd_u32(u, modulus) == 1) return u;
  }
  throw std::logic_error("normalizing_unit: no unit found");
}

namespace {

Residue neg_mod(Residue x, std::uint32_t m) { return x == 0 ? 0 : m - x; }

/// (p, q) <- (s p + t q, u p + v q) over Z/M.
void combine(ModVector& p, ModVector& q, Residue s, Residue t, Residue u, Residue v, std::uint32_t m) {
  ModVector np = p, nq = q;
  mod_scale(np, s, m);
  mod_axpy(np, q, t, m);
  mod_scale(nq, v, m);
  mod_axpy(nq, p, u, m);
  p = std::move(np);
  q = std::move(nq);
}

using ColumnHeap = std::priority_queue<std::pair<std::size_t, std::uint32_t>,
                                       std::vector<std::pair<std::size_t, std::uint32_t>>, std::greater<>>;

}  // namespace

ModEchelon::ModEchelon(std::uint32_t modulus, std::size_t cols, std::vector<ModVector> rows, bool track)
    : modulus_(modulus), cols_(cols), input_rows_(rows.size()), tracked_(track) {
  if (modulus < 2) throw std::invalid_argument("ModEchelon: modulus must be at least 2");
  const std::uint32_t m = modulus;
  for (auto& r : rows)
    for (const auto& e : r)
      if (e.index >= cols_ || e.value == 0 || e.value >= m) throw std::out_of_range("ModEchelon: bad entry");
  std::vector<ModVector> tags;
  if (track) {
    tags.resize(rows.size());
    for (std::uint32_t i = 0; i < rows.size(); ++i) tags[i] = {{i, 1}};
  }
  std::vector<char> alive(rows.size(), 1);
  std::vector<std::vector<std::uint32_t>> col_rows(cols_);
  std::vector<char> col_done(cols_, 0);
  pivot_of_col_.assign(cols_, -1);
  ColumnHeap heap;

  auto retire_if_zero = [&](std::uint32_t i) {
    if (alive[i] && rows[i].empty()) {
      alive[i] = 0;
      if (track && !tags[i].empty()) kernel_.push_back(std::move(tags[i]));
    }
  };
  auto add_row = [&](ModVector row, ModVector tag) {
    const auto i = static_cast<std::uint32_t>(rows.size());
    rows.push_back(std::move(row));
    alive.push_back(1);
    if (track) tags.push_back(std::move(tag));
    for (const auto& e : rows[i]) {
      col_rows[e.index].push_back(i);
      if (!col_done[e.index]) heap.emplace(col_rows[e.index].size(), e.index);
    }
    retire_if_zero(i);
  };
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i]) col_rows[e.index].push_back(i);
    retire_if_zero(i);
  }
  for (std::uint32_t c = 0; c < cols_; ++c)
    if (!col_rows[c].empty()) heap.emplace(col_rows[c].size(), c);

  auto clean = [&](std::uint32_t c) {
    auto& list = col_rows[c];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](std::uint32_t i) { return !alive[i] || mod_get(rows[i], c) == 0; }),
               list.end());
  };
  auto on_add_for = [&](std::uint32_t i) {
    return [&, i](std::uint32_t col) {
      col_rows[col].push_back(i);
      if (!col_done[col]) heap.emplace(col_rows[col].size(), col);
    };
  };
  auto ignore = [](std::uint32_t) {};

  while (!heap.empty()) {
    auto [count, c] = heap.top();
    heap.pop();
    if (col_done[c]) continue;
    clean(c);
    if (col_rows[c].empty()) continue;
    if (col_rows[c].size() != count) {
      heap.emplace(col_rows[c].size(), c);
      continue;
    }
    std::vector<std::uint32_t> active = col_rows[c];
    // Prefer a unit entry in the shortest row.
    std::uint32_t pivot = active.front();
    bool have_unit = false;
    for (std::uint32_t i : active) {
      const bool unit = gcd_u32(mod_get(rows[i], c), m) == 1;
      if (unit && (!have_unit || rows[i].size() < rows[pivot].size())) {
        pivot = i;
        have_unit = true;
      }
    }
    if (!have_unit) {
      for (std::uint32_t i : active)
        if (gcd_u32(mod_get(rows[i], c), m) < gcd_u32(mod_get(rows[pivot], c), m) ||
            (gcd_u32(mod_get(rows[i], c), m) == gcd_u32(mod_get(rows[pivot], c), m) &&
             rows[i].size() < rows[pivot].size()))
          pivot = i;
    }
    // Normalize the pivot entry to gcd(entry, M).
    const Residue u = normalizing_unit(mod_get(rows[pivot], c), m);
    if (u != 1) {
      mod_scale(rows[pivot], u, m);
      if (track) mod_scale(tags[pivot], u, m);
    }
    for (std::uint32_t i : active) {
      if (i == pivot) continue;
      const Residue g = mod_get(rows[pivot], c);
      const Residue b = mod_get(rows[i], c);
      if (b % g == 0) {
        const Residue f = neg_mod(b / g, m);
        mod_axpy_tracked(rows[i], rows[pivot], f, m, on_add_for(i), ignore);
        if (track) mod_axpy(tags[i], tags[pivot], f, m);
      } else {
        const auto x = xgcd_i64(g, b);
        const auto s = static_cast<Residue>(mod_i64(x.s, m));
        const auto t = static_cast<Residue>(mod_i64(x.t, m));
        const auto bg = static_cast<Residue>(b / x.g);
        const auto ag = neg_mod(static_cast<Residue>(g / x.g), m);
        combine(rows[pivot], rows[i], s, t, bg, ag, m);
        if (track) combine(tags[pivot], tags[i], s, t, bg, ag, m);
        for (const auto& e : rows[pivot]) on_add_for(pivot)(e.index);
        for (const auto& e : rows[i]) on_add_for(i)(e.index);
        const Residue w = normalizing_unit(mod_get(rows[pivot], c), m);
        if (w != 1) {
          mod_scale(rows[pivot], w, m);
          if (track) mod_scale(tags[pivot], w, m);
        }
      }
      retire_if_zero(i);
    }
    const Residue g = mod_get(rows[pivot], c);
    col_done[c] = 1;
    alive[pivot] = 0;
    pivot_of_col_[c] = static_cast<long>(basis_.size());
    pivot_col_.push_back(c);
    basis_.push_back(rows[pivot]);
    if (track) tags_.push_back(tags[pivot]);
    if (g != 1) {
      ModVector ann = rows[pivot];
      mod_scale(ann, m / g, m);
      ModVector ann_tag;
      if (track) {
        ann_tag = tags[pivot];
        mod_scale(ann_tag, m / g, m);
      }
      if (!ann.empty() || (track && !ann_tag.empty())) add_row(std::move(ann), std::move(ann_tag));
    }
  }
}

std::vector<Residue> ModEchelon::pivot_values() const {
  std::vector<Residue> out;
  for (std::size_t i = 0; i < basis_.size(); ++i) out.push_back(mod_get(basis_[i], pivot_col_[i]));
  return out;
}

std::vector<std::uint32_t> ModEchelon::span_order_factors() const {
  std::vector<std::uint32_t> out;
  for (Residue g : pivot_values()) out.push_back(modulus_ / g);
  return out;
}

ModVector ModEchelon::reduce(ModVector v, ModVector* combination) const {
  if (combination != nullptr && !tracked_) throw std::logic_error("ModEchelon::reduce: tracking disabled");
  if (combination != nullptr) combination->clear();
  const std::uint32_t m = modulus_;
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> pending;
  for (const auto& e : v)
    if (e.index < cols_ && pivot_of_col_[e.index] >= 0) pending.push(static_cast<std::size_t>(pivot_of_col_[e.index]));
  while (!pending.empty()) {
    const std::size_t i = pending.top();
    pending.pop();
    const Residue x = mod_get(v, pivot_col_[i]);
    if (x == 0) continue;
    const Residue g = mod_get(basis_[i], pivot_col_[i]);
    const Residue q = x / g;
    if (q == 0) continue;
    mod_axpy_tracked(
        v, basis_[i], neg_mod(q, m), m,
        [&](std::uint32_t col) {
          if (col < cols_ && pivot_of_col_[col] > static_cast<long>(i))
            pending.push(static_cast<std::size_t>(pivot_of_col_[col]));
        },
        [](std::uint32_t) {});
    if (combination != nullptr) mod_axpy(*combination, tags_[i], q, m);
  }
  return v;
}

std::optional<ModVector> ModEchelon::express(const ModVector& v) const {
  ModVector combination;
  if (!reduce(v, &combination).empty()) return std::nullopt;
  return combination;
}

const std::vector<ModVector>& ModEchelon::kernel() const {
  if (!tracked_) throw std::logic_error("ModEchelon::kernel: tracking disabled");
  return kernel_;
}

}  // namespace udist
