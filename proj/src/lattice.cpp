#include "udist/lattice.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace udist {

namespace {

using ColumnHeap = std::priority_queue<std::pair<std::size_t, std::size_t>,
                                       std::vector<std::pair<std::size_t, std::size_t>>, std::greater<>>;

}  // namespace

RowLattice::RowLattice(std::size_t cols, std::vector<SparseIntVector> rows, bool track)
    : cols_(cols), input_rows_(rows.size()), tracked_(track) {
  for (const auto& r : rows)
    if (r.extent() > cols_) throw std::out_of_range("RowLattice: row exceeds column count");
  eliminate(std::move(rows), track);
}

void RowLattice::eliminate(std::vector<SparseIntVector> rows, bool track) {
  const std::size_t m = rows.size();
  std::vector<SparseIntVector> tags(track ? m : 0);
  if (track)
    for (std::size_t i = 0; i < m; ++i) tags[i] = SparseIntVector::unit(i);
  std::vector<char> alive(m, 1);
  std::vector<std::vector<std::uint32_t>> col_rows(cols_);
  std::vector<char> col_done(cols_, 0);
  pivot_of_col_.assign(cols_, -1);

  auto retire_if_zero = [&](std::size_t i) {
    if (alive[i] && rows[i].empty()) {
      alive[i] = 0;
      if (track) kernel_.push_back(std::move(tags[i]));
    }
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : rows[i].entries()) col_rows[e.index].push_back(static_cast<std::uint32_t>(i));
    retire_if_zero(i);
  }
  ColumnHeap heap;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!col_rows[c].empty()) heap.emplace(col_rows[c].size(), c);

  auto clean = [&](std::size_t c) {
    auto& list = col_rows[c];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](std::uint32_t i) { return !alive[i] || rows[i].find(c) == nullptr; }),
               list.end());
  };

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
    std::size_t pivot = 0;
    for (;;) {
      auto better = [&](std::uint32_t a, std::uint32_t b) {
        int cmp = mpz_cmpabs(rows[a].find(c)->get_mpz_t(), rows[b].find(c)->get_mpz_t());
        if (cmp != 0) return cmp < 0;
        if (rows[a].size() != rows[b].size()) return rows[a].size() < rows[b].size();
        return a < b;
      };
      pivot = *std::min_element(active.begin(), active.end(), better);
      const Integer p = *rows[pivot].find(c);
      std::vector<std::uint32_t> remaining;
      for (std::uint32_t i : active) {
        if (i == pivot) continue;
        Integer q = floor_div(*rows[i].find(c), p);
        Integer neg = -q;
        axpy_tracked(
            rows[i], rows[pivot], neg,
            [&](std::size_t col) {
              col_rows[col].push_back(i);
              if (!col_done[col]) heap.emplace(col_rows[col].size(), col);
            },
            [](std::size_t) {});
        if (track) tags[i].add_scaled(tags[pivot], neg);
        if (rows[i].find(c) != nullptr)
          remaining.push_back(i);
        else
          retire_if_zero(i);
      }
      if (remaining.empty()) break;
      remaining.push_back(static_cast<std::uint32_t>(pivot));
      active = std::move(remaining);
    }
    if (*rows[pivot].find(c) < 0) {
      rows[pivot].negate();
      if (track) tags[pivot].negate();
    }
    col_done[c] = 1;
    alive[pivot] = 0;
    pivot_of_col_[c] = static_cast<long>(basis_.size());
    pivot_col_.push_back(c);
    basis_.push_back(std::move(rows[pivot]));
    if (track) tags_.push_back(std::move(tags[pivot]));
  }
}

SparseIntVector RowLattice::reduce(SparseIntVector v, SparseIntVector* combination) const {
  if (combination != nullptr && !tracked_) throw std::logic_error("RowLattice::reduce: tracking disabled");
  if (combination != nullptr) *combination = SparseIntVector();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> pending;
  for (const auto& e : v.entries())
    if (e.index < cols_ && pivot_of_col_[e.index] >= 0) pending.push(static_cast<std::size_t>(pivot_of_col_[e.index]));
  std::size_t last = 0;
  bool first = true;
  while (!pending.empty()) {
    std::size_t i = pending.top();
    pending.pop();
    if (!first && i == last) continue;
    first = false;
    last = i;
    const Integer* x = v.find(pivot_col_[i]);
    if (x == nullptr) continue;
    Integer q = floor_div(*x, *basis_[i].find(pivot_col_[i]));
    if (q == 0) continue;
    Integer neg = -q;
    axpy_tracked(
        v, basis_[i], neg,
        [&](std::size_t col) {
          if (col < cols_ && pivot_of_col_[col] > static_cast<long>(i))
            pending.push(static_cast<std::size_t>(pivot_of_col_[col]));
        },
        [](std::size_t) {});
    if (combination != nullptr) combination->add_scaled(tags_[i], q);
  }
  return v;
}

const std::vector<SparseIntVector>& RowLattice::kernel() const {
  if (!tracked_) throw std::logic_error("RowLattice::kernel: tracking disabled");
  return kernel_;
}

const SparseIntVector& RowLattice::basis_tag(std::size_t i) const {
  if (!tracked_) throw std::logic_error("RowLattice::basis_tag: tracking disabled");
  return tags_.at(i);
}

SparseIntVector RowLattice::project_units(SparseIntVector v) const {
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> pending;
  auto is_unit = [&](std::size_t i) { return *basis_[i].find(pivot_col_[i]) == 1; };
  for (const auto& e : v.entries())
    if (pivot_of_col_[e.index] >= 0 && is_unit(static_cast<std::size_t>(pivot_of_col_[e.index])))
      pending.push(static_cast<std::size_t>(pivot_of_col_[e.index]));
  while (!pending.empty()) {
    std::size_t i = pending.top();
    pending.pop();
    const Integer* x = v.find(pivot_col_[i]);
    if (x == nullptr) continue;
    Integer neg = -*x;
    axpy_tracked(
        v, basis_[i], neg,
        [&](std::size_t col) {
          long j = pivot_of_col_[col];
          if (j > static_cast<long>(i) && is_unit(static_cast<std::size_t>(j)))
            pending.push(static_cast<std::size_t>(j));
        },
        [](std::size_t) {});
  }
  return v;
}

const RowLattice::Quotient& RowLattice::quotient() const {
  std::call_once(cache_->once, [this] {
    auto q = std::make_unique<Quotient>();
    q->kept_index.assign(cols_, -1);
    std::vector<char> unit_col(cols_, 0);
    std::vector<std::size_t> nonunit;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (*basis_[i].find(pivot_col_[i]) == 1)
        unit_col[pivot_col_[i]] = 1;
      else
        nonunit.push_back(i);
    }
    for (std::size_t c = 0; c < cols_; ++c)
      if (!unit_col[c]) {
        q->kept_index[c] = static_cast<long>(q->kept.size());
        q->kept.push_back(c);
      }
    std::vector<SparseIntVector> reduced;
    std::vector<char> in_support(cols_, 0);
    for (std::size_t i : nonunit) {
      reduced.push_back(project_units(basis_[i]));
      for (const auto& e : reduced.back().entries()) in_support[e.index] = 1;
    }
    std::vector<long> support_index(cols_, -1);
    for (std::size_t c = 0; c < cols_; ++c) {
      if (in_support[c]) {
        support_index[c] = static_cast<long>(q->torsion_support.size());
        q->torsion_support.push_back(c);
      } else if (!unit_col[c]) {
        q->free_columns.push_back(c);
      }
    }
    const std::size_t s = q->torsion_support.size();
    SparseIntMatrix t(0, s);
    for (const auto& r : reduced)
      t.append_row(r.remapped([](std::size_t) { return true; },
                              [&](std::size_t c) { return static_cast<std::size_t>(support_index[c]); }));
    SmithForm snf = smith_normal_form(t);
    q->V = std::move(snf.V);
    q->V_inverse = unimodular_inverse(q->V);
    for (std::size_t i = 0; i < reduced.size(); ++i) q->diagonal.push_back(snf.S.at(i, i));
    q->first_torsion = q->diagonal.size();
    for (std::size_t i = 0; i < q->diagonal.size(); ++i) {
      if (q->diagonal[i] == 0) throw std::logic_error("RowLattice: dependent non-unit rows");
      if (q->diagonal[i] != 1) {
        if (q->first_torsion == q->diagonal.size()) q->first_torsion = i;
        q->invariant_factors.push_back(q->diagonal[i]);
      } else if (q->first_torsion != q->diagonal.size()) {
        throw std::logic_error("RowLattice: Smith diagonal out of order");
      }
    }
    cache_->data = std::move(q);
  });
  return *cache_->data;
}

const std::vector<Integer>& RowLattice::invariant_factors() const { return quotient().invariant_factors; }

const std::vector<std::size_t>& RowLattice::kept_columns() const { return quotient().kept; }

SparseIntVector RowLattice::finish_coordinates(const SparseIntVector& y) const {
  const Quotient& q = quotient();
  const std::size_t s = q.torsion_support.size();
  std::vector<Integer> ys(s, 0);
  for (const auto& e : y.entries()) {
    auto it = std::lower_bound(q.torsion_support.begin(), q.torsion_support.end(), e.index);
    if (it != q.torsion_support.end() && *it == e.index)
      ys[static_cast<std::size_t>(it - q.torsion_support.begin())] = e.value;
  }
  std::vector<Integer> z(s, 0);
  for (std::size_t k = 0; k < s; ++k) {
    if (ys[k] == 0) continue;
    for (std::size_t i = 0; i < s; ++i) z[i] += ys[k] * q.V[k][i];
  }
  std::vector<std::pair<std::size_t, Integer>> out;
  std::size_t pos = 0;
  for (std::size_t i = q.first_torsion; i < q.diagonal.size(); ++i, ++pos)
    out.emplace_back(pos, mod_floor(z[i], q.diagonal[i]));
  for (std::size_t i = q.diagonal.size(); i < s; ++i, ++pos) out.emplace_back(pos, z[i]);
  for (const auto& e : y.entries()) {
    auto it = std::lower_bound(q.free_columns.begin(), q.free_columns.end(), e.index);
    if (it != q.free_columns.end() && *it == e.index)
      out.emplace_back(pos + static_cast<std::size_t>(it - q.free_columns.begin()), e.value);
  }
  return SparseIntVector::from_pairs(std::move(out));
}

SparseIntVector RowLattice::sparse_coordinates(const SparseIntVector& v) const {
  return finish_coordinates(project_units(v));
}

std::vector<Integer> RowLattice::coordinates(const SparseIntVector& v) const {
  std::vector<Integer> out(coordinate_count(), 0);
  const SparseIntVector c = sparse_coordinates(v);
  for (const auto& e : c.entries()) out[e.index] = e.value;
  return out;
}

std::vector<SparseIntVector> RowLattice::coordinate_table() const {
  const Quotient& q = quotient();
  std::vector<SparseIntVector> table = projection_table();
  for (auto& row : table)
    row = finish_coordinates(row.remapped([](std::size_t) { return true; }, [&](std::size_t k) { return q.kept[k]; }));
  return table;
}

SparseIntVector RowLattice::lift(std::size_t i) const {
  const Quotient& q = quotient();
  const std::size_t torsion = q.diagonal.size() - q.first_torsion;
  const std::size_t s = q.torsion_support.size();
  std::size_t k;
  if (i < torsion)
    k = q.first_torsion + i;
  else if (i < torsion + (s - q.diagonal.size()))
    k = q.diagonal.size() + (i - torsion);
  else {
    std::size_t f = i - torsion - (s - q.diagonal.size());
    if (f >= q.free_columns.size()) throw std::out_of_range("RowLattice::lift");
    return SparseIntVector::unit(q.free_columns[f]);
  }
  std::vector<std::pair<std::size_t, Integer>> pairs;
  for (std::size_t j = 0; j < s; ++j)
    if (q.V_inverse[k][j] != 0) pairs.emplace_back(q.torsion_support[j], q.V_inverse[k][j]);
  return SparseIntVector::from_pairs(std::move(pairs));
}

std::vector<SparseIntVector> RowLattice::projection_table() const {
  const Quotient& q = quotient();
  std::vector<SparseIntVector> table(cols_);
  for (std::size_t c : q.kept) table[c] = SparseIntVector::unit(static_cast<std::size_t>(q.kept_index[c]));
  for (std::size_t n = basis_.size(); n-- > 0;) {
    const std::size_t c = pivot_col_[n];
    if (*basis_[n].find(c) != 1) continue;
    // e_c = -(row - e_c) modulo the lattice; later pivots are already resolved.
    SparseIntVector acc;
    for (const auto& e : basis_[n].entries()) {
      if (e.index == c) continue;
      acc.add_scaled(table[e.index], -e.value);
    }
    table[c] = std::move(acc);
  }
  return table;
}

MatrixInvariants matrix_invariants(const SparseIntMatrix& a) {
  RowLattice lattice(a.cols(), a.row_data());
  MatrixInvariants out;
  out.rank = lattice.rank();
  out.elementary_divisors = lattice.invariant_factors();
  return out;
}

DenseIntMatrix unimodular_inverse(const DenseIntMatrix& v) {
  const std::size_t n = v.size();
  DenseIntMatrix aug(n, std::vector<Integer>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i].size() != n) throw std::invalid_argument("unimodular_inverse: not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = v[i][j];
    aug[i][n + i] = 1;
  }
  DenseIntMatrix h = hermite_normal_form(aug);
  DenseIntMatrix inv(n, std::vector<Integer>(n, 0));
  if (h.size() != n) throw std::invalid_argument("unimodular_inverse: singular");
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i][i] != 1) throw std::invalid_argument("unimodular_inverse: not unimodular");
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = h[i][n + j];
  }
  return inv;
}

}  // namespace udist
