#include "udist/normal_form.hpp"

#include "udist/dense_mod.hpp"
#include "udist/lattice.hpp"
#include "udist/mod_echelon.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace udist {

namespace {

void row_combine(DenseIntMatrix& a, std::size_t i, std::size_t k, const Integer& s, const Integer& t,
                 const Integer& u, const Integer& v) {
  // (row_i, row_k) <- (s*row_i + t*row_k, u*row_i + v*row_k)
  for (std::size_t j = 0; j < a[i].size(); ++j) {
    Integer x = s * a[i][j] + t * a[k][j];
    Integer y = u * a[i][j] + v * a[k][j];
    a[i][j] = std::move(x);
    a[k][j] = std::move(y);
  }
}

void col_combine(DenseIntMatrix& a, std::size_t i, std::size_t k, const Integer& s, const Integer& t,
                 const Integer& u, const Integer& v) {
  for (auto& row : a) {
    Integer x = s * row[i] + t * row[k];
    Integer y = u * row[i] + v * row[k];
    row[i] = std::move(x);
    row[k] = std::move(y);
  }
}

struct Bezout {
  Integer g, s, t;
};

Bezout bezout(const Integer& a, const Integer& b) {
  Bezout r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) {
    Integer x = S.at(i, i);
    if (x != 0) d.push_back(x);
  }
  return d;
}

SmithForm smith_normal_form(const SparseIntMatrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  DenseIntMatrix a = input.to_dense();
  DenseIntMatrix u = identity_matrix(m);
  DenseIntMatrix v = identity_matrix(n);

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    std::vector<std::size_t> rc(m, 0), cc(n, 0);
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0) {
          ++rc[i];
          ++cc[j];
        }
    bool found = false;
    std::tuple<std::size_t, Integer, std::size_t, std::size_t> best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (a[i][j] == 0) continue;
        auto cand = std::make_tuple((rc[i] - 1) * (cc[j] - 1), Integer(abs(a[i][j])), i, j);
        if (!found || cand < best) {
          best = cand;
          found = true;
        }
      }
    if (!found) break;
    auto [cost, mag, pi, pj] = best;
    (void)cost;
    (void)mag;
    std::swap(a[t], a[pi]);
    std::swap(u[t], u[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    for (auto& row : v) std::swap(row[t], row[pj]);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        if (mpz_divisible_p(a[i][t].get_mpz_t(), a[t][t].get_mpz_t())) {
          Integer q = a[i][t] / a[t][t];
          row_combine(a, t, i, 1, 0, -q, 1);
          row_combine(u, t, i, 1, 0, -q, 1);
        } else {
          auto [g, s, w] = bezout(a[t][t], a[i][t]);
          Integer p = a[t][t] / g, q = a[i][t] / g;
          row_combine(a, t, i, s, w, -q, p);
          row_combine(u, t, i, s, w, -q, p);
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        if (mpz_divisible_p(a[t][j].get_mpz_t(), a[t][t].get_mpz_t())) {
          Integer q = a[t][j] / a[t][t];
          col_combine(a, t, j, 1, 0, -q, 1);
          col_combine(v, t, j, 1, 0, -q, 1);
        } else {
          auto [g, s, w] = bezout(a[t][t], a[t][j]);
          Integer p = a[t][t] / g, q = a[t][j] / g;
          col_combine(a, t, j, s, w, -q, p);
          col_combine(v, t, j, s, w, -q, p);
          dirty = true;
        }
      }
      if (dirty) continue;
      bool column_clear = true;
      for (std::size_t i = t + 1; i < m; ++i)
        if (a[i][t] != 0) column_clear = false;
      if (!column_clear) continue;
      std::size_t bad_row = m;
      for (std::size_t i = t + 1; i < m && bad_row == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] != 0 && !mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
            bad_row = i;
            break;
          }
      if (bad_row == m) break;
      row_combine(a, t, bad_row, 1, 1, 0, 1);
      row_combine(u, t, bad_row, 1, 1, 0, 1);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }
  return {std::move(u), SparseIntMatrix::from_dense(a, n), std::move(v)};
}

DenseIntMatrix hermite_normal_form(const DenseIntMatrix& rows) {
  DenseIntMatrix a = rows;
  if (a.empty()) return a;
  const std::size_t n = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < a.size(); ++c) {
    for (;;) {
      std::size_t piv = a.size();
      for (std::size_t i = r; i < a.size(); ++i)
        if (a[i][c] != 0 && (piv == a.size() || abs(a[i][c]) < abs(a[piv][c]))) piv = i;
      if (piv == a.size()) break;
      std::swap(a[r], a[piv]);
      bool others = false;
      for (std::size_t i = r + 1; i < a.size(); ++i) {
        if (a[i][c] == 0) continue;
        Integer q = floor_div(a[i][c], a[r][c]);
        for (std::size_t j = c; j < n; ++j) a[i][j] -= q * a[r][j];
        if (a[i][c] != 0) others = true;
      }
      if (!others) break;
    }
    if (r >= a.size() || a[r][c] == 0) continue;
    if (a[r][c] < 0)
      for (auto& x : a[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = floor_div(a[i][c], a[r][c]);
      if (q != 0)
        for (std::size_t j = c; j < n; ++j) a[i][j] -= q * a[r][j];
    }
    ++r;
  }
  a.resize(r);
  return a;
}

std::vector<Integer> reduce_by_hnf(std::vector<Integer> v, const DenseIntMatrix& hnf) {
  for (const auto& row : hnf) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    Integer q = floor_div(v[c], row[c]);
    if (q != 0)
      for (std::size_t j = c; j < v.size(); ++j) v[j] -= q * row[j];
  }
  return v;
}

std::optional<std::vector<Integer>> solve_linear(const SparseIntMatrix& a, const std::vector<Integer>& b,
                                                 const Integer& modulus) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: right-hand side size mismatch");
  if (modulus < 0) throw std::invalid_argument("solve_linear: negative modulus");
  const std::size_t n = a.cols();
  // A x = b  <=>  x^T A^T = b^T : express b as a combination of the columns of A.
  SparseIntMatrix at = a.transpose();
  std::vector<std::pair<std::size_t, Integer>> bp;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] != 0) bp.emplace_back(i, b[i]);
  SparseIntVector target = SparseIntVector::from_pairs(std::move(bp));

  if (modulus == 0) {
    RowLattice lattice(a.rows(), at.row_data(), /*track=*/true);
    SparseIntVector combination;
    SparseIntVector rest = lattice.reduce(target, &combination);
    if (!rest.empty()) return std::nullopt;
    std::vector<Integer> x(n, 0);
    for (const auto& e : combination.entries()) x[e.index] = e.value;
    DenseIntMatrix kernel;
    for (const auto& k : lattice.kernel()) {
      std::vector<Integer> row(n, 0);
      for (const auto& e : k.entries()) row[e.index] = e.value;
      kernel.push_back(std::move(row));
    }
    return reduce_by_hnf(std::move(x), hermite_normal_form(kernel));
  }

  if (!modulus.fits_uint_p() || modulus > std::numeric_limits<std::uint32_t>::max() / 2)
    throw std::invalid_argument("solve_linear: modulus too large");
  const auto m = static_cast<std::uint32_t>(modulus.get_ui());
  if (m == 1) return std::vector<Integer>(n, 0);
  std::vector<ModVector> rows;
  rows.reserve(n);
  for (const auto& r : at.row_data()) rows.push_back(mod_reduce(r, m));
  ModEchelon echelon(m, a.rows(), std::move(rows), /*track=*/true);
  auto combination = echelon.express(mod_reduce(target, m));
  if (!combination) return std::nullopt;
  std::vector<Residue> x(n, 0);
  for (const auto& e : *combination) x[e.index] = e.value;
  DenseModMatrix kernel(echelon.kernel().size(), n, m);
  for (std::size_t i = 0; i < echelon.kernel().size(); ++i)
    for (const auto& e : echelon.kernel()[i]) kernel.at(i, e.index) = e.value;
  DenseModMatrix howell = howell_form(std::move(kernel));
  x = howell_reduce(std::move(x), howell);
  std::vector<Integer> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = x[j];
  return out;
}

}  // namespace udist
