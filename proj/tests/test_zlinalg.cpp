#include "udist/dense_mod.hpp"
#include "udist/mod_echelon.hpp"
#include "udist/normal_form.hpp"
#include "udist/presented_module.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <set>

using namespace udist;

namespace {

DenseIntMatrix random_dense(std::mt19937& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  DenseIntMatrix a(rows, std::vector<Integer>(cols));
  for (auto& row : a)
    for (auto& x : row) x = dist(rng);
  return a;
}

// gcd of all k×k minors, by brute force over row and column subsets.
Integer determinantal_divisor(const DenseIntMatrix& a, std::size_t k) {
  const std::size_t m = a.size(), n = a[0].size();
  Integer g = 0;
  std::vector<std::size_t> rs, cs;
  std::function<void(std::size_t)> pick_cols;
  std::function<void(std::size_t)> pick_rows = [&](std::size_t from) {
    if (rs.size() == k) {
      pick_cols(0);
      return;
    }
    for (std::size_t i = from; i < m; ++i) {
      rs.push_back(i);
      pick_rows(i + 1);
      rs.pop_back();
    }
  };
  pick_cols = [&](std::size_t from) {
    if (cs.size() == k) {
      DenseIntMatrix sub(k, std::vector<Integer>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[rs[i]][cs[j]];
      const Integer d = determinant(sub);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t j = from; j < n; ++j) {
      cs.push_back(j);
      pick_cols(j + 1);
      cs.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

std::vector<Residue> to_residues(const ModVector& v, std::size_t n) {
  std::vector<Residue> out(n, 0);
  for (const auto& e : v) out[e.index] = e.value;
  return out;
}

ModVector from_residues(const std::vector<Residue>& v) {
  ModVector out;
  for (std::uint32_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.push_back({i, v[i]});
  return out;
}

// Every combination Σ c_i row_i over Z/M.
std::set<std::vector<Residue>> brute_span(const std::vector<std::vector<Residue>>& rows, std::size_t n, std::uint32_t m) {
  std::set<std::vector<Residue>> span;
  std::vector<Residue> c(rows.size(), 0);
  while (true) {
    std::vector<Residue> v(n, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) v[j] = static_cast<Residue>((v[j] + std::uint64_t{c[i]} * rows[i][j]) % m);
    span.insert(v);
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == m) c[k++] = 0;
    if (k == c.size()) break;
  }
  return span;
}

std::vector<std::vector<Residue>> all_vectors(std::size_t n, std::uint32_t m) {
  std::vector<std::vector<Residue>> out;
  std::vector<Residue> v(n, 0);
  while (true) {
    out.push_back(v);
    std::size_t k = 0;
    while (k < n && ++v[k] == m) v[k++] = 0;
    if (k == n) break;
  }
  return out;
}

}  // namespace

TEST_CASE("smith normal form matches determinantal divisors") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + trial % 3, n = 2 + (trial / 3) % 3;
    const DenseIntMatrix a = random_dense(rng, m, n, -6, 6);
    const SmithForm s = smith_normal_form(SparseIntMatrix::from_dense(a, n));
    CHECK(multiply(multiply(s.U, a), s.V) == s.S.to_dense());
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    const auto diag = s.diagonal();
    Integer prefix = 1;
    for (std::size_t k = 1; k <= std::min(m, n); ++k) {
      const Integer dk = determinantal_divisor(a, k);
      if (k <= diag.size()) {
        prefix *= diag[k - 1];
        CHECK(prefix == dk);
        if (k > 1) CHECK(diag[k - 1] % diag[k - 2] == 0);
      } else {
        CHECK(dk == 0);
      }
    }
  }
}

TEST_CASE("smith normal form of a fixed example") {
  // diag(2, 6) up to units: the classic [[2,4,4],[-6,6,12],[10,-4,-16]] has SNF diag(2,6,12).
  const DenseIntMatrix a = {{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  const auto d = smith_normal_form(SparseIntMatrix::from_dense(a, 3)).diagonal();
  REQUIRE(d.size() == 3);
  CHECK(d[0] == 2);
  CHECK(d[1] == 6);
  CHECK(d[2] == 12);
}

TEST_CASE("hermite normal form spans the same lattice") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseIntMatrix a = random_dense(rng, 4, 3, -9, 9);
    const DenseIntMatrix h = hermite_normal_form(a);
    std::vector<SparseIntVector> rows;
    for (const auto& r : a) {
      const auto red = reduce_by_hnf(r, h);
      CHECK(std::all_of(red.begin(), red.end(), [](const Integer& x) { return x == 0; }));
      std::vector<std::pair<std::size_t, Integer>> p;
      for (std::size_t j = 0; j < r.size(); ++j) p.emplace_back(j, r[j]);
      rows.push_back(SparseIntVector::from_pairs(p));
    }
    const RowLattice lat(3, rows);
    std::size_t last_pivot = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      std::vector<std::pair<std::size_t, Integer>> p;
      for (std::size_t j = 0; j < h[i].size(); ++j) p.emplace_back(j, h[i][j]);
      CHECK(lat.contains(SparseIntVector::from_pairs(p)));
      std::size_t pivot = 0;
      while (h[i][pivot] == 0) ++pivot;
      CHECK(h[i][pivot] > 0);
      if (i > 0) CHECK(pivot > last_pivot);
      for (std::size_t k = 0; k < i; ++k) {
        CHECK(h[k][pivot] >= 0);
        CHECK(h[k][pivot] < h[i][pivot]);
      }
      last_pivot = pivot;
    }
    CHECK(h.size() == lat.rank());
  }
}

TEST_CASE("solve_linear agrees with brute force over Z/6") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> dist(0, 5);
  for (int trial = 0; trial < 60; ++trial) {
    DenseIntMatrix a(2, std::vector<Integer>(2));
    for (auto& r : a)
      for (auto& x : r) x = dist(rng);
    const std::vector<Integer> b = {dist(rng), dist(rng)};
    bool brute = false;
    for (int x = 0; x < 6 && !brute; ++x)
      for (int y = 0; y < 6 && !brute; ++y)
        brute = (a[0][0] * x + a[0][1] * y - b[0]) % 6 == 0 && (a[1][0] * x + a[1][1] * y - b[1]) % 6 == 0;
    const auto sol = solve_linear(SparseIntMatrix::from_dense(a, 2), b, 6);
    CHECK(sol.has_value() == brute);
    if (sol)
      for (int i = 0; i < 2; ++i) CHECK(mod_floor(a[i][0] * (*sol)[0] + a[i][1] * (*sol)[1] - b[i], 6) == 0);
  }
}

TEST_CASE("solve_linear over Z") {
  CHECK_FALSE(solve_linear(SparseIntMatrix::from_dense({{2}}, 1), {1}, 0).has_value());
  const auto s = solve_linear(SparseIntMatrix::from_dense({{2, 3}, {1, 1}}, 2), {7, 3}, 0);
  REQUIRE(s.has_value());
  CHECK(2 * (*s)[0] + 3 * (*s)[1] == 7);
  CHECK((*s)[0] + (*s)[1] == 3);
}

TEST_CASE("row lattice coordinates separate cosets") {
  // Z^3 / <(2,0,0), (0,3,3)> ≅ Z/6 ⊕ Z.
  const RowLattice lat(3, {SparseIntVector::from_pairs({{0, 2}}), SparseIntVector::from_pairs({{1, 3}, {2, 3}})});
  CHECK(lat.invariant_factors() == std::vector<Integer>{6});
  CHECK(lat.free_rank() == 1);
  const SparseIntVector v = SparseIntVector::from_pairs({{0, 1}, {1, 5}, {2, -1}});
  const SparseIntVector w = v + Integer(4) * SparseIntVector::from_pairs({{1, 3}, {2, 3}}) + SparseIntVector::unit(0, 6);
  CHECK(lat.coordinates(v) == lat.coordinates(w));
  CHECK(lat.coordinates(v) != lat.coordinates(v + SparseIntVector::unit(2)));
  for (std::size_t i = 0; i < lat.coordinate_count(); ++i) {
    auto c = lat.coordinates(lat.lift(i));
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k] == (k == i ? 1 : 0));
  }
}

TEST_CASE("module homomorphisms: kernel, image, cokernel") {
  const PresentedModule z({"e"}, SparseIntMatrix(0, 1));
  const ModuleHom twice(z, z, {SparseIntVector::unit(0, 2)});
  CHECK(twice.injective());
  CHECK_FALSE(twice.surjective());
  CHECK(twice.cokernel().module.invariant_factors() == std::vector<Integer>{2});

  const PresentedModule z4({"e"}, SparseIntMatrix::from_dense({{4}}, 1));
  const PresentedModule z2({"e"}, SparseIntMatrix::from_dense({{2}}, 1));
  const ModuleHom proj(z4, z2, {SparseIntVector::unit(0)});
  CHECK(proj.surjective());
  CHECK(proj.kernel().module.invariant_factors() == std::vector<Integer>{2});
  CHECK(proj.image().module.invariant_factors() == std::vector<Integer>{2});

  CHECK_THROWS_AS(ModuleHom(z2, z, {SparseIntVector::unit(0)}), NotHomomorphism);
}

TEST_CASE("mod echelon matches brute-force spans for composite moduli") {
  std::mt19937 rng(17);
  for (std::uint32_t m : {4u, 6u, 9u}) {
    std::uniform_int_distribution<std::uint32_t> dist(0, m - 1);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<std::vector<Residue>> rows(3, std::vector<Residue>(3));
      for (auto& r : rows)
        for (auto& x : r) x = dist(rng);
      std::vector<ModVector> mrows;
      for (const auto& r : rows) mrows.push_back(from_residues(r));
      const ModEchelon e(m, 3, mrows, /*track=*/true);
      const auto span = brute_span(rows, 3, m);
      for (const auto& v : all_vectors(3, m)) {
        const bool in = span.count(v) > 0;
        CHECK(e.contains(from_residues(v)) == in);
        if (in) {
          const auto c = e.express(from_residues(v));
          REQUIRE(c.has_value());
          ModVector back;
          for (const auto& t : *c) mod_axpy(back, mrows[t.index], t.value, m);
          CHECK(back == from_residues(v));
        }
      }
      std::size_t order = 1;
      for (auto f : e.span_order_factors()) order *= f;
      CHECK(order == span.size());
      // Left kernel: every vector kills the rows, and there are M^3/|span| of them.
      std::vector<std::vector<Residue>> kernel;
      for (const auto& k : e.kernel()) {
        ModVector img;
        for (const auto& t : k) mod_axpy(img, mrows[t.index], t.value, m);
        CHECK(img.empty());
        kernel.push_back(to_residues(k, 3));
      }
      CHECK(brute_span(kernel, 3, m).size() * span.size() == std::size_t{m} * m * m);
    }
  }
}

TEST_CASE("dense Howell form: parallel equals reference and reduction decides membership") {
  std::mt19937 rng(23);
  for (std::uint32_t m : {3u, 12u}) {
    std::uniform_int_distribution<std::uint32_t> dist(0, m - 1);
    for (int trial = 0; trial < 20; ++trial) {
      DenseModMatrix a(4, 3, m);
      std::vector<std::vector<Residue>> rows;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 3; ++j) a.at(i, j) = dist(rng);
        rows.push_back(a.row(i));
      }
      const DenseModMatrix h = howell_form(a);
      CHECK(h == howell_form_reference(a));
      const auto span = brute_span(rows, 3, m);
      for (const auto& v : all_vectors(3, m)) {
        const auto red = howell_reduce(v, h);
        CHECK(std::all_of(red.begin(), red.end(), [](Residue x) { return x == 0; }) == (span.count(v) > 0));
      }
      std::size_t order = 1;
      for (auto f : howell_order_factors(h)) order *= f;
      CHECK(order == span.size());
      CHECK(left_kernel(a, true) == left_kernel(a, false));
    }
  }
}

TEST_CASE("dense Howell form on a larger matrix") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<std::uint32_t> dist(0, 11);
  DenseModMatrix a(60, 50, 12);
  for (std::size_t i = 0; i < 60; ++i)
    for (std::size_t j = 0; j < 50; ++j) a.at(i, j) = dist(rng) * (dist(rng) % 3) % 12;
  CHECK(howell_form(a) == howell_form_reference(a));
}

TEST_CASE("small fixed examples") {
  CHECK(smith_normal_form(SparseIntMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3)).diagonal() ==
        std::vector<Integer>{1, 1, 1});
  CHECK(smith_normal_form(SparseIntMatrix::from_dense({{0, 0}, {0, 0}}, 2)).diagonal().empty());
  CHECK(smith_normal_form(SparseIntMatrix::from_dense({{2, 4}, {6, 8}}, 2)).diagonal() == std::vector<Integer>{2, 4});

  CHECK(solve_linear(SparseIntMatrix::from_dense({{1}}, 1), {5}, 0) == std::vector<Integer>{5});
  CHECK(solve_linear(SparseIntMatrix::from_dense({{2}}, 1), {1}, 3) == std::vector<Integer>{2});

  CHECK(PresentedModule({"e"}, SparseIntMatrix(0, 1)).free_rank() == 1);
  const PresentedModule z6({"e"}, SparseIntMatrix::from_dense({{6}}, 1));
  CHECK(z6.invariant_factors() == std::vector<Integer>{6});
  CHECK(z6.free_rank() == 0);

  // The U_7 relation on 7 generators: Σ_{j=1}^{6} e_j.
  const PresentedModule u7(std::vector<std::string>(7, "g"),
                           SparseIntMatrix::from_dense({{0, 1, 1, 1, 1, 1, 1}}, 7));
  CHECK(u7.free_rank() == 6);
  CHECK(u7.is_free());

  const PresentedModule z({"e"}, SparseIntMatrix(0, 1));
  CHECK(ModuleHom(z, z, {SparseIntVector::unit(0, 6)}).cokernel().module.invariant_factors() ==
        std::vector<Integer>{6});
  const PresentedModule z2free({"a", "b"}, SparseIntMatrix(0, 2));
  const auto ker = ModuleHom(z2free, z2free, {SparseIntVector(), SparseIntVector()}).kernel().module;
  CHECK(ker.free_rank() == 2);
  CHECK(ker.invariant_factors().empty());
}
