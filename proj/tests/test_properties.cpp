#include "udist/double_complex.hpp"
#include "udist/normal_form.hpp"
#include "udist/resolution.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace udist;

namespace {

std::vector<GroupElement> all_elements(const Level& level) {
  std::vector<GroupElement> out{GroupElement::identity(level)};
  for (std::uint32_t p : level.primes()) {
    std::vector<GroupElement> next;
    for (const auto& g : out)
      for (std::uint32_t e = 0; e + 1 < p; ++e) next.push_back(g * GroupElement::sigma(level, p, e));
    out = std::move(next);
  }
  return out;
}

KChain random_chain(std::mt19937& rng, std::pair<std::size_t, std::size_t> range, int terms) {
  std::uniform_int_distribution<std::size_t> pick(range.first, range.second - 1);
  std::uniform_int_distribution<int> coef(-4, 4);
  KChain c;
  for (int k = 0; k < terms; ++k) c.push_back({static_cast<std::uint32_t>(pick(rng)), coef(rng)});
  normalize(c);
  return c;
}

}  // namespace

TEST_CASE("invariant factors do not depend on generator order") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> dist(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    DenseIntMatrix a(4, std::vector<Integer>(5));
    for (auto& row : a)
      for (auto& x : row) x = dist(rng) * (trial % 2 ? 2 : 1);
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    DenseIntMatrix b = a;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) b[i][perm[j]] = a[i][j];
    const PresentedModule ma(std::vector<std::string>(5, "x"), SparseIntMatrix::from_dense(a, 5));
    const PresentedModule mb(std::vector<std::string>(5, "x"), SparseIntMatrix::from_dense(b, 5));
    CHECK(ma.invariant_factors() == mb.invariant_factors());
    CHECK(ma.free_rank() == mb.free_rank());
    for (std::size_t k = 1; k < ma.invariant_factors().size(); ++k)
      CHECK(ma.invariant_factors()[k] % ma.invariant_factors()[k - 1] == 0);
    CHECK(ma.free_rank() + ma.invariant_factors().size() <= 5);
    for (std::size_t i = 0; i < 4; ++i) CHECK(ma.is_zero(ma.relations().row(i)));
  }
}

TEST_CASE("solve_linear: no solution means none by exhaustion mod 5") {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> dist(0, 4);
  int inconsistent = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DenseIntMatrix a(3, std::vector<Integer>(3));
    for (auto& row : a)
      for (auto& x : row) x = trial % 3 ? dist(rng) * (dist(rng) % 2) : dist(rng);
    const std::vector<Integer> b = {dist(rng), dist(rng), dist(rng)};
    const auto sol = solve_linear(SparseIntMatrix::from_dense(a, 3), b, 5);
    if (sol) {
      for (int i = 0; i < 3; ++i) {
        Integer s = -b[i];
        for (int j = 0; j < 3; ++j) s += a[i][j] * (*sol)[j];
        CHECK(mod_floor(s, 5) == 0);
      }
      continue;
    }
    ++inconsistent;
    bool any = false;
    for (int x = 0; x < 125 && !any; ++x) {
      const int v[3] = {x % 5, x / 5 % 5, x / 25};
      bool ok = true;
      for (int i = 0; i < 3; ++i) ok = ok && mod_floor(a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2] - b[i], 5) == 0;
      any = ok;
    }
    CHECK_FALSE(any);
  }
  CHECK(inconsistent > 0);
}

TEST_CASE("G_r acts on fractions, exhaustively at r = 91") {
  const Context ctx = Context::build(3, {7, 13});
  const Level l(ctx, 91);
  const auto elems = all_elements(l);
  CHECK(elems.size() == 72);
  const GroupElement frob_target = frobenius(7, Level(ctx, 13));
  for (const auto& g : all_elements(Level(ctx, 13))) CHECK(g * frob_target == frob_target * g);
  std::mt19937 rng(47);
  std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const auto& g = elems[pick(rng)];
    const auto& h = elems[pick(rng)];
    for (std::uint64_t j = 0; j < 91; ++j) {
      const Fraction a = Fraction::at_level(j, 91);
      CHECK((g * h).act(a) == g.act(h.act(a)));
    }
    CHECK((g * g.inverse()) == GroupElement::identity(l));
  }
  std::set<std::uint64_t> units;
  for (const auto& g : elems) units.insert(g.unit());
  CHECK(units.size() == 72);
}

TEST_CASE("distribution structure across the pools") {
  for (auto [M, primes] : std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>{{3, {7, 13, 19}}, {5, {11, 31}}}) {
    const Context ctx = Context::build(M, primes);
    const Level full(ctx, ctx.full_level());
    for (std::uint64_t r : full.divisors()) {
      const Level level(ctx, r);
      const UModule u = build_U(level);
      CHECK(u.module.is_free());
      // σ_ℓ permutes the relations, so it descends to U_r.
      for (std::uint32_t ell : level.primes()) {
        const std::uint64_t t = level.sigma_unit(ell);
        for (const auto& rel : distribution_relations(level)) CHECK(u.module.is_zero(act_on_chain(t, r, rel)));
        // (σ_ℓ - 1)U_r ⊆ I_ℓ on generators.
        const RowLattice i_ell(r, I_ell_generators(level, ell));
        for (std::uint64_t j = 0; j < r; ++j)
          CHECK(i_ell.contains(SparseIntVector::unit(j * t % r) - SparseIntVector::unit(j)));
        // The reduced I_ℓ generators and the full family span the same subgroup.
        if (r <= 133) {
          const RowLattice full_family(r, I_ell_full_family(level, ell));
          for (const auto& g : I_ell_generators(level, ell)) CHECK(full_family.contains(g));
        }
      }
      if (r > 300) continue;
      const LComplex l(level);
      long chi = 0;
      for (std::size_t k = 0; k <= l.depth(); ++k) chi += (k % 2 ? -1 : 1) * static_cast<long>(l.size(k));
      CHECK(chi == static_cast<long>(u.module.free_rank()));
    }
  }
}

TEST_CASE("embeddings compose") {
  const Context ctx = Context::build(3, {7, 13, 19});
  const Level full(ctx, 1729);
  for (std::uint64_t r : full.divisors())
    for (std::uint64_t t : full.divisors())
      for (std::uint64_t s : full.divisors()) {
        if (r % t || t % s) continue;
        const auto st = embedding_images(s, t), tr = embedding_images(t, r), sr = embedding_images(s, r);
        for (std::size_t i = 0; i < st.size(); ++i) {
          SparseIntVector composed;
          for (const auto& e : st[i].entries()) composed = composed + e.value * tr[e.index];
          CHECK(composed == sr[i]);
        }
      }
}

TEST_CASE("D_ell is additive on all basis pairs") {
  const Workspace ws(Context::build(3, {7, 13}));
  const LevelData& d = ws.level(91);
  for (std::uint32_t ell : {7u, 13u}) {
    std::vector<ModVector> images;
    for (const auto& b : d.h0.basis) images.push_back(D_ell(ws, 91, ell, b).cls);
    for (std::size_t i = 0; i < d.h0.basis.size(); ++i)
      for (std::size_t j = i; j < d.h0.basis.size(); ++j) {
        ModVector x = d.h0.basis[i], y = images[i];
        mod_axpy(x, d.h0.basis[j], 1, 3);
        mod_axpy(y, images[j], 1, 3);
        const DResult r = D_ell(ws, 91, ell, x);
        CHECK(r.lands_in_h0);
        CHECK(r.cls == y);
        CHECK(D_ell(ws, 91, ell, x, DVariant::ReversedSolver).cls == y);
        CHECK(D_ell(ws, 91, ell, x, DVariant::ShiftedLift).cls == y);
      }
  }
}

TEST_CASE("iterated recursion reaches c_1 in every order") {
  const Workspace ws(Context::build(3, {7, 13, 19}));
  const ModVector c1 = universal_kolyvagin_class(ws, 1).cls;
  std::vector<std::uint32_t> order = {7, 13, 19};
  do {
    std::uint64_t r = 1729;
    ModVector cls = universal_kolyvagin_class(ws, r).cls;
    for (std::uint32_t ell : order) {
      const DResult d = D_ell(ws, r, ell, cls);
      REQUIRE(d.ok());
      cls = d.cls;
      r /= ell;
      CHECK(cls == universal_kolyvagin_class(ws, r).cls);
    }
    CHECK(cls == c1);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("verdicts do not depend on the choice of primitive roots") {
  for (const auto& roots : std::vector<std::map<std::uint32_t, std::uint32_t>>{{}, {{7, 5}, {13, 6}, {19, 3}}}) {
    const Workspace ws(Context::build(3, {7, 13, 19}, roots));
    const KWorkspace kws(ws);
    for (std::uint64_t r : {7, 91, 247}) {
      const LevelData& d = ws.level(r);
      CHECK(d.h0.dimension(3) == std::size_t{1} << d.level.omega());
      for (const auto& s : recursion_check_universal(ws, r)) CHECK(s.pass());
      CHECK(kws.canonical(r).pass());
      CHECK(canonical_recursion_check(kws, r).pass_all);
      CHECK(basis_corollary_check(kws, r).pass());
      for (std::uint32_t ell : d.level.primes()) {
        CHECK(reduction_sequence_check(d.u, ws.level(r / ell).u, ell).pass());
        CHECK(shift_equals_D_check(kws, r, ell).pass());
      }
    }
  }
}

TEST_CASE("random chains in K: (d+delta)^2 = 0 and equivariance") {
  const Context ctx = Context::build(3, {7, 13, 19});
  const Level level(ctx, 1729);
  const KWindow w(level, 4);
  std::mt19937 rng(53);
  for (int k : {-2, -1, 0, 1}) {
    const auto range = w.degree_range(k);
    REQUIRE(range.first < range.second);
    for (int trial = 0; trial < 50; ++trial) {
      const KChain c = random_chain(rng, range, 6);
      KChain once, twice;
      if (!w.apply_total(c, once) || !w.apply_total(once, twice)) continue;
      CHECK(twice.empty());
      for (std::size_t p = 0; p < level.omega(); ++p) {
        KChain sc, a, b;
        REQUIRE(w.apply(KOp::sigma, p, c, sc));
        REQUIRE(w.apply_total(sc, a));
        REQUIRE(w.apply(KOp::sigma, p, once, b));
        CHECK(a == b);
      }
      CHECK(w.epsilon(w.epsilon(c)) == c);
    }
  }
  // Degree-0 blocks have Ω(h) = ω(g) ≤ ω(r).
  for (const auto& b : w.blocks())
    if (b.degree() == 0) {
      CHECK(b.big_omega_h == b.omega_g);
      CHECK(b.omega_g <= static_cast<int>(level.omega()));
    }
}
