#include "udist/double_complex.hpp"

#include <doctest.h>

using namespace udist;

namespace {

KSymbol sym(std::uint64_t num, std::uint64_t den, std::uint64_t g, std::vector<std::uint32_t> h) {
  return {Fraction::make(static_cast<std::int64_t>(num), den), g, std::move(h)};
}

KChain unit(std::size_t i, std::int64_t c = 1) { return {{static_cast<std::uint32_t>(i), c}}; }

KChain apply(const KWindow& w, KOp op, std::size_t pos, const KChain& c) {
  KChain out;
  REQUIRE(w.apply(op, pos, c, out));
  return out;
}

}  // namespace

TEST_CASE("operators on K(7) by hand") {
  const Context ctx = Context::build(3, {7});
  const KWindow w(Level(ctx, 7), 2);
  CHECK_THROWS_AS(KWindow(Level(ctx, 7), 1), ContextError);

  const std::size_t z77 = w.index(sym(0, 1, 7, {1}));
  CHECK(apply(w, KOp::delta, 0, unit(z77)) == unit(w.index(sym(0, 1, 7, {2})), -6));
  CHECK(reduce_mod(apply(w, KOp::delta, 0, unit(z77)), 3).empty());

  KChain expected;
  for (std::uint64_t j = 1; j < 7; ++j) expected.push_back({static_cast<std::uint32_t>(w.index(sym(j, 7, 1, {1}))), -1});
  normalize(expected);
  CHECK(apply(w, KOp::d, 0, unit(z77)) == expected);

  // δ_7[a,1,1] = (1 - σ_7)[a,1,7], with σ_7 multiplying by s_7 = 3.
  for (std::uint64_t j = 1; j < 7; ++j) {
    KChain e = {{static_cast<std::uint32_t>(w.index(sym(j, 7, 1, {1}))), 1},
                {static_cast<std::uint32_t>(w.index(sym(3 * j % 7, 7, 1, {1}))), -1}};
    normalize(e);
    CHECK(apply(w, KOp::delta, 0, unit(w.index(sym(j, 7, 1, {0})))) == e);
  }
  // δ_7 δ_7 [a,1,1] = 0.
  const std::size_t a = w.index(sym(2, 7, 1, {0}));
  KChain once = apply(w, KOp::delta, 0, unit(a)), twice;
  CHECK(w.apply(KOp::delta, 0, once, twice));
  CHECK(twice.empty());

  // Δ_7[0,7,7] = [0,1,1].
  CHECK(delta_shift(w, 0, unit(z77)) == unit(w.index(sym(0, 1, 1, {0}))));
  // (δΔ - Δδ)[0,7,7] ∈ 3K.
  KChain lhs, rhs;
  w.apply(KOp::delta, 0, delta_shift(w, 0, unit(z77)), lhs);
  rhs = delta_shift(w, 0, apply(w, KOp::delta, 0, unit(z77)));
  CHECK(reduce_mod(lhs - rhs, 3).empty());

  CHECK(to_string(w.symbol(z77), w.level()) == "[0,7,7]");
  CHECK_FALSE(w.in_S(z77));
  CHECK(w.in_S(w.index(sym(1, 7, 1, {0}))));
  CHECK_FALSE(w.in_S(w.index(sym(0, 1, 1, {0}))));
  CHECK(w.in_S(w.index(sym(0, 1, 7, {0}))));
}

TEST_CASE("epsilon and Delta on K(91)") {
  const Context ctx = Context::build(3, {7, 13});
  const KWindow w(Level(ctx, 91), 3);
  // ε[0,13,7]: one pair 7 < 13 with ord_13 g · ord_7 h = 1.
  CHECK(w.epsilon_sign(w.index(sym(0, 1, 13, {1, 0}))) == -1);
  CHECK(w.epsilon_sign(w.index(sym(0, 1, 7, {0, 1}))) == 1);
  CHECK(w.epsilon_sign(w.index(sym(0, 1, 13, {0, 1}))) == 1);
  // Δ_7[0,13,13] = 0 since 7 ∤ 13.
  CHECK(delta_shift(w, 0, unit(w.index(sym(0, 1, 13, {0, 1})))).empty());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.epsilon(w.epsilon(unit(i))) == unit(i));
  // Symbol/index round trip over the whole window.
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w.index(w.symbol(i)) == i);
}

TEST_CASE("K identities, epsilon conjugation, S-stability") {
  const Context ctx = Context::build(3, {7, 13, 19});
  for (std::uint64_t r : {7, 91, 1729}) {
    const Level level(ctx, r);
    const KWindow w(level, level.omega() + 1);
    const auto k = differential_identity_check(w);
    INFO("r=" << r << " " << k.counterexample);
    CHECK(k.pass());
    CHECK(k.evaluations > 0);
    CHECK(epsilon_check(w).pass());
    CHECK(s_stability_check(w, 3).pass());
    CHECK(shift_identity_check(w, 3).identities());
  }
}

TEST_CASE("literal Delta containment fails exactly at ord_ell h >= 2") {
  const Context ctx = Context::build(3, {7, 13, 19});
  const auto r7 = shift_identity_check(KWindow(Level(ctx, 7), 2), 3);
  CHECK_FALSE(r7.containment);
  CHECK(r7.containment_failures == 1);
  CHECK(r7.counterexample == "shift_7[0,7,49] = [0,1,7] not in K(1)");
  // Count the offending symbols directly: ℓ | g and ord_ℓ h ≥ 2.
  for (std::uint64_t r : {91, 133}) {
    const Level level(ctx, r);
    const KWindow w(level, 3);
    std::size_t count = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const KSymbol s = w.symbol(i);
      for (std::size_t k = 0; k < level.omega(); ++k) count += s.g % level.primes()[k] == 0 && s.h[k] >= 2;
    }
    CHECK(shift_identity_check(w, 3).containment_failures == count);
  }
  CHECK(shift_identity_check(KWindow(Level(ctx, 91), 3), 3).containment_failures == 66);
}

TEST_CASE("canonical basis at r = 7 against a brute-force solve") {
  const Workspace ws(Context::build(3, {7}));
  const KWorkspace kws(ws);
  const CanonicalBasis& b = kws.canonical(7);
  CHECK(b.pass());
  CHECK(b.divisors == std::vector<std::uint64_t>{1, 7});
  const LevelData& d = ws.level(7);
  CHECK(b.classes[b.position(1)] == class_of(d, SparseIntVector::unit(0), 3));

  // Solve Σ_{j≠0} c_j (1 - σ_7)[j/7] ≡ Σ_{j≠0}[j/7] (mod 3) by enumeration.
  std::optional<SparseIntVector> found;
  for (int code = 0; code < 729 && !found; ++code) {
    std::vector<int> c(7, 0);
    for (int j = 1, x = code; j < 7; ++j, x /= 3) c[j] = x % 3;
    std::vector<int> lhs(7, 0);
    for (int j = 1; j < 7; ++j) {
      lhs[j] += c[j];
      lhs[3 * j % 7] -= c[j];
    }
    bool ok = true;
    for (int j = 1; j < 7; ++j) ok = ok && ((lhs[j] - 1) % 3 + 3) % 3 == 0;
    if (ok) {
      SparseIntVector v;
      for (int j = 1; j < 7; ++j) v = v + SparseIntVector::unit(j, c[j]);
      found = v;
    }
  }
  REQUIRE(found.has_value());
  CHECK(b.classes[b.position(7)] == class_of(d, *found, 3));

  const auto coords = canonical_coordinates(kws, 7, b.classes[b.position(7)]);
  REQUIRE(coords.has_value());
  CHECK(*coords == mod_from_pairs({{1, 1}}, 3));
}

TEST_CASE("H0 of K, recursion of the canonical basis, shift = D, basis corollary") {
  const Workspace ws(Context::build(3, {7, 13}));
  const KWorkspace kws(ws);
  const std::map<std::uint64_t, int> dims = {{1, 1}, {7, 2}, {13, 2}, {91, 4}};
  for (const auto& [r, dim] : dims) {
    const H0KReport h = h0_of_K_check(kws, r);
    CHECK(h.pass());
    Integer order = 1;
    for (int i = 0; i < dim; ++i) order *= 3;
    CHECK(h.h0_order == order);
    CHECK(h.image_order == order);
    CHECK(kws.canonical(r).pass());
    CHECK(canonical_recursion_check(kws, r).pass_all);
  }
  for (std::uint32_t ell : {7u, 13u}) {
    const ShiftDReport s = shift_equals_D_check(kws, 91, ell);
    CHECK(s.pass());
    CHECK(s.classes_checked >= 4);
  }
  CHECK(shift_equals_D_check(kws, 7, 7).pass());

  const BasisCorollaryReport one = basis_corollary_check(kws, 1);
  CHECK(one.matrix == std::vector<std::vector<Residue>>{{1}});
  const BasisCorollaryReport b = basis_corollary_check(kws, 91);
  CHECK(b.pass());
  CHECK(b.divisors == std::vector<std::uint64_t>{1, 7, 13, 91});
  CHECK(b.matrix.size() == 4);
  CHECK(b.determinant == 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (b.divisors[i] % b.divisors[j] != 0) CHECK(b.matrix[i][j] == 0);
}

TEST_CASE("divisors ordered by omega") {
  const Context ctx = Context::build(3, {7, 13, 19});
  CHECK(divisors_by_omega(Level(ctx, 1729)) == std::vector<std::uint64_t>{1, 7, 13, 19, 91, 133, 247, 1729});
  CHECK(divisors_by_omega(Level(ctx, 1)) == std::vector<std::uint64_t>{1});
}
