#include "udist/kolyvagin.hpp"

#include <doctest.h>

using namespace udist;

namespace {

// dim H⁰(G_r, U_r/M) for prime M, computed on A(r) ⊗ F_M directly:
// dim {x : (σ-1)x ∈ R} - dim R, where R is the span of the relations.
std::size_t h0_dimension_oracle(const Level& level, std::uint32_t M) {
  const std::uint64_t r = level.r();
  std::vector<ModVector> rel;
  for (const auto& v : distribution_relations(level)) rel.push_back(mod_reduce(v, M));
  const ModEchelon R(M, r, rel);
  // Columns of x ↦ ((σ_ℓ - 1)x mod R) for all ℓ, stacked; one row per basis vector e_j.
  std::vector<ModVector> rows;
  const std::size_t width = r * std::max<std::size_t>(1, level.omega());
  for (std::uint64_t j = 0; j < r; ++j) {
    ModVector row;
    for (std::size_t k = 0; k < level.omega(); ++k) {
      const std::uint64_t t = level.sigma_unit(level.primes()[k]);
      ModVector img = mod_from_pairs({{static_cast<std::uint32_t>(j * t % r), 1}, {static_cast<std::uint32_t>(j), -1}}, M);
      for (const auto& e : R.reduce(img)) row.push_back({static_cast<std::uint32_t>(k * r + e.index), e.value});
    }
    rows.push_back(row);
  }
  const ModEchelon image(M, width, rows);
  return (r - image.rank()) - R.rank();
}

}  // namespace

TEST_CASE("H0 dimensions match the divisor count") {
  const Workspace ws(Context::build(3, {7, 13, 19}));
  const std::map<std::uint64_t, std::size_t> expected = {{1, 1}, {7, 2}, {91, 4}, {133, 4}, {1729, 8}};
  for (const auto& [r, dim] : expected) {
    const LevelData& d = ws.level(r);
    CHECK(d.h0.dimension(3) == dim);
    CHECK(h0_dimension_oracle(d.level, 3) == dim);
  }
  const Workspace ws5(Context::build(5, {11, 31}));
  CHECK(ws5.level(341).h0.dimension(5) == 4);
  CHECK(h0_dimension_oracle(ws5.level(341).level, 5) == 4);
}

TEST_CASE("universal Kolyvagin classes") {
  const Workspace ws(Context::build(3, {7, 13, 19}));
  const KolyvaginClass c1 = universal_kolyvagin_class(ws, 1);
  CHECK(c1.chain == SparseIntVector::unit(0));
  CHECK(c1.invariant);

  const KolyvaginClass c7 = universal_kolyvagin_class(ws, 7);
  CHECK(c7.chain == SparseIntVector::from_pairs({{3, 1}, {2, 2}, {6, 3}, {4, 4}, {5, 5}}));
  CHECK(mod_reduce(c7.chain, 3) == mod_from_pairs({{3, 1}, {2, 2}, {4, 1}, {5, 2}}, 3));
  CHECK(c7.invariant);
  CHECK_FALSE(c7.cls.empty());

  for (std::uint64_t r : {91, 133, 247, 1729}) CHECK(universal_kolyvagin_class(ws, r).invariant);
  // x_7 = [1/7] itself is not invariant.
  const LevelData& d7 = ws.level(7);
  CHECK_FALSE(is_invariant(d7, class_of(d7, SparseIntVector::unit(1), 3), 3));
}

TEST_CASE("D_7 c_7 = c_1 and D is well defined") {
  const Workspace ws(Context::build(3, {7, 13, 19}));
  const KolyvaginClass c7 = universal_kolyvagin_class(ws, 7);
  const ModVector c1 = universal_kolyvagin_class(ws, 1).cls;
  for (DVariant v : {DVariant::Standard, DVariant::ReversedSolver, DVariant::ShiftedLift}) {
    const DResult d = D_ell(ws, 7, 7, c7.cls, v);
    CHECK(d.ok());
    CHECK(d.cls == c1);
  }
  // Different lifts of the same class.
  const LevelData& d7 = ws.level(7);
  SparseIntVector lift = c7.chain + Integer(3) * SparseIntVector::unit(2) + Integer(5) * distribution_relations(d7.level)[0];
  CHECK(D_ell_from_lift(ws, 7, 7, lift).cls == c1);
  // D(0) = 0, and D is linear on H⁰.
  CHECK(D_ell(ws, 7, 7, ModVector{}).cls.empty());
  CHECK(D_ell_from_lift(ws, 7, 7, Integer(3) * SparseIntVector::unit(4)).cls.empty());
  ModVector twice = c7.cls;
  mod_scale(twice, 2, 3);
  ModVector c1x2 = c1;
  mod_scale(c1x2, 2, 3);
  CHECK(D_ell(ws, 7, 7, twice).cls == c1x2);
}

TEST_CASE("D_ell is additive on H0 bases") {
  const Workspace ws(Context::build(3, {7, 13}));
  const LevelData& d = ws.level(91);
  for (std::uint32_t ell : {7u, 13u}) {
    ModVector sum;
    ModVector dsum;
    for (const auto& b : d.h0.basis) {
      const DResult r = D_ell(ws, 91, ell, b);
      REQUIRE(r.ok());
      mod_axpy(sum, b, 1, 3);
      mod_axpy(dsum, r.cls, 1, 3);
    }
    CHECK(D_ell(ws, 91, ell, sum).cls == dsum);
  }
}

TEST_CASE("universal recursion") {
  const Workspace ws(Context::build(3, {7, 13, 19}));
  for (std::uint64_t r : {7, 91, 133, 247, 1729}) {
    const auto steps = recursion_check_universal(ws, r);
    CHECK(steps.size() == ws.level(r).level.omega());
    for (const auto& s : steps) {
      INFO("r=" << r << " ell=" << s.ell << " " << s.note);
      CHECK(s.pass());
    }
  }
  const Workspace ws5(Context::build(5, {11, 31}));
  for (const auto& s : recursion_check_universal(ws5, 341)) CHECK(s.pass());
}

TEST_CASE("perturbed derivative breaks the recursion") {
  const Workspace ws(Context::build(3, {7, 13}));
  const Perturbation p{7};
  bool any_fail = false;
  for (const auto& s : recursion_check_universal(ws, 91, &p)) any_fail = any_fail || !s.pass();
  CHECK(any_fail);
  const Perturbation q{7};
  CHECK_FALSE(universal_kolyvagin_class(ws, 7, &q).invariant);
}

TEST_CASE("classes, representatives and embeddings round-trip") {
  const Workspace ws(Context::build(3, {7, 13}));
  const LevelData& d91 = ws.level(91);
  for (const auto& b : d91.h0.basis) {
    CHECK(class_of(d91, representative(d91, b), 3) == b);
    CHECK(is_invariant(d91, b, 3));
  }
  const LevelData& d7 = ws.level(7);
  for (const auto& b : d7.h0.basis) CHECK(is_invariant(d91, embed_class(d7, d91, b, 3), 3));
  const auto x = express_in(d91.h0.basis, d91.phi, d91.h0.basis.back(), 3);
  REQUIRE(x.has_value());
  CHECK(*x == mod_from_pairs({{static_cast<std::uint32_t>(d91.h0.basis.size() - 1), 1}}, 3));
}
