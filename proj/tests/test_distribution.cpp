#include "udist/kolyvagin.hpp"
#include "udist/normal_form.hpp"

#include <doctest.h>

#include <numeric>

using namespace udist;

namespace {

std::uint64_t euler_phi(std::uint64_t r) {
  std::uint64_t n = 0;
  for (std::uint64_t k = 1; k <= r; ++k) n += std::gcd(k, r) == 1;
  return n;
}

SparseIntVector at(std::uint64_t j, std::int64_t c = 1) { return SparseIntVector::unit(j, c); }

// Rank of the relation matrix via the SNF oracle.
std::size_t relation_rank(const UModule& u) {
  return smith_normal_form(u.module.relations()).diagonal().size();
}

}  // namespace

TEST_CASE("U_r is free of rank phi(r)") {
  const Context ctx = Context::build(3, {7, 13, 19});
  for (std::uint64_t r : {1, 7, 13, 91, 133, 247}) {
    const UModule u = build_U(Level(ctx, r));
    CHECK(u.module.is_free());
    CHECK(u.module.free_rank() == euler_phi(r));
    CHECK(r - relation_rank(u) == euler_phi(r));
  }
  const UModule u7 = build_U(Level(ctx, 7));
  // The a=0 relation at r=7 expands to -Σ_{j≠0}[j/7].
  SparseIntVector orbit;
  for (std::uint64_t j = 1; j < 7; ++j) orbit = orbit + at(j);
  CHECK(u7.module.is_zero(orbit));
  CHECK_FALSE(u7.module.is_zero(at(0)));
  CHECK(distribution_relation(7, 7, 0) == at(0) - (at(0) + orbit));
}

TEST_CASE("embeddings of U_s into U_r") {
  const Context ctx = Context::build(3, {7, 13});
  const UModule u1 = build_U(Level(ctx, 1)), u7 = build_U(Level(ctx, 7)), u91 = build_U(Level(ctx, 91));
  const auto self = embed_U(u7, u7);
  CHECK(self.injective);
  CHECK(self.cokernel_rank == 0);
  const auto a = embed_U(u1, u7);
  CHECK(a.injective);
  CHECK(a.cokernel_free);
  CHECK(a.cokernel_rank == 5);
  const auto b = embed_U(u7, u91);
  CHECK(b.injective);
  CHECK(b.cokernel_free);
  CHECK(b.cokernel_rank == 66);
  CHECK(embedding_images(1, 7) == std::vector<SparseIntVector>{at(0)});
  CHECK(embedding_images(7, 91)[1] == at(13));
}

TEST_CASE("I_ell quotients") {
  const Context ctx = Context::build(3, {7, 13});
  const UModule u7 = build_U(Level(ctx, 7));
  const PresentedModule q = quotient_by_I_ell(u7, 7);
  CHECK(q.free_rank() == 0);
  CHECK(q.invariant_factors() == std::vector<Integer>{6});
  // (σ_7 - 1)[1/7] = [3/7] - [1/7] lies in I_7.
  const RowLattice i7(7, I_ell_generators(Level(ctx, 7), 7));
  CHECK(i7.contains(at(3) - at(1)));
  CHECK_FALSE(i7.contains(at(1)));
  // The single-step generators span the full family.
  for (const auto& v : I_ell_full_family(Level(ctx, 91), 7))
    CHECK(RowLattice(91, I_ell_generators(Level(ctx, 91), 7)).contains(v));
}

TEST_CASE("Euler system elements") {
  const Context ctx = Context::build(3, {7, 13, 19});
  CHECK(euler_index(Level(ctx, 1)) == 0);
  CHECK(euler_index(Level(ctx, 7)) == 1);
  CHECK(euler_index(Level(ctx, 91)) == 20);
  // x_91 - x_13 = [20/91] - [1/13]: the fractions differ by 1/7.
  const RowLattice i7(91, I_ell_generators(Level(ctx, 91), 7));
  CHECK(i7.contains(at(20) - at(7)));
  for (std::uint64_t r : {7, 13, 91, 133, 247, 1729}) {
    const UModule u = build_U(Level(ctx, r));
    for (std::uint32_t ell : u.level.primes()) {
      const auto e = euler_relations_check(u, ell);
      CHECK(e.norm_relation);
      CHECK(e.congruence);
    }
  }
}

TEST_CASE("ell - Frob is injective and the reduction sequence is exact") {
  const Context ctx = Context::build(3, {7, 13, 19});
  CHECK(frob_regularity_check(build_U(Level(ctx, 1)), 7));
  CHECK(frob_regularity_check(build_U(Level(ctx, 13)), 7));
  CHECK(frob_regularity_check(build_U(Level(ctx, 247)), 7));
  CHECK(frob_regularity_check(build_U(Level(ctx, 133)), 13));

  // On U_1, Frob is trivial, so the cokernel of 7 - Frob is Z/6.
  const PresentedModule z({"0"}, SparseIntMatrix(0, 1));
  CHECK(ModuleHom(z, z, ell_minus_frob_images(Level(ctx, 1), 7)).cokernel().module.invariant_factors() ==
        std::vector<Integer>{6});

  const auto s7 = reduction_sequence_check(build_U(Level(ctx, 7)), build_U(Level(ctx, 1)), 7);
  CHECK(s7.pass());
  CHECK(s7.cokernel_factors == std::vector<Integer>{6});
  CHECK(s7.quotient_factors == std::vector<Integer>{6});
  const UModule u91 = build_U(Level(ctx, 91));
  for (std::uint32_t ell : {7u, 13u}) {
    const auto s = reduction_sequence_check(u91, build_U(Level(ctx, 91 / ell)), ell);
    CHECK(s.pass());
    CHECK(s.cokernel_factors == s.quotient_factors);
  }
}

TEST_CASE("rho and gamma") {
  const Context ctx = Context::build(3, {7, 13});
  CHECK(rho_ell(91, 7, at(20)) == at(1));   // 20/91 = 1/13 + 1/7
  CHECK(rho_ell(91, 7, at(7)) == at(1));    // 1/13
  CHECK(rho_ell(91, 7, at(13)) == at(0));   // 1/7
  CHECK(rho_index(91, 7, 20) == 1);

  SparseIntVector all;
  for (std::uint64_t j = 0; j < 7; ++j) all = all + at(j);
  const SparseIntVector g = gamma_p(7, 7, at(0));
  CHECK(g == at(0) - all);
  CHECK(build_U(Level(ctx, 7)).module.is_zero(g));

  // ρ_7 γ_7 = 1 - 7·Frob_7^{-1} on A(13), checked on [1/13].
  const SparseIntVector lhs = rho_ell(91, 7, gamma_p(91, 7, at(1)));
  const SparseIntVector rhs = at(1) - Integer(7) * frobenius_chain(13, 7, at(1), /*inverse=*/true);
  CHECK(lhs == rhs);
  // Frob_7^{-1}(1/13) = 2/13 since 7·2 = 14 ≡ 1.
  CHECK(frobenius_chain(13, 7, at(1), true) == at(2));
}
