#pragma once

#include "udist/context.hpp"
#include "udist/presented_module.hpp"

#include <string>
#include <vector>

namespace udist {

/// Generator labels of A(r): the fractions j/r, j = 0..r-1, reduced.
std::vector<std::string> fraction_labels(std::uint64_t r);

/// [a] - Σ_{ℓb=a}[b] for a = j/r with ℓ | j, as a chain of A(r).
SparseIntVector distribution_relation(std::uint64_t r, std::uint32_t ell, std::uint64_t j);

/// Relation [a] - Σ_{ℓb=a}[b] is keyed by ℓ and the level-r index j of a.
struct RelationKey {
  std::uint32_t ell;
  std::uint64_t j;
};
/// Keys ordered by ℓ ascending, then a by (num, den).
std::vector<RelationKey> distribution_relation_keys(const Level& level);
/// All relations of U_r, in key order.
std::vector<SparseIntVector> distribution_relations(const Level& level);

struct UModule {
  Level level;
  PresentedModule module;
};

/// U_r; `drop` removes the relation at that position (negative control).
UModule build_U(const Level& level, long drop = -1);

/// Images of the generators of A(s) in A(r).
std::vector<SparseIntVector> embedding_images(std::uint64_t s, std::uint64_t r);

struct EmbeddingReport {
  bool injective = false;
  bool cokernel_free = false;
  std::size_t cokernel_rank = 0;
};
EmbeddingReport embed_U(const UModule& small, const UModule& big);

/// {[a + 1/ℓ] - [a]} over all a with den(a) | r.
std::vector<SparseIntVector> I_ell_generators(const Level& level, std::uint32_t ell);
/// The family {[a + k/ℓ] - [a] : 1 ≤ k < ℓ}.
std::vector<SparseIntVector> I_ell_full_family(const Level& level, std::uint32_t ell);
/// U_r / I_ℓ.
PresentedModule quotient_by_I_ell(const UModule& u, std::uint32_t ell);

/// Level-r/ℓ index of a₀ in the unique split j/r = a₀ + b with a₀ ∈ (ℓ/r)Z/Z
/// and b ∈ (1/ℓ)Z/Z.
std::uint64_t rho_index(std::uint64_t r, std::uint32_t ell, std::uint64_t j);

/// Index of x_r = [Σ_{p|r} 1/p].
std::uint64_t euler_index(const Level& level);

/// Both Euler-system relations at (r, ℓ).
struct EulerRelations {
  bool norm_relation = false;
  bool congruence = false;
};
EulerRelations euler_relations_check(const UModule& u, std::uint32_t ell);

/// Matrix of ℓ - Frob_ℓ on A(r′) (images of generators).
std::vector<SparseIntVector> ell_minus_frob_images(const Level& level, std::uint32_t ell);

/// ker(ℓ - Frob_ℓ | U_{r′}) = 0.
bool frob_regularity_check(const UModule& u, std::uint32_t ell);

struct ReductionSequence {
  bool injective = false;
  bool well_defined = false;  // image of ℓ - Frob dies in U_r / I_ℓ
  bool surjective = false;
  bool exact_middle = false;  // coker(ℓ - Frob) → U_r / I_ℓ injective
  std::vector<Integer> cokernel_factors;
  std::vector<Integer> quotient_factors;
  std::size_t quotient_rank = 0;
  [[nodiscard]] bool pass() const { return injective && well_defined && surjective && exact_middle; }
};
/// 0 → U_{r/ℓ} → U_{r/ℓ} → U_r / I_ℓ → 0.
ReductionSequence reduction_sequence_check(const UModule& u, const UModule& lower, std::uint32_t ell);

}  // namespace udist
