#pragma once

#include "udist/distribution.hpp"

#include <cstdint>
#include <vector>

namespace udist {

struct LSymbol {
  Fraction a;
  std::uint64_t g = 1;
  friend bool operator==(const LSymbol& x, const LSymbol& y) { return x.a == y.a && x.g == y.g; }
};

/// (L(r), d). Degree -k holds the symbols [a,g] with ω(g) = k, in blocks of
/// ascending g; inside the block for g, position j stands for a = j·g/r.
class LComplex {
 public:
  explicit LComplex(const Level& level);

  [[nodiscard]] const Level& level() const { return level_; }
  /// Number of nonzero degrees minus one, i.e. ω(r).
  [[nodiscard]] std::size_t depth() const { return level_.omega(); }
  /// Rank of the degree -k component.
  [[nodiscard]] std::size_t size(std::size_t k) const { return sizes_.at(k); }
  [[nodiscard]] std::size_t index(const LSymbol& s) const;
  [[nodiscard]] LSymbol symbol(std::size_t k, std::size_t i) const;
  /// d of symbol i of degree -k, in the basis of degree -(k-1).
  [[nodiscard]] SparseIntVector d(std::size_t k, std::size_t i) const;
  /// Matrix of d: degree -k → -(k-1), one row per source symbol.
  [[nodiscard]] SparseIntMatrix differential(std::size_t k) const;
  /// Multiplication of every a by the unit t, on a chain of degree -k.
  [[nodiscard]] SparseIntVector act(std::uint64_t t, std::size_t k, const SparseIntVector& chain) const;
  /// Applies d to a chain of degree -k.
  [[nodiscard]] SparseIntVector apply_d(std::size_t k, const SparseIntVector& chain) const;

  struct Block {
    std::uint64_t g;
    std::size_t offset;
  };
  [[nodiscard]] const std::vector<Block>& blocks(std::size_t k) const { return blocks_.at(k); }

 private:
  Level level_;
  std::vector<std::vector<Block>> blocks_;
  std::vector<std::size_t> sizes_;
};

/// (-1)^{Σ_{ℓ' < ℓ} ord_ℓ' g} over the primes of the level.
int prefix_sign(const Level& level, std::uint32_t ell, std::uint64_t g);

struct Homology {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;
  [[nodiscard]] bool zero() const { return free_rank == 0 && torsion.empty(); }
};

/// H^{-k} for k = 0..n of a cochain complex of free groups given by
/// sizes[k] and differentials[k] : degree -k → -(k-1) (differentials[0] unused).
std::vector<Homology> complex_cohomology(const std::vector<std::size_t>& sizes,
                                         const std::vector<SparseIntMatrix>& differentials);

bool d_squared_zero(const LComplex& l);
bool d_equivariant(const LComplex& l);

struct LCohomologyReport {
  std::vector<Homology> groups;       // groups[k] = H^{-k}
  bool concentrated = false;          // H^n = 0 for n ≠ 0
  bool h0_isomorphic = false;         // [a,1] ↦ [a] induces H⁰ ≅ U_r
  long euler_characteristic = 0;
};
LCohomologyReport cohomology_of_L(const LComplex& l, const UModule& u);

/// s_ℓ on a chain of degree -k of L(r), landing in degree -(k-1) of L(r/ℓ).
SparseIntVector s_ell(const LComplex& big, const LComplex& small, std::uint32_t ell, std::size_t k,
                      const SparseIntVector& chain);
/// s_ℓ d = -d s_ℓ on every generator of L(r).
bool s_ell_anticommutes(const LComplex& big, const LComplex& small, std::uint32_t ell);

struct SigmaSequenceReport {
  bool quotient_free = false;      // L/L′ ≅ the explicit basis, degreewise
  bool l_prime_stable = false;     // L′ is d- and σ-stable, and (σ_ℓ - 1)L ⊆ L′
  bool chain_maps = false;         // inclusion and s_ℓ commute (anticommute) with d
  bool short_exact = false;        // degreewise exactness of Σ
  bool h_minus_one_zero = false;   // H^{-1}(L/L′) = 0
  bool lower_degrees_zero = false; // H^{-k}(L/L′) = 0 for k ≥ 2
  bool h0_matches = false;         // H⁰(L/L′) ≅ U_r/I_ℓ ≅ coker(ℓ - Frob_ℓ)
  std::vector<Homology> groups;
  [[nodiscard]] bool pass() const {
    return quotient_free && l_prime_stable && chain_maps && short_exact && h_minus_one_zero &&
           lower_degrees_zero && h0_matches;
  }
};
SigmaSequenceReport sigma_sequence_check(const UModule& u, const UModule& lower, std::uint32_t ell);

}  // namespace udist
