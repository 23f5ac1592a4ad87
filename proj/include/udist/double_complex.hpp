#pragma once

#include "udist/kolyvagin.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace udist {

/// Chains of K carry small coefficients, so they stay in int64.
struct KTerm {
  std::uint32_t index;
  std::int64_t value;
  friend bool operator==(const KTerm& a, const KTerm& b) { return a.index == b.index && a.value == b.value; }
};
using KChain = std::vector<KTerm>;

/// Sorts, merges duplicates, drops zeros.
void normalize(KChain& c);
/// Entries reduced into [0, M), zeros dropped.
KChain reduce_mod(KChain c, std::uint32_t modulus);
KChain operator+(const KChain& a, const KChain& b);
KChain operator-(const KChain& a, const KChain& b);

struct KSymbol {
  Fraction a;
  std::uint64_t g = 1;
  std::vector<std::uint32_t> h;   // exponent of each level prime, ascending primes
  friend bool operator==(const KSymbol& x, const KSymbol& y) { return x.a == y.a && x.g == y.g && x.h == y.h; }
};
std::string to_string(const KSymbol& s, const Level& level);

enum class KOp { d, delta, shift, sigma };

/// Truncation of K(r) to the symbols with Ω(h) ≤ N.
///
/// Blocks are indexed by (g, h) and sorted by total degree, so each degree is a
/// contiguous range; inside the block for (g, h) position j stands for
/// a = j·g/r, exactly as in L(r).
///
/// A 0-chain has Ω(h) = ω(g) ≤ ω(r) and (d+δ) raises Ω(h) by at most one, so
/// N = ω(r)+1 evaluates every 0-cochain, its coboundary and every coboundary
/// from degree -1 without truncation.
class KWindow {
 public:
  static constexpr std::size_t kMaxPrimes = 8;
  using Exponents = std::array<std::uint8_t, kMaxPrimes>;

  struct Block {
    std::uint32_t gmask;   // bit k set iff the k-th level prime divides g
    Exponents h{};
    std::uint64_t g;
    int omega_g;
    int big_omega_h;
    std::size_t offset;
    std::size_t size;      // r/g
    [[nodiscard]] int degree() const { return big_omega_h - omega_g; }
  };

  KWindow(const Level& level, std::size_t bound);

  [[nodiscard]] const Level& level() const { return level_; }
  [[nodiscard]] std::size_t bound() const { return bound_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
  [[nodiscard]] const Block& block_of(std::size_t i) const;
  /// Symbols of total degree k occupy [first, last).
  [[nodiscard]] std::pair<std::size_t, std::size_t> degree_range(int k) const;

  [[nodiscard]] KSymbol symbol(std::size_t i) const;
  /// Throws ContextError when the symbol is not in K(r) or exceeds the window.
  [[nodiscard]] std::size_t index(const KSymbol& s) const;
  /// Index of [j·g/r, g, h] for a block, or npos when the block is outside the window.
  [[nodiscard]] std::size_t locate(std::uint32_t gmask, const Exponents& h, std::uint64_t j) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Image of one symbol under d_ℓ, δ_ℓ, Δ_ℓ or σ_ℓ (prime given by position),
  /// appended to out. Returns false when the image leaves the window.
  bool image(KOp op, std::size_t pos, std::size_t i, KChain& out, std::int64_t factor = 1) const;
  /// The same image without its sign.
  bool body(KOp op, std::size_t pos, std::size_t i, KChain& out, std::int64_t factor = 1) const;
  /// ±1 in front of body(); +1 for Δ_ℓ and σ_ℓ.
  [[nodiscard]] int sign(KOp op, std::size_t pos, std::size_t i) const;
  /// Linear extension; false when some image leaves the window.
  bool apply(KOp op, std::size_t pos, const KChain& chain, KChain& out) const;
  /// d = Σ d_ℓ, δ = Σ δ_ℓ, d + δ.
  bool apply_d(const KChain& chain, KChain& out) const;
  bool apply_delta(const KChain& chain, KChain& out) const;
  bool apply_total(const KChain& chain, KChain& out) const;

  /// Sign of ε on symbol i.
  [[nodiscard]] int epsilon_sign(std::size_t i) const;
  [[nodiscard]] KChain epsilon(const KChain& chain) const;
  /// [a,g,h] ∈ S: not (a = 0 and g | h).
  [[nodiscard]] bool in_S(std::size_t i) const;
  /// The part of a chain supported on [a,1,1], as a chain of A(r).
  [[nodiscard]] SparseIntVector bottom_part(const KChain& chain) const;
  /// The part supported on [a,g,h] for one (g, h), as a chain of A(r/g).
  [[nodiscard]] SparseIntVector component(const KChain& chain, std::uint32_t gmask, const Exponents& h) const;

 private:
  [[nodiscard]] int prefix_parity(const Block& b, std::size_t pos) const;
  [[nodiscard]] std::size_t block_code(std::uint32_t gmask, const Exponents& h) const;

  Level level_;
  std::size_t bound_;
  std::size_t size_ = 0;
  std::vector<Block> blocks_;
  std::vector<long> block_by_code_;
  std::vector<std::uint64_t> sigma_units_;
};

struct KIdentityReport {
  bool anticommute = false;   // X Y + Y X = 0 for distinct X, Y among {d_ℓ} ∪ {δ_ℓ}
  bool squares_zero = false;  // d_ℓ² = 0, δ_ℓ² = 0
  bool totals_zero = false;   // d² = δ² = dδ + δd = 0
  bool equivariant = false;   // σ_p commutes with every d_ℓ, δ_ℓ
  std::size_t evaluations = 0;
  std::string counterexample;
  [[nodiscard]] bool pass() const { return anticommute && squares_zero && totals_zero && equivariant; }
};
KIdentityReport differential_identity_check(const KWindow& w);

struct EpsilonReport {
  bool involution = false;
  bool d_conjugation = false;
  bool delta_conjugation = false;
  std::string counterexample;
  [[nodiscard]] bool pass() const { return involution && d_conjugation && delta_conjugation; }
};
EpsilonReport epsilon_check(const KWindow& w);

struct SStabilityReport {
  bool boundaries_in_S = false;   // dK + δK ⊆ S + MK
  bool d_stable = false;
  bool delta_stable = false;
  bool sigma_stable = false;
  bool epsilon_stable = false;
  std::string counterexample;
  [[nodiscard]] bool pass() const {
    return boundaries_in_S && d_stable && delta_stable && sigma_stable && epsilon_stable;
  }
};
SStabilityReport s_stability_check(const KWindow& w, std::uint32_t modulus);

struct ShiftIdentityReport {
  bool commutes_d = false;         // Δ_ℓ d_p = d_p Δ_ℓ, p ≠ ℓ
  bool commutes_delta = false;     // Δ_ℓ δ_p = δ_p Δ_ℓ, p ≠ ℓ
  bool kills_d = false;            // Δ_ℓ d_ℓ = d_ℓ Δ_ℓ = 0
  bool delta_commutator = false;   // (δ_ℓ Δ_ℓ - Δ_ℓ δ_ℓ) ⊆ MK
  bool containment = false;        // Δ_ℓ K(r) ⊆ K(r/ℓ), taken literally
  std::size_t containment_failures = 0;
  std::string counterexample;
  [[nodiscard]] bool identities() const { return commutes_d && commutes_delta && kills_d && delta_commutator; }
  [[nodiscard]] bool pass() const { return identities() && containment; }
};
ShiftIdentityReport shift_identity_check(const KWindow& w, std::uint32_t modulus);

/// Δ_ℓ on a chain of K(r).
KChain delta_shift(const KWindow& w, std::size_t pos, const KChain& chain);

/// Canonical basis {c̄_g}_{g|r} of H⁰(G_r, U_r/MU_r), in (ω(g), g) order.
struct CanonicalBasis {
  std::vector<std::uint64_t> divisors;
  std::vector<KChain> cocycles;      // z_g ≡ [0,g,g] mod S, (d+δ)z_g ≡ 0 mod M
  std::vector<ModVector> classes;    // c̄_g in U_r/MU_r coordinates
  bool solvable = false;
  bool unique = false;
  bool cocycles_ok = false;
  bool in_h0 = false;
  bool is_basis = false;
  [[nodiscard]] bool pass() const { return solvable && unique && cocycles_ok && in_h0 && is_basis; }
  [[nodiscard]] std::size_t position(std::uint64_t g) const;
};

/// Divisors of r ordered by (ω(g), g); refines divisibility.
std::vector<std::uint64_t> divisors_by_omega(const Level& level);

/// Per-level cache of windows (N = ω(r)+1) and canonical bases on top of a Workspace.
class KWorkspace {
 public:
  explicit KWorkspace(const Workspace& ws) : ws_(ws) {}
  KWorkspace(const KWorkspace&) = delete;
  KWorkspace& operator=(const KWorkspace&) = delete;

  [[nodiscard]] const Workspace& base() const { return ws_; }
  [[nodiscard]] const KWindow& window(std::uint64_t r) const;
  [[nodiscard]] const CanonicalBasis& canonical(std::uint64_t r) const;

 private:
  const Workspace& ws_;
  OnceMap<std::uint64_t, KWindow> windows_;
  OnceMap<std::uint64_t, CanonicalBasis> bases_;
};

CanonicalBasis compute_canonical_basis(const KWindow& w, const LevelData& data, std::uint32_t modulus);
/// Coordinates of an H⁰ class in the canonical basis.
std::optional<ModVector> canonical_coordinates(const KWorkspace& kws, std::uint64_t r, const ModVector& cls);

struct H0KReport {
  bool well_defined = false;   // coboundaries map to 0 in U_r/MU_r
  bool boundaries_closed = false;
  bool lands_in_h0 = false;
  bool bijective = false;
  Integer cocycle_order = 0;   // |Z⁰| of the window mod M
  Integer coboundary_order = 0;
  Integer image_order = 0;
  Integer h0_order = 0;
  [[nodiscard]] bool pass() const { return well_defined && boundaries_closed && lands_in_h0 && bijective; }
};
H0KReport h0_of_K_check(const KWorkspace& kws, std::uint64_t r);

struct CanonicalRecursionReport {
  bool pass_all = false;   // D_ℓ c̄_g = c̄_{g/ℓ} at level r/ℓ when ℓ | g, else 0
  std::string counterexample;
};
CanonicalRecursionReport canonical_recursion_check(const KWorkspace& kws, std::uint64_t r);

struct ShiftDReport {
  bool cocycle = false;   // Δ_ℓ z is a 0-cocycle mod M for every lift z
  bool equal = false;     // Δ-route class = D_ℓ class on the spanning set
  std::size_t classes_checked = 0;
  std::string counterexample;
  [[nodiscard]] bool pass() const { return cocycle && equal; }
};
ShiftDReport shift_equals_D_check(const KWorkspace& kws, std::uint64_t r, std::uint32_t ell);

struct BasisCorollaryReport {
  std::vector<std::uint64_t> divisors;
  std::vector<std::vector<Residue>> matrix;   // row g: coordinates of c_g in {c̄_g′}
  bool expressible = false;
  bool normalized = false;      // c_1 = c̄_1
  bool unitriangular = false;   // diagonal 1, support on divisors of g
  bool unit_determinant = false;
  Residue determinant = 0;
  [[nodiscard]] bool pass() const { return expressible && normalized && unitriangular && unit_determinant; }
};
BasisCorollaryReport basis_corollary_check(const KWorkspace& kws, std::uint64_t r);

}  // namespace udist
