#pragma once

#include "udist/distribution.hpp"
#include "udist/mod_echelon.hpp"
#include "udist/once_map.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace udist {

/// Raised when a statement that the theory guarantees is contradicted by the
/// computation (an implementation defect, never an expected verdict).
struct InternalContradiction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Negative control: the coefficient of σ_ℓ¹ in N′_ℓ is replaced by zero.
struct Perturbation {
  std::uint32_t ell = 0;
};

/// N′_ℓ, optionally perturbed.
GroupRingElement derivative_element(const Level& level, std::uint32_t ell, const Perturbation* perturb = nullptr);
/// N′_r = ∏ N′_ℓ, optionally perturbed.
GroupRingElement derivative_element(const Level& level, const Perturbation* perturb = nullptr);

/// Invariants H⁰(G_r, U_r/MU_r) inside (Z/M)^φ(r), in the coordinates of U_r.
struct H0Space {
  std::vector<ModVector> basis;               // echelon rows of the invariant submodule
  std::vector<std::uint32_t> order_factors;   // |H⁰| = ∏ factors
  /// Rank when H⁰ is free over Z/M, which is always the case for prime M.
  [[nodiscard]] std::optional<std::size_t> dimension(std::uint32_t modulus) const;
};

/// Everything cached per level: U_r, its coordinates, the relation echelon
/// mod M used by D_ℓ, the lattices R_r + I_ℓ, and H⁰.
struct LevelData {
  Level level;
  UModule u;
  std::size_t phi = 0;
  std::vector<SparseIntVector> coordinates;   // exact coordinates of each generator [j/r]
  std::vector<RelationKey> keys;
  ModEchelon relations_mod;                   // relation rows mod M, tracked
  std::map<std::uint32_t, RowLattice> with_I;  // ℓ → lattice R_r + I_ℓ
  H0Space h0;
};

/// Per-context cache of level data, safe for concurrent use. The workspace owns
/// its Context, so it must stay put while levels refer to it.
class Workspace {
 public:
  explicit Workspace(Context ctx) : ctx_(std::move(ctx)) {}
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  [[nodiscard]] const Context& context() const { return ctx_; }
  [[nodiscard]] std::uint32_t M() const { return ctx_.M(); }
  [[nodiscard]] const LevelData& level(std::uint64_t r) const;

 private:
  Context ctx_;
  OnceMap<std::uint64_t, LevelData> levels_;
};

/// Exact coordinates in U_r of a chain of A(r).
SparseIntVector exact_coordinates(const LevelData& data, const SparseIntVector& chain);
/// Class of a chain in U_r/MU_r, as coordinates mod M.
ModVector class_of(const LevelData& data, const SparseIntVector& chain, std::uint32_t modulus);
/// A chain of A(r) representing the given class.
SparseIntVector representative(const LevelData& data, const ModVector& cls);
/// (σ - 1)x ∈ MU_r for every σ_ℓ, ℓ | r.
bool is_invariant(const LevelData& data, const ModVector& cls, std::uint32_t modulus);
/// Class of a level-s chain pushed into level r.
ModVector embed_class(const LevelData& small, const LevelData& big, const ModVector& cls, std::uint32_t modulus);

H0Space h0_invariants(const LevelData& data, std::uint32_t modulus);

/// N′_r x_r as a chain of A(r).
SparseIntVector kolyvagin_chain(const Level& level, const Perturbation* perturb = nullptr);

struct KolyvaginClass {
  SparseIntVector chain;
  ModVector cls;
  bool invariant = false;
};
KolyvaginClass universal_kolyvagin_class(const Workspace& ws, std::uint64_t r, const Perturbation* perturb = nullptr);

/// ρ_ℓ : A(r) → A(r/ℓ), [a + b] ↦ [a].
SparseIntVector rho_ell(std::uint64_t r, std::uint32_t ell, const SparseIntVector& chain);
/// γ_p : A(r/p) → A(r), [a] ↦ [a] - Σ_{pb=a}[b].
SparseIntVector gamma_p(std::uint64_t r, std::uint32_t p, const SparseIntVector& chain);
/// Frob_ℓ^k on A(r′) for ℓ ∤ r′, k = ±1.
SparseIntVector frobenius_chain(std::uint64_t r_prime, std::uint32_t ell, const SparseIntVector& chain, bool inverse);

/// Knobs for the independence properties of D_ℓ.
enum class DVariant { Standard, ReversedSolver, ShiftedLift };

struct DResult {
  bool solvable = false;      // (σ_ℓ - 1)a ∈ MA(r) + R_r
  SparseIntVector y;          // Frob_ℓ^{-1} b_ℓ in A(r/ℓ)
  ModVector cls;              // its class at level r/ℓ
  bool congruence = false;    // defining congruence re-checked in U_r / I_ℓ
  bool lands_in_h0 = false;   // output invariant at level r/ℓ
  [[nodiscard]] bool ok() const { return solvable && congruence && lands_in_h0; }
};
DResult D_ell(const Workspace& ws, std::uint64_t r, std::uint32_t ell, const ModVector& cls,
              DVariant variant = DVariant::Standard);
/// D_ℓ starting from a chosen lift a ∈ A(r) of an invariant class.
DResult D_ell_from_lift(const Workspace& ws, std::uint64_t r, std::uint32_t ell, const SparseIntVector& lift,
                        DVariant variant = DVariant::Standard);

struct RecursionStep {
  std::uint32_t ell = 0;
  bool identity = false;    // displayed identity, exact in U_r
  bool invariant = false;   // c_r and c_{r/ℓ} invariant
  bool recursion = false;   // D_ℓ c_r = c_{r/ℓ}
  std::string note;
  [[nodiscard]] bool pass() const { return identity && invariant && recursion; }
};
std::vector<RecursionStep> recursion_check_universal(const Workspace& ws, std::uint64_t r,
                                                     const Perturbation* perturb = nullptr);

/// Coordinates mod M of x in terms of the given classes, if x lies in their span.
std::optional<ModVector> express_in(const std::vector<ModVector>& classes, std::size_t width, const ModVector& x,
                                    std::uint32_t modulus);

}  // namespace udist
