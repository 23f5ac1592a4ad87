#pragma once

#include "udist/sparse_vector.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace udist {

struct ContextError : std::runtime_error {
  enum class Kind { Admissibility, NotGenerator, LevelMismatch, NotDivisor };
  ContextError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Modulus M, ascending pool of primes ℓ ≡ 1 (mod M), a primitive root s_ℓ per ℓ.
class Context {
 public:
  /// Validates everything; missing roots default to the smallest primitive root.
  static Context build(std::uint32_t M, std::vector<std::uint32_t> primes,
                       const std::map<std::uint32_t, std::uint32_t>& roots = {});

  [[nodiscard]] std::uint32_t M() const { return M_; }
  [[nodiscard]] const std::vector<std::uint32_t>& primes() const { return primes_; }
  [[nodiscard]] std::uint32_t root(std::uint32_t ell) const { return table(ell).root; }
  [[nodiscard]] const std::map<std::uint32_t, std::uint32_t>& roots() const { return roots_; }
  /// s_ℓ^e mod ℓ.
  [[nodiscard]] std::uint32_t power(std::uint32_t ell, std::uint64_t e) const;
  /// e in [0, ℓ-1) with s_ℓ^e ≡ x (mod ℓ); x must be prime to ℓ.
  [[nodiscard]] std::uint32_t dlog(std::uint32_t ell, std::uint64_t x) const;
  [[nodiscard]] bool in_pool(std::uint64_t p) const;
  /// Product of the whole pool.
  [[nodiscard]] std::uint64_t full_level() const;

 private:
  struct PrimeTable {
    std::uint32_t root = 0;
    std::vector<std::uint32_t> pow;  // pow[e] = s^e
    std::vector<std::uint32_t> log;  // log[x] for 1 <= x < ℓ
  };
  [[nodiscard]] const PrimeTable& table(std::uint32_t ell) const;

  std::uint32_t M_ = 3;
  std::vector<std::uint32_t> primes_;
  std::map<std::uint32_t, std::uint32_t> roots_;
  std::map<std::uint32_t, PrimeTable> tables_;
};

bool is_prime(std::uint64_t n);
std::uint32_t smallest_primitive_root(std::uint32_t p);
std::uint32_t multiplicative_order(std::uint32_t x, std::uint32_t p);

/// Squarefree r whose prime factors lie in the pool.
class Level {
 public:
  Level() = default;
  Level(const Context& ctx, std::uint64_t r);
  Level(const Context& ctx, std::vector<std::uint32_t> primes);

  [[nodiscard]] const Context& context() const { return *ctx_; }
  [[nodiscard]] std::uint64_t r() const { return r_; }
  [[nodiscard]] const std::vector<std::uint32_t>& primes() const { return primes_; }
  [[nodiscard]] std::size_t omega() const { return primes_.size(); }
  [[nodiscard]] bool divisible_by(std::uint32_t p) const;
  [[nodiscard]] std::size_t prime_position(std::uint32_t p) const;
  /// Level r/ℓ.
  [[nodiscard]] Level without(std::uint32_t ell) const;
  /// Divisors ascending by numeric value.
  [[nodiscard]] std::vector<std::uint64_t> divisors() const;
  /// Unit t mod r with t ≡ s_ℓ (mod ℓ) and t ≡ 1 at the other primes of r.
  [[nodiscard]] std::uint64_t sigma_unit(std::uint32_t ell) const;
  /// CRT: the t mod r with t ≡ residues[i] (mod primes[i]).
  [[nodiscard]] std::uint64_t crt(const std::vector<std::uint64_t>& residues) const;

  friend bool operator==(const Level& a, const Level& b) { return a.r_ == b.r_; }

 private:
  const Context* ctx_ = nullptr;
  std::uint64_t r_ = 1;
  std::vector<std::uint32_t> primes_;
};

/// Reduced element num/den of Q/Z.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Fraction make(std::int64_t num, std::uint64_t den);
  /// j/r as a reduced fraction.
  static Fraction at_level(std::uint64_t j, std::uint64_t r) { return make(static_cast<std::int64_t>(j), r); }
  /// Index j with j/r = *this; requires den | r.
  [[nodiscard]] std::uint64_t index(std::uint64_t r) const;
  /// a ∈ (g/r)Z/Z.
  [[nodiscard]] bool in_level(std::uint64_t g, std::uint64_t r) const { return (r / g) % den == 0; }
  [[nodiscard]] std::string str() const;

  friend Fraction operator+(const Fraction& a, const Fraction& b);
  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return a.num != b.num ? a.num < b.num : a.den < b.den;
  }
};

/// Element of G_r as exponents e_ℓ ∈ Z/(ℓ-1), one per prime of the level.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(Level level, std::vector<std::uint32_t> exponents);
  static GroupElement identity(const Level& level);
  static GroupElement sigma(const Level& level, std::uint32_t ell, std::uint32_t power = 1);

  [[nodiscard]] const Level& level() const { return level_; }
  [[nodiscard]] const std::vector<std::uint32_t>& exponents() const { return exponents_; }
  /// The unit t mod r realizing the element.
  [[nodiscard]] std::uint64_t unit() const;
  [[nodiscard]] Fraction act(const Fraction& a) const;
  [[nodiscard]] GroupElement inverse() const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.exponents_ == b.exponents_; }
  friend bool operator<(const GroupElement& a, const GroupElement& b) { return a.exponents_ < b.exponents_; }

 private:
  Level level_;
  std::vector<std::uint32_t> exponents_;
};

/// Frob_ℓ on fractions of level r′ (ℓ ∤ r′): multiplication by ℓ.
GroupElement frobenius(std::uint32_t ell, const Level& level);

/// Formal Z-combination of group elements of one level.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(Level level) : level_(std::move(level)) {}
  static GroupRingElement identity(const Level& level);
  static GroupRingElement of(const GroupElement& g, const Integer& c = 1);
  /// N_ℓ = Σ_{i=0}^{ℓ-2} σ_ℓ^i.
  static GroupRingElement norm(const Level& level, std::uint32_t ell);
  /// N′_ℓ = Σ_{i=1}^{ℓ-2} i σ_ℓ^i.
  static GroupRingElement derivative(const Level& level, std::uint32_t ell);
  /// N′_r = ∏_{ℓ | r} N′_ℓ.
  static GroupRingElement derivative(const Level& level);

  [[nodiscard]] const Level& level() const { return level_; }
  [[nodiscard]] const std::map<GroupElement, Integer>& terms() const { return terms_; }
  [[nodiscard]] Integer coefficient(const GroupElement& g) const;
  void add(const GroupElement& g, const Integer& c);

  /// Linear extension of the action to a chain indexed by j/r, j in [0, r).
  [[nodiscard]] SparseIntVector apply(const SparseIntVector& chain) const;

  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) { return a.terms_ == b.terms_; }

 private:
  Level level_;
  std::map<GroupElement, Integer> terms_;
};

/// Multiplies every index of a level-r chain by t (mod r).
SparseIntVector act_on_chain(std::uint64_t t, std::uint64_t r, const SparseIntVector& chain);

/// N′_ℓ(σ_ℓ - 1) = ℓ - 1 - N_ℓ as an identity in Z[G_ℓ]. The derivative may be
/// supplied to run the check on a perturbed element.
bool norm_identity_check(const Context& ctx, std::uint32_t ell, const GroupRingElement* derivative = nullptr);

}  // namespace udist
