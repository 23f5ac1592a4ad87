#include "udist/resolution.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace udist {

namespace {

std::size_t omega_of(const Level& level, std::uint64_t g) {
  std::size_t k = 0;
  for (auto p : level.primes())
    if (g % p == 0) ++k;
  return k;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

PresentedModule free_module(std::size_t n) { return PresentedModule(index_labels(n), SparseIntMatrix(0, n)); }

bool isomorphism(const ModuleHom& f) { return f.injective() && f.surjective(); }

}  // namespace

int prefix_sign(const Level& level, std::uint32_t ell, std::uint64_t g) {
  int s = 1;
  for (auto p : level.primes()) {
    if (p >= ell) break;
    if (g % p == 0) s = -s;
  }
  return s;
}

LComplex::LComplex(const Level& level) : level_(level) {
  const std::size_t n = level.omega();
  blocks_.resize(n + 1);
  sizes_.assign(n + 1, 0);
  for (auto g : level.divisors()) {
    const std::size_t k = omega_of(level, g);
    blocks_[k].push_back({g, sizes_[k]});
    sizes_[k] += level.r() / g;
  }
}

std::size_t LComplex::index(const LSymbol& s) const {
  const std::uint64_t r = level_.r();
  if (r % s.g != 0 || (r / s.g) % s.a.den != 0)
    throw ContextError(ContextError::Kind::LevelMismatch, "symbol [" + s.a.str() + "," + std::to_string(s.g) + "] not in L(" +
                                                              std::to_string(r) + ")");
  const std::size_t k = omega_of(level_, s.g);
  for (const auto& b : blocks_[k])
    if (b.g == s.g) return b.offset + s.a.index(r) / s.g;
  throw std::logic_error("LComplex::index: missing block");
}

LSymbol LComplex::symbol(std::size_t k, std::size_t i) const {
  const auto& bl = blocks_.at(k);
  auto it = std::upper_bound(bl.begin(), bl.end(), i, [](std::size_t x, const Block& b) { return x < b.offset; });
  --it;
  const std::uint64_t j = i - it->offset;
  return {Fraction::at_level(j * it->g, level_.r()), it->g};
}

SparseIntVector LComplex::d(std::size_t k, std::size_t i) const {
  if (k == 0) return {};
  const LSymbol s = symbol(k, i);
  const std::uint64_t r = level_.r();
  const std::uint64_t j = s.a.index(r) / s.g;
  std::vector<std::pair<std::size_t, Integer>> out;
  for (auto ell : level_.primes()) {
    if (s.g % ell != 0) continue;
    const int sign = prefix_sign(level_, ell, s.g);
    const std::uint64_t h = s.g / ell;
    std::size_t off = 0;
    for (const auto& b : blocks_[k - 1])
      if (b.g == h) off = b.offset;
    out.emplace_back(off + j * ell, sign);
    const std::uint64_t step = r / s.g;
    for (std::uint64_t t = 0; t < ell; ++t) out.emplace_back(off + j + t * step, -sign);
  }
  return SparseIntVector::from_pairs(std::move(out));
}

SparseIntMatrix LComplex::differential(std::size_t k) const {
  std::vector<SparseIntVector> rows;
  rows.reserve(size(k));
  for (std::size_t i = 0; i < size(k); ++i) rows.push_back(d(k, i));
  return SparseIntMatrix::from_rows(size(k - 1), std::move(rows));
}

SparseIntVector LComplex::act(std::uint64_t t, std::size_t k, const SparseIntVector& chain) const {
  std::vector<std::pair<std::size_t, Integer>> out;
  const auto& bl = blocks_.at(k);
  for (const auto& e : chain.entries()) {
    auto it = std::upper_bound(bl.begin(), bl.end(), e.index, [](std::size_t x, const Block& b) { return x < b.offset; });
    --it;
    const std::uint64_t n = level_.r() / it->g;
    const std::uint64_t j = e.index - it->offset;
    out.emplace_back(it->offset + static_cast<std::size_t>((static_cast<unsigned __int128>(j) * t) % n), e.value);
  }
  return SparseIntVector::from_pairs(std::move(out));
}

SparseIntVector LComplex::apply_d(std::size_t k, const SparseIntVector& chain) const {
  SparseIntVector out;
  if (k == 0) return out;
  for (const auto& e : chain.entries()) out.add_scaled(d(k, e.index), e.value);
  return out;
}

std::vector<Homology> complex_cohomology(const std::vector<std::size_t>& sizes,
                                         const std::vector<SparseIntMatrix>& differentials) {
  const std::size_t n = sizes.size();
  std::vector<MatrixInvariants> inv(n + 1);
  for (std::size_t k = 1; k < n; ++k) inv[k] = matrix_invariants(differentials[k]);
  std::vector<Homology> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kernel = sizes[k] - inv[k].rank;
    out[k].free_rank = kernel - inv[k + 1].rank;
    out[k].torsion = inv[k + 1].elementary_divisors;
  }
  return out;
}

bool d_squared_zero(const LComplex& l) {
  for (std::size_t k = 2; k <= l.depth(); ++k)
    for (std::size_t i = 0; i < l.size(k); ++i)
      if (!l.apply_d(k - 1, l.d(k, i)).empty()) return false;
  return true;
}

bool d_equivariant(const LComplex& l) {
  for (auto ell : l.level().primes()) {
    const std::uint64_t t = l.level().sigma_unit(ell);
    for (std::size_t k = 1; k <= l.depth(); ++k)
      for (std::size_t i = 0; i < l.size(k); ++i)
        if (!(l.apply_d(k, l.act(t, k, SparseIntVector::unit(i))) == l.act(t, k - 1, l.d(k, i)))) return false;
  }
  return true;
}

LCohomologyReport cohomology_of_L(const LComplex& l, const UModule& u) {
  LCohomologyReport rep;
  std::vector<std::size_t> sizes;
  std::vector<SparseIntMatrix> diffs(l.depth() + 1);
  for (std::size_t k = 0; k <= l.depth(); ++k) {
    sizes.push_back(l.size(k));
    if (k > 0) diffs[k] = l.differential(k);
    rep.euler_characteristic += (k % 2 == 0 ? 1 : -1) * static_cast<long>(l.size(k));
  }
  rep.groups = complex_cohomology(sizes, diffs);
  rep.concentrated = std::all_of(rep.groups.begin() + 1, rep.groups.end(), [](const Homology& h) { return h.zero(); });
  const PresentedModule h0(u.module.labels(), l.depth() > 0 ? diffs[1] : SparseIntMatrix(0, l.size(0)));
  std::vector<SparseIntVector> images;
  for (std::size_t j = 0; j < l.size(0); ++j) images.push_back(SparseIntVector::unit(j));
  try {
    rep.h0_isomorphic = isomorphism(ModuleHom(h0, u.module, std::move(images)));
  } catch (const NotHomomorphism&) {
    rep.h0_isomorphic = false;
  }
  return rep;
}

SparseIntVector s_ell(const LComplex& big, const LComplex& small, std::uint32_t ell, std::size_t k,
                      const SparseIntVector& chain) {
  const Level& level = big.level();
  if (!level.divisible_by(ell))
    throw ContextError(ContextError::Kind::NotDivisor, std::to_string(ell) + " does not divide " + std::to_string(level.r()));
  if (small.level().r() * ell != level.r()) throw ContextError(ContextError::Kind::LevelMismatch, "s_ell: target level");
  std::vector<std::pair<std::size_t, Integer>> out;
  if (k == 0) return {};
  for (const auto& e : chain.entries()) {
    const LSymbol s = big.symbol(k, e.index);
    if (s.g % ell != 0) continue;
    const std::uint64_t a0 = rho_index(level.r(), ell, s.a.index(level.r()));
    const LSymbol t{Fraction::at_level(a0, small.level().r()), s.g / ell};
    out.emplace_back(small.index(t), prefix_sign(level, ell, s.g) * e.value);
  }
  return SparseIntVector::from_pairs(std::move(out));
}

bool s_ell_anticommutes(const LComplex& big, const LComplex& small, std::uint32_t ell) {
  for (std::size_t k = 1; k <= big.depth(); ++k)
    for (std::size_t i = 0; i < big.size(k); ++i) {
      const SparseIntVector lhs = s_ell(big, small, ell, k - 1, big.d(k, i));
      const SparseIntVector rhs = small.apply_d(k - 1, s_ell(big, small, ell, k, SparseIntVector::unit(i)));
      if (!(lhs + rhs).empty()) return false;
    }
  return true;
}

namespace {

/// Explicit basis of L(r)/L′ in degree -k: blocks with ℓ ∤ g collapse onto the
/// symbols of L(r/ℓ); blocks with ℓ | g are untouched by L′.
struct QuotientDegree {
  struct Block {
    std::uint64_t g;
    std::size_t big_offset;
    std::size_t offset;
    bool collapsed;
  };
  std::vector<Block> blocks;
  std::size_t size = 0;
};

class SigmaData {
 public:
  SigmaData(const LComplex& big, const LComplex& small, std::uint32_t ell)
      : big_(big), small_(small), ell_(ell), r_(big.level().r()), rl_(small.level().r()) {
    for (std::size_t k = 0; k <= big.depth(); ++k) {
      QuotientDegree q;
      for (const auto& b : big.blocks(k)) {
        const bool collapsed = b.g % ell != 0;
        q.blocks.push_back({b.g, b.offset, q.size, collapsed});
        q.size += collapsed ? rl_ / b.g : r_ / b.g;
      }
      q_.push_back(std::move(q));
    }
  }

  [[nodiscard]] std::size_t depth() const { return big_.depth(); }
  [[nodiscard]] std::size_t q_size(std::size_t k) const { return q_.at(k).size; }
  [[nodiscard]] std::size_t small_size(std::size_t k) const { return k <= small_.depth() ? small_.size(k) : 0; }

  /// Projection L(r) → L/L′ on a generator of degree -k.
  [[nodiscard]] SparseIntVector project(std::size_t k, std::size_t i) const {
    const auto& b = block_of_big(k, i);
    const std::uint64_t j = i - b.big_offset;
    if (!b.collapsed) return SparseIntVector::unit(b.offset + j);
    const std::uint64_t x = rho_index(r_, ell_, j * b.g);
    return SparseIntVector::unit(b.offset + x / b.g);
  }
  [[nodiscard]] SparseIntVector project(std::size_t k, const SparseIntVector& chain) const {
    SparseIntVector out;
    for (const auto& e : chain.entries()) out.add_scaled(project(k, e.index), e.value);
    return out;
  }

  /// Representative in L(r) of quotient generator q of degree -k.
  [[nodiscard]] std::size_t lift(std::size_t k, std::size_t q) const {
    const auto& b = block_of_q(k, q);
    const std::uint64_t j = q - b.offset;
    return b.big_offset + (b.collapsed ? j * ell_ : j);
  }

  /// L′ generators of degree -k: [a + 1/ℓ, g] - [a, g] for ℓ ∤ g.
  [[nodiscard]] std::vector<SparseIntVector> l_prime(std::size_t k) const {
    std::vector<SparseIntVector> out;
    for (const auto& b : q_.at(k).blocks) {
      if (!b.collapsed) continue;
      const std::uint64_t n = r_ / b.g, shift = rl_ / b.g;
      for (std::uint64_t j = 0; j < n; ++j)
        out.push_back(SparseIntVector::from_pairs({{b.big_offset + (j + shift) % n, 1}, {b.big_offset + j, -1}}));
    }
    return out;
  }

  [[nodiscard]] SparseIntVector d_bar(std::size_t k, std::size_t q) const {
    return project(k - 1, big_.d(k, lift(k, q)));
  }
  [[nodiscard]] SparseIntVector apply_d_bar(std::size_t k, const SparseIntVector& chain) const {
    SparseIntVector out;
    if (k == 0) return out;
    for (const auto& e : chain.entries()) out.add_scaled(d_bar(k, e.index), e.value);
    return out;
  }

  /// Inclusion L(r/ℓ) → L/L′ on a generator of degree -k.
  [[nodiscard]] SparseIntVector include(std::size_t k, std::size_t i) const {
    const LSymbol s = small_.symbol(k, i);
    for (const auto& b : q_.at(k).blocks)
      if (b.g == s.g) return SparseIntVector::unit(b.offset + s.a.index(rl_) / s.g);
    throw std::logic_error("sigma_sequence: missing block");
  }
  [[nodiscard]] SparseIntVector include(std::size_t k, const SparseIntVector& chain) const {
    SparseIntVector out;
    for (const auto& e : chain.entries()) out.add_scaled(include(k, e.index), e.value);
    return out;
  }

  [[nodiscard]] SparseIntVector s_bar(std::size_t k, std::size_t q) const {
    return s_ell(big_, small_, ell_, k, SparseIntVector::unit(lift(k, q)));
  }
  [[nodiscard]] SparseIntVector apply_s_bar(std::size_t k, const SparseIntVector& chain) const {
    SparseIntVector out;
    for (const auto& e : chain.entries()) out.add_scaled(s_bar(k, e.index), e.value);
    return out;
  }

 private:
  [[nodiscard]] const QuotientDegree::Block& block_of_big(std::size_t k, std::size_t i) const {
    const auto& bl = q_.at(k).blocks;
    auto it = std::upper_bound(bl.begin(), bl.end(), i,
                               [](std::size_t x, const QuotientDegree::Block& b) { return x < b.big_offset; });
    return *(--it);
  }
  [[nodiscard]] const QuotientDegree::Block& block_of_q(std::size_t k, std::size_t q) const {
    const auto& bl = q_.at(k).blocks;
    auto it = std::upper_bound(bl.begin(), bl.end(), q,
                               [](std::size_t x, const QuotientDegree::Block& b) { return x < b.offset; });
    return *(--it);
  }

  const LComplex& big_;
  const LComplex& small_;
  std::uint32_t ell_;
  std::uint64_t r_, rl_;
  std::vector<QuotientDegree> q_;
};

}  // namespace

SigmaSequenceReport sigma_sequence_check(const UModule& u, const UModule& lower, std::uint32_t ell) {
  const LComplex big(u.level);
  const LComplex small(lower.level);
  const SigmaData s(big, small, ell);
  const std::size_t n = s.depth();
  SigmaSequenceReport rep;

  rep.quotient_free = true;
  rep.l_prime_stable = true;
  for (std::size_t k = 0; k <= n && rep.quotient_free; ++k) {
    const std::vector<SparseIntVector> lp = s.l_prime(k);
    const PresentedModule quotient(index_labels(big.size(k)), SparseIntMatrix::from_rows(big.size(k), lp));
    const PresentedModule target = free_module(s.q_size(k));
    std::vector<SparseIntVector> images;
    for (std::size_t i = 0; i < big.size(k); ++i) images.push_back(s.project(k, i));
    try {
      rep.quotient_free = isomorphism(ModuleHom(quotient, target, std::move(images)));
    } catch (const NotHomomorphism&) {
      rep.quotient_free = false;
    }
    for (const auto& x : lp) {
      if (k > 0 && !s.project(k - 1, big.apply_d(k, x)).empty()) rep.l_prime_stable = false;
      for (auto p : u.level.primes())
        if (!s.project(k, big.act(u.level.sigma_unit(p), k, x)).empty()) rep.l_prime_stable = false;
    }
    const std::uint64_t t = u.level.sigma_unit(ell);
    for (std::size_t i = 0; i < big.size(k); ++i) {
      const SparseIntVector moved = big.act(t, k, SparseIntVector::unit(i)) - SparseIntVector::unit(i);
      if (!s.project(k, moved).empty()) rep.l_prime_stable = false;
    }
  }

  rep.chain_maps = true;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < s.small_size(k); ++i)
      if (!(s.include(k - 1, small.d(k, i)) == s.apply_d_bar(k, s.include(k, i)))) rep.chain_maps = false;
    for (std::size_t q = 0; q < s.q_size(k); ++q) {
      const SparseIntVector lhs = s.apply_s_bar(k - 1, s.d_bar(k, q));
      const SparseIntVector rhs = small.apply_d(k - 1, s.s_bar(k, q));
      if (!(lhs + rhs).empty()) rep.chain_maps = false;
    }
  }

  rep.short_exact = true;
  for (std::size_t k = 0; k <= n; ++k) {
    const PresentedModule qk = free_module(s.q_size(k));
    std::vector<SparseIntVector> inc;
    for (std::size_t i = 0; i < s.small_size(k); ++i) inc.push_back(s.include(k, i));
    const ModuleHom iota(free_module(s.small_size(k)), qk, inc);
    if (!iota.injective()) rep.short_exact = false;
    const std::size_t below = k > 0 ? s.small_size(k - 1) : 0;
    std::vector<SparseIntVector> sb;
    for (std::size_t q = 0; q < s.q_size(k); ++q) sb.push_back(k > 0 ? s.s_bar(k, q) : SparseIntVector());
    const PresentedModule target = free_module(below);
    const ModuleHom sigma(qk, target, sb);
    if (!sigma.surjective()) rep.short_exact = false;
    for (const auto& x : inc)
      if (!s.apply_s_bar(k, x).empty() && k > 0) rep.short_exact = false;
    const RowLattice image(s.q_size(k), inc);
    for (const auto& v : sigma.kernel().map)
      if (!image.contains(v)) rep.short_exact = false;
  }

  std::vector<std::size_t> sizes;
  std::vector<SparseIntMatrix> diffs(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    sizes.push_back(s.q_size(k));
    if (k == 0) continue;
    std::vector<SparseIntVector> rows;
    for (std::size_t q = 0; q < s.q_size(k); ++q) rows.push_back(s.d_bar(k, q));
    diffs[k] = SparseIntMatrix::from_rows(s.q_size(k - 1), std::move(rows));
  }
  rep.groups = complex_cohomology(sizes, diffs);
  rep.h_minus_one_zero = n < 1 || rep.groups[1].zero();
  rep.lower_degrees_zero = true;
  for (std::size_t k = 2; k <= n; ++k) rep.lower_degrees_zero = rep.lower_degrees_zero && rep.groups[k].zero();

  const PresentedModule h0(index_labels(s.q_size(0)), n > 0 ? diffs[1] : SparseIntMatrix(0, s.q_size(0)));
  const PresentedModule reduced = quotient_by_I_ell(u, ell);
  std::vector<SparseIntVector> images;
  for (std::size_t q = 0; q < s.q_size(0); ++q) images.push_back(SparseIntVector::unit(q * ell));
  try {
    rep.h0_matches = isomorphism(ModuleHom(h0, reduced, std::move(images)));
  } catch (const NotHomomorphism&) {
    rep.h0_matches = false;
  }
  const ModuleHom frob(lower.module, lower.module, ell_minus_frob_images(lower.level, ell));
  const DerivedModule coker = frob.cokernel();
  rep.h0_matches = rep.h0_matches && coker.module.invariant_factors() == h0.invariant_factors() &&
                   coker.module.free_rank() == h0.free_rank();
  return rep;
}

}  // namespace udist
