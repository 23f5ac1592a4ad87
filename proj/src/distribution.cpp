#include "udist/distribution.hpp"

#include <algorithm>

namespace udist {

std::vector<std::string> fraction_labels(std::uint64_t r) {
  std::vector<std::string> out;
  out.reserve(r);
  for (std::uint64_t j = 0; j < r; ++j) out.push_back(Fraction::at_level(j, r).str());
  return out;
}

SparseIntVector distribution_relation(std::uint64_t r, std::uint32_t ell, std::uint64_t j) {
  if (j % ell != 0) throw std::invalid_argument("distribution_relation: a not in (ell/r)Z/Z");
  const std::uint64_t k = j / ell, step = r / ell;
  std::vector<std::pair<std::size_t, Integer>> pairs;
  pairs.emplace_back(j, 1);
  for (std::uint64_t t = 0; t < ell; ++t) pairs.emplace_back(k + t * step, -1);
  return SparseIntVector::from_pairs(std::move(pairs));
}

std::vector<RelationKey> distribution_relation_keys(const Level& level) {
  const std::uint64_t r = level.r();
  std::vector<RelationKey> out;
  for (auto ell : level.primes()) {
    std::vector<std::pair<Fraction, std::uint64_t>> targets;
    for (std::uint64_t j = 0; j < r; j += ell) targets.emplace_back(Fraction::at_level(j, r), j);
    std::sort(targets.begin(), targets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [a, j] : targets) out.push_back({ell, j});
  }
  return out;
}

std::vector<SparseIntVector> distribution_relations(const Level& level) {
  std::vector<SparseIntVector> out;
  for (const auto& key : distribution_relation_keys(level)) out.push_back(distribution_relation(level.r(), key.ell, key.j));
  return out;
}

UModule build_U(const Level& level, long drop) {
  auto rel = distribution_relations(level);
  if (drop >= 0) {
    if (static_cast<std::size_t>(drop) >= rel.size()) throw std::out_of_range("build_U: no relation to drop");
    rel.erase(rel.begin() + drop);
  }
  return {level, PresentedModule(fraction_labels(level.r()), SparseIntMatrix::from_rows(level.r(), std::move(rel)))};
}

std::vector<SparseIntVector> embedding_images(std::uint64_t s, std::uint64_t r) {
  if (r % s != 0)
    throw ContextError(ContextError::Kind::NotDivisor, "not a divisor: " + std::to_string(s) + " of " + std::to_string(r));
  std::vector<SparseIntVector> out;
  for (std::uint64_t j = 0; j < s; ++j) out.push_back(SparseIntVector::unit(j * (r / s)));
  return out;
}

EmbeddingReport embed_U(const UModule& small, const UModule& big) {
  ModuleHom hom(small.module, big.module, embedding_images(small.level.r(), big.level.r()));
  EmbeddingReport rep;
  rep.injective = hom.injective();
  auto coker = hom.cokernel();
  rep.cokernel_free = coker.module.is_free();
  rep.cokernel_rank = coker.module.free_rank();
  return rep;
}

std::vector<SparseIntVector> I_ell_generators(const Level& level, std::uint32_t ell) {
  (void)level.prime_position(ell);
  const std::uint64_t r = level.r(), step = r / ell;
  std::vector<SparseIntVector> out;
  for (std::uint64_t j = 0; j < r; ++j)
    out.push_back(SparseIntVector::from_pairs({{(j + step) % r, 1}, {j, -1}}));
  return out;
}

std::vector<SparseIntVector> I_ell_full_family(const Level& level, std::uint32_t ell) {
  (void)level.prime_position(ell);
  const std::uint64_t r = level.r(), step = r / ell;
  std::vector<SparseIntVector> out;
  for (std::uint64_t j = 0; j < r; ++j)
    for (std::uint64_t k = 1; k < ell; ++k)
      out.push_back(SparseIntVector::from_pairs({{(j + k * step) % r, 1}, {j, -1}}));
  return out;
}

PresentedModule quotient_by_I_ell(const UModule& u, std::uint32_t ell) {
  SparseIntMatrix rel = u.module.relations();
  for (auto& g : I_ell_generators(u.level, ell)) rel.append_row(std::move(g));
  return PresentedModule(u.module.labels(), std::move(rel));
}

std::uint64_t rho_index(std::uint64_t r, std::uint32_t ell, std::uint64_t j) {
  const std::uint64_t rl = r / ell;
  if (rl == 1) return 0;
  const auto inv = static_cast<std::uint64_t>(inverse_mod(static_cast<std::int64_t>(ell % rl), static_cast<std::int64_t>(rl)));
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(j % rl) * inv) % rl);
}

std::uint64_t euler_index(const Level& level) {
  Fraction x;
  for (auto p : level.primes()) x = x + Fraction::make(1, p);
  return x.index(level.r());
}

EulerRelations euler_relations_check(const UModule& u, std::uint32_t ell) {
  const Level& level = u.level;
  const Level lower = level.without(ell);
  const std::uint64_t r = level.r(), rl = lower.r();
  EulerRelations out;
  SparseIntVector xr = SparseIntVector::unit(euler_index(level));
  SparseIntVector lhs = GroupRingElement::norm(level, ell).apply(xr);
  const std::uint64_t xl = euler_index(lower);
  // (Frob_ℓ - 1)x_{r/ℓ}, computed at level r/ℓ and embedded.
  SparseIntVector rhs = SparseIntVector::from_pairs({{(xl * ell % rl) * (r / rl), 1}, {xl * (r / rl), -1}});
  out.norm_relation = u.module.equal(lhs, rhs);
  RowLattice with_i(r, [&] {
    auto rows = u.module.relations().row_data();
    for (auto& g : I_ell_generators(level, ell)) rows.push_back(std::move(g));
    return rows;
  }());
  out.congruence = with_i.contains(xr - SparseIntVector::unit(xl * (r / rl)));
  return out;
}

std::vector<SparseIntVector> ell_minus_frob_images(const Level& level, std::uint32_t ell) {
  if (level.divisible_by(ell))
    throw ContextError(ContextError::Kind::LevelMismatch, "ell divides level: " + std::to_string(ell));
  const std::uint64_t r = level.r();
  std::vector<SparseIntVector> out;
  for (std::uint64_t j = 0; j < r; ++j)
    out.push_back(SparseIntVector::from_pairs({{j, Integer(ell)}, {(j * ell) % r, -1}}));
  return out;
}

bool frob_regularity_check(const UModule& u, std::uint32_t ell) {
  ModuleHom hom(u.module, u.module, ell_minus_frob_images(u.level, ell));
  return hom.injective();
}

ReductionSequence reduction_sequence_check(const UModule& u, const UModule& lower, std::uint32_t ell) {
  ReductionSequence out;
  ModuleHom frob(lower.module, lower.module, ell_minus_frob_images(lower.level, ell));
  out.injective = frob.injective();
  DerivedModule coker = frob.cokernel();
  out.cokernel_factors = coker.module.invariant_factors();
  PresentedModule quotient = quotient_by_I_ell(u, ell);
  out.quotient_factors = quotient.invariant_factors();
  out.quotient_rank = quotient.free_rank();
  try {
    ModuleHom induced(coker.module, quotient, embedding_images(lower.level.r(), u.level.r()));
    out.well_defined = true;
    out.surjective = induced.surjective();
    out.exact_middle = induced.injective();
  } catch (const NotHomomorphism&) {
    out.well_defined = false;
  }
  return out;
}

}  // namespace udist
