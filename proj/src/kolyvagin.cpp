#include "udist/kolyvagin.hpp"

#include <algorithm>

namespace udist {

namespace {

SparseIntVector scale_indices(const SparseIntVector& chain, std::uint64_t factor) {
  return chain.remapped([](std::size_t) { return true; }, [factor](std::size_t i) { return i * factor; });
}

ModVector dense_to_mod(const std::vector<std::uint64_t>& acc, std::uint32_t modulus) {
  ModVector out;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] % modulus != 0) out.push_back({static_cast<std::uint32_t>(i), static_cast<Residue>(acc[i] % modulus)});
  return out;
}

/// Integer chain Σ c_i rows[i] for a combination with entries in [0, M).
SparseIntVector combine_rows(const SparseIntMatrix& rows, const ModVector& combination) {
  SparseIntVector out;
  for (const auto& e : combination) out.add_scaled(rows.row(e.index), Integer(e.value));
  return out;
}

/// Exact (v - Σ c_i rows[i]) / M; nullopt when some entry is not divisible.
std::optional<SparseIntVector> divide_after(const SparseIntVector& v, const SparseIntMatrix& rows,
                                            const ModVector& combination, std::uint32_t modulus) {
  SparseIntVector rem = v - combine_rows(rows, combination);
  for (auto& e : rem.mutable_entries()) {
    if (!mpz_divisible_ui_p(e.value.get_mpz_t(), modulus)) return std::nullopt;
    e.value /= modulus;
  }
  return rem;
}

/// Solves v ≡ Σ c_i rel_i (mod M) and returns the combination.
std::optional<ModVector> express_relations(const LevelData& data, const SparseIntVector& v, std::uint32_t modulus,
                                           DVariant variant) {
  if (variant != DVariant::ReversedSolver) return data.relations_mod.express(mod_reduce(v, modulus));
  const auto& rel = data.u.module.relations();
  const std::size_t n = rel.rows();
  std::vector<ModVector> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(mod_reduce(rel.row(n - 1 - i), modulus));
  const ModEchelon reversed(modulus, data.level.r(), std::move(rows), /*track=*/true);
  auto c = reversed.express(mod_reduce(v, modulus));
  if (!c) return c;
  ModVector out;
  for (const auto& e : *c) out.push_back({static_cast<std::uint32_t>(n - 1 - e.index), e.value});
  std::sort(out.begin(), out.end(), [](const ModEntry& a, const ModEntry& b) { return a.index < b.index; });
  return out;
}

GroupRingElement partial_derivative(const Level& level, std::uint32_t skip, const Perturbation* perturb) {
  GroupRingElement x = GroupRingElement::identity(level);
  for (auto p : level.primes())
    if (p != skip) x = x * derivative_element(level, p, perturb);
  return x;
}

}  // namespace

GroupRingElement derivative_element(const Level& level, std::uint32_t ell, const Perturbation* perturb) {
  GroupRingElement x = GroupRingElement::derivative(level, ell);
  if (perturb != nullptr && perturb->ell == ell) x.add(GroupElement::sigma(level, ell, 1), -1);
  return x;
}

GroupRingElement derivative_element(const Level& level, const Perturbation* perturb) {
  return partial_derivative(level, 0, perturb);
}

std::optional<std::size_t> H0Space::dimension(std::uint32_t modulus) const {
  for (auto f : order_factors)
    if (f != modulus) return std::nullopt;
  return order_factors.size();
}

const LevelData& Workspace::level(std::uint64_t r) const {
  return levels_.get(r, [&] {
    const Level level(ctx_, r);
    UModule u = build_U(level);
    LevelData data{level, u, 0, {}, {}, {}, {}, {}};
    if (!u.module.is_free()) throw InternalContradiction("U_" + std::to_string(r) + " has torsion");
    data.phi = u.module.free_rank();
    data.coordinates = u.module.lattice().coordinate_table();
    data.keys = distribution_relation_keys(level);
    std::vector<ModVector> rows;
    for (const auto& row : u.module.relations().row_data()) rows.push_back(mod_reduce(row, ctx_.M()));
    data.relations_mod = ModEchelon(ctx_.M(), r, std::move(rows), /*track=*/true);
    for (auto ell : level.primes()) {
      auto rel = u.module.relations().row_data();
      for (auto& g : I_ell_generators(level, ell)) rel.push_back(std::move(g));
      data.with_I.emplace(ell, RowLattice(r, std::move(rel)));
    }
    data.h0 = h0_invariants(data, ctx_.M());
    return data;
  });
}

SparseIntVector exact_coordinates(const LevelData& data, const SparseIntVector& chain) {
  SparseIntVector out;
  for (const auto& e : chain.entries()) out.add_scaled(data.coordinates.at(e.index), e.value);
  return out;
}

ModVector class_of(const LevelData& data, const SparseIntVector& chain, std::uint32_t modulus) {
  std::vector<std::uint64_t> acc(data.phi, 0);
  for (const auto& e : chain.entries()) {
    const Residue c = to_residue(e.value, modulus);
    if (c == 0) continue;
    for (const auto& f : data.coordinates.at(e.index).entries())
      acc[f.index] = (acc[f.index] + std::uint64_t{c} * to_residue(f.value, modulus)) % modulus;
  }
  return dense_to_mod(acc, modulus);
}

SparseIntVector representative(const LevelData& data, const ModVector& cls) {
  SparseIntVector out;
  for (const auto& e : cls) out.add_scaled(data.u.module.lift(e.index), Integer(e.value));
  return out;
}

bool is_invariant(const LevelData& data, const ModVector& cls, std::uint32_t modulus) {
  const SparseIntVector rep = representative(data, cls);
  for (auto ell : data.level.primes()) {
    const SparseIntVector moved = act_on_chain(data.level.sigma_unit(ell), data.level.r(), rep) - rep;
    if (!class_of(data, moved, modulus).empty()) return false;
  }
  return true;
}

ModVector embed_class(const LevelData& small, const LevelData& big, const ModVector& cls, std::uint32_t modulus) {
  if (big.level.r() % small.level.r() != 0)
    throw ContextError(ContextError::Kind::NotDivisor, "embed_class: level does not divide");
  return class_of(big, scale_indices(representative(small, cls), big.level.r() / small.level.r()), modulus);
}

H0Space h0_invariants(const LevelData& data, std::uint32_t modulus) {
  const std::size_t phi = data.phi;
  const auto& primes = data.level.primes();
  std::vector<ModVector> rows(phi);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < static_cast<long>(phi); ++i) {
    const SparseIntVector lift = data.u.module.lift(static_cast<std::size_t>(i));
    ModVector row;
    for (std::size_t b = 0; b < primes.size(); ++b) {
      const SparseIntVector moved = act_on_chain(data.level.sigma_unit(primes[b]), data.level.r(), lift) - lift;
      for (const auto& e : class_of(data, moved, modulus))
        row.push_back({static_cast<std::uint32_t>(b * phi + e.index), e.value});
    }
    rows[static_cast<std::size_t>(i)] = std::move(row);
  }
  const ModEchelon stacked(modulus, primes.size() * phi, std::move(rows), /*track=*/true);
  const ModEchelon invariants(modulus, phi, stacked.kernel());
  H0Space h0;
  h0.basis = invariants.basis();
  h0.order_factors = invariants.span_order_factors();
  return h0;
}

SparseIntVector kolyvagin_chain(const Level& level, const Perturbation* perturb) {
  return derivative_element(level, perturb).apply(SparseIntVector::unit(euler_index(level)));
}

KolyvaginClass universal_kolyvagin_class(const Workspace& ws, std::uint64_t r, const Perturbation* perturb) {
  const LevelData& data = ws.level(r);
  KolyvaginClass c;
  c.chain = kolyvagin_chain(data.level, perturb);
  c.cls = class_of(data, c.chain, ws.M());
  c.invariant = is_invariant(data, c.cls, ws.M());
  return c;
}

SparseIntVector rho_ell(std::uint64_t r, std::uint32_t ell, const SparseIntVector& chain) {
  if (r % ell != 0) throw ContextError(ContextError::Kind::NotDivisor, std::to_string(ell) + " does not divide " + std::to_string(r));
  return chain.remapped([](std::size_t) { return true; }, [&](std::size_t j) { return rho_index(r, ell, j); });
}

SparseIntVector gamma_p(std::uint64_t r, std::uint32_t p, const SparseIntVector& chain) {
  if (r % p != 0) throw ContextError(ContextError::Kind::NotDivisor, std::to_string(p) + " does not divide " + std::to_string(r));
  SparseIntVector out;
  for (const auto& e : chain.entries()) out.add_scaled(distribution_relation(r, p, e.index * p), e.value);
  return out;
}

SparseIntVector frobenius_chain(std::uint64_t r_prime, std::uint32_t ell, const SparseIntVector& chain, bool inverse) {
  if (r_prime % ell == 0) throw ContextError(ContextError::Kind::LevelMismatch, "ell divides level: " + std::to_string(ell));
  if (r_prime == 1) return chain;
  const auto m = static_cast<std::int64_t>(r_prime);
  const auto t = static_cast<std::uint64_t>(inverse ? inverse_mod(ell % r_prime, m) : static_cast<std::int64_t>(ell % r_prime));
  return act_on_chain(t, r_prime, chain);
}

DResult D_ell_from_lift(const Workspace& ws, std::uint64_t r, std::uint32_t ell, const SparseIntVector& lift,
                        DVariant variant) {
  const std::uint32_t M = ws.M();
  const LevelData& data = ws.level(r);
  (void)data.level.prime_position(ell);
  const LevelData& lower = ws.level(r / ell);
  const std::uint64_t rl = r / ell;
  DResult out;

  const SparseIntVector t = act_on_chain(data.level.sigma_unit(ell), r, lift) - lift;
  const auto comb = express_relations(data, t, M, variant);
  if (!comb) return out;
  out.solvable = true;
  const auto b = divide_after(t, data.u.module.relations(), *comb, M);
  if (!b) throw InternalContradiction("D_ell: (sigma - 1)a - sum gamma_p b_p not divisible by M");

  std::vector<std::pair<std::size_t, Integer>> b_ell;
  for (const auto& e : *comb)
    if (data.keys[e.index].ell == ell) b_ell.emplace_back(data.keys[e.index].j / ell, Integer(e.value));
  out.y = frobenius_chain(rl, ell, SparseIntVector::from_pairs(std::move(b_ell)), /*inverse=*/true);
  out.cls = class_of(lower, out.y, M);
  out.lands_in_h0 = is_invariant(lower, out.cls, M);

  // (ℓ - Frob_ℓ)y / M at level r/ℓ, then compare with b modulo R_r + I_ℓ.
  const SparseIntVector w = Integer(ell) * out.y - frobenius_chain(rl, ell, out.y, false);
  const auto comb_low = express_relations(lower, w, M, DVariant::Standard);
  if (comb_low) {
    const auto b_low = divide_after(w, lower.u.module.relations(), *comb_low, M);
    if (!b_low) throw InternalContradiction("D_ell: (ell - Frob)y not divisible by M after relations");
    out.congruence = data.with_I.at(ell).contains(*b - scale_indices(*b_low, ell));
  }
  return out;
}

DResult D_ell(const Workspace& ws, std::uint64_t r, std::uint32_t ell, const ModVector& cls, DVariant variant) {
  const LevelData& data = ws.level(r);
  SparseIntVector a = representative(data, cls);
  if (variant == DVariant::ShiftedLift) {
    a = a + SparseIntVector::unit(1 % r, ws.M());
    if (data.u.module.relations().rows() > 0) a = a + Integer(-2) * data.u.module.relations().row(0);
  }
  return D_ell_from_lift(ws, r, ell, a, variant);
}

std::vector<RecursionStep> recursion_check_universal(const Workspace& ws, std::uint64_t r, const Perturbation* perturb) {
  const std::uint32_t M = ws.M();
  const LevelData& data = ws.level(r);
  const Level& level = data.level;
  std::vector<RecursionStep> out;
  const SparseIntVector top = kolyvagin_chain(level, perturb);
  const SparseIntVector x_r = SparseIntVector::unit(euler_index(level));
  for (auto ell : level.primes()) {
    RecursionStep step;
    step.ell = ell;
    const std::uint64_t rl = r / ell;
    const LevelData& lower = ws.level(rl);
    const SparseIntVector x_low = SparseIntVector::unit(euler_index(lower.level) * ell);

    const SparseIntVector lhs = act_on_chain(level.sigma_unit(ell), r, top) - top;
    const GroupRingElement nprime_low = partial_derivative(level, ell, perturb);
    const SparseIntVector t1 = Integer((ell - 1) / M) * nprime_low.apply(x_r - x_low);
    const SparseIntVector z = kolyvagin_chain(lower.level, perturb);
    const SparseIntVector t2 = scale_indices(Integer(ell) * z - frobenius_chain(rl, ell, z, false), ell);

    SparseIntVector c_lhs = exact_coordinates(data, lhs);
    SparseIntVector c_t2 = exact_coordinates(data, t2);
    bool divisible = true;
    for (auto* v : {&c_lhs, &c_t2})
      for (auto& e : v->mutable_entries()) {
        if (!mpz_divisible_ui_p(e.value.get_mpz_t(), M)) divisible = false;
        e.value /= M;
      }
    if (!divisible) step.note = "a term is not divisible by M in U_r";
    step.identity = divisible && (c_lhs == exact_coordinates(data, t1) + c_t2);

    const ModVector c_top = class_of(data, top, M);
    const ModVector c_low = class_of(lower, z, M);
    step.invariant = is_invariant(data, c_top, M) && is_invariant(lower, c_low, M);
    if (step.invariant) {
      const DResult d = D_ell_from_lift(ws, r, ell, top);
      step.recursion = d.ok() && d.cls == c_low;
      if (!d.ok()) step.note = "D_ell post-verification failed";
    } else if (step.note.empty()) {
      step.note = "class not invariant";
    }
    out.push_back(std::move(step));
  }
  return out;
}

std::optional<ModVector> express_in(const std::vector<ModVector>& classes, std::size_t width, const ModVector& x,
                                    std::uint32_t modulus) {
  const ModEchelon e(modulus, width, classes, /*track=*/true);
  return e.express(x);
}

}  // namespace udist
