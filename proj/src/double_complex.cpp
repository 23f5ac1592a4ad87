#include "udist/double_complex.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace udist {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

std::int64_t signed_mod(std::int64_t v, std::uint32_t m) {
  const std::int64_t r = v % static_cast<std::int64_t>(m);
  return r < 0 ? r + m : r;
}

ModVector to_mod(const KChain& c, std::uint32_t modulus, std::size_t shift) {
  ModVector out;
  for (const auto& t : c) {
    const auto v = signed_mod(t.value, modulus);
    if (v != 0) out.push_back({static_cast<std::uint32_t>(t.index - shift), static_cast<Residue>(v)});
  }
  return out;
}

KChain from_mod(const ModVector& v, std::size_t shift) {
  KChain out;
  for (const auto& e : v) out.push_back({static_cast<std::uint32_t>(e.index + shift), e.value});
  return out;
}

KChain unit_chain(std::size_t i) { return {{static_cast<std::uint32_t>(i), 1}}; }

/// Smallest index in [0, n) for which ok(i) is false, or npos.
std::size_t first_failure(std::size_t n, const std::function<bool(std::size_t)>& ok) {
  std::size_t first = KWindow::npos;
#pragma omp parallel for schedule(dynamic, 256) reduction(min : first)
  for (long i = 0; i < static_cast<long>(n); ++i)
    if (static_cast<std::size_t>(i) < first && !ok(static_cast<std::size_t>(i))) first = static_cast<std::size_t>(i);
  return first;
}

std::string describe(const KWindow& w, std::size_t i, const std::string& what) {
  return what + " on " + to_string(w.symbol(i), w.level());
}

Integer order_of(const std::vector<std::uint32_t>& factors) {
  Integer n = 1;
  for (auto f : factors) n *= f;
  return n;
}

}  // namespace

void normalize(KChain& c) {
  std::sort(c.begin(), c.end(), [](const KTerm& a, const KTerm& b) { return a.index < b.index; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < c.size();) {
    const std::uint32_t idx = c[i].index;
    std::int64_t v = 0;
    for (; i < c.size() && c[i].index == idx; ++i) v += c[i].value;
    if (v != 0) c[out++] = {idx, v};
  }
  c.resize(out);
}

KChain reduce_mod(KChain c, std::uint32_t modulus) {
  normalize(c);
  std::size_t out = 0;
  for (const auto& t : c) {
    const auto v = signed_mod(t.value, modulus);
    if (v != 0) c[out++] = {t.index, v};
  }
  c.resize(out);
  return c;
}

KChain operator+(const KChain& a, const KChain& b) {
  KChain out = a;
  out.insert(out.end(), b.begin(), b.end());
  normalize(out);
  return out;
}

KChain operator-(const KChain& a, const KChain& b) {
  KChain out = a;
  for (const auto& t : b) out.push_back({t.index, -t.value});
  normalize(out);
  return out;
}

std::string to_string(const KSymbol& s, const Level& level) {
  std::uint64_t h = 1;
  for (std::size_t k = 0; k < s.h.size(); ++k)
    for (std::uint32_t e = 0; e < s.h[k]; ++e) h *= level.primes()[k];
  return "[" + s.a.str() + "," + std::to_string(s.g) + "," + std::to_string(h) + "]";
}

KWindow::KWindow(const Level& level, std::size_t bound) : level_(level), bound_(bound) {
  const std::size_t w = level.omega();
  if (w > kMaxPrimes) throw ContextError(ContextError::Kind::Admissibility, "too many primes for a K window");
  if (bound < w + 1) throw ContextError(ContextError::Kind::Admissibility, "window too small");
  std::size_t codes = std::size_t{1} << w;
  for (std::size_t k = 0; k < w; ++k) codes *= bound + 1;
  if (codes > (std::size_t{1} << 24)) throw ContextError(ContextError::Kind::Admissibility, "K window too large");
  block_by_code_.assign(codes, -1);

  std::vector<Exponents> monomials;
  Exponents e{};
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t k, std::size_t left) {
    if (k == w) {
      monomials.push_back(e);
      return;
    }
    for (std::size_t x = 0; x <= left; ++x) {
      e[k] = static_cast<std::uint8_t>(x);
      walk(k + 1, left - x);
    }
    e[k] = 0;
  };
  walk(0, bound);

  for (std::uint32_t mask = 0; mask < (1u << w); ++mask) {
    std::uint64_t g = 1;
    int om = 0;
    for (std::size_t k = 0; k < w; ++k)
      if (mask & (1u << k)) {
        g *= level.primes()[k];
        ++om;
      }
    for (const auto& h : monomials) {
      int big = 0;
      for (std::size_t k = 0; k < w; ++k) big += h[k];
      blocks_.push_back({mask, h, g, om, big, 0, level.r() / g});
    }
  }
  std::sort(blocks_.begin(), blocks_.end(), [&](const Block& a, const Block& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.gmask != b.gmask) return a.gmask < b.gmask;
    return block_code(a.gmask, a.h) < block_code(b.gmask, b.h);
  });
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    blocks_[b].offset = size_;
    size_ += blocks_[b].size;
    block_by_code_[block_code(blocks_[b].gmask, blocks_[b].h)] = static_cast<long>(b);
  }
  if (size_ > 0xffffffffu) throw ContextError(ContextError::Kind::Admissibility, "K window too large");
  for (auto p : level.primes()) sigma_units_.push_back(level.sigma_unit(p));
}

std::size_t KWindow::block_code(std::uint32_t gmask, const Exponents& h) const {
  std::size_t code = gmask;
  for (std::size_t k = 0; k < level_.omega(); ++k) code = code * (bound_ + 1) + h[k];
  return code;
}

const KWindow::Block& KWindow::block_of(std::size_t i) const {
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), i,
                             [](std::size_t x, const Block& b) { return x < b.offset; });
  return *(it - 1);
}

std::pair<std::size_t, std::size_t> KWindow::degree_range(int k) const {
  std::size_t first = size_, last = size_;
  for (const auto& b : blocks_) {
    if (b.degree() == k && first == size_) first = b.offset;
    if (b.degree() > k) {
      last = b.offset;
      break;
    }
  }
  if (first == size_) first = last;
  return {first, last};
}

KSymbol KWindow::symbol(std::size_t i) const {
  const Block& b = block_of(i);
  KSymbol s;
  s.a = Fraction::at_level((i - b.offset) * b.g, level_.r());
  s.g = b.g;
  s.h.assign(b.h.begin(), b.h.begin() + static_cast<long>(level_.omega()));
  return s;
}

std::size_t KWindow::index(const KSymbol& s) const {
  const std::uint64_t r = level_.r();
  const std::string name = "[" + s.a.str() + "," + std::to_string(s.g) + ",h]";
  if (s.g == 0 || r % s.g != 0 || !s.a.in_level(s.g, r) || s.h.size() != level_.omega())
    throw ContextError(ContextError::Kind::LevelMismatch, "symbol " + name + " not in K(" + std::to_string(r) + ")");
  std::uint32_t mask = 0;
  Exponents h{};
  for (std::size_t k = 0; k < level_.omega(); ++k) {
    if (s.g % level_.primes()[k] == 0) mask |= 1u << k;
    if (s.h[k] > bound_) throw ContextError(ContextError::Kind::LevelMismatch, "symbol " + name + " outside window");
    h[k] = static_cast<std::uint8_t>(s.h[k]);
  }
  const std::size_t i = locate(mask, h, s.a.index(r) / s.g);
  if (i == npos) throw ContextError(ContextError::Kind::LevelMismatch, "symbol " + name + " outside window");
  return i;
}

std::size_t KWindow::locate(std::uint32_t gmask, const Exponents& h, std::uint64_t j) const {
  std::size_t total = 0;
  for (std::size_t k = 0; k < level_.omega(); ++k) total += h[k];
  if (total > bound_) return npos;
  const long b = block_by_code_[block_code(gmask, h)];
  if (b < 0) return npos;
  return blocks_[static_cast<std::size_t>(b)].offset + j;
}

int KWindow::prefix_parity(const Block& b, std::size_t pos) const {
  int s = 0;
  for (std::size_t k = 0; k < pos; ++k) s += static_cast<int>((b.gmask >> k) & 1u) + b.h[k];
  return s & 1;
}

int KWindow::sign(KOp op, std::size_t pos, std::size_t i) const {
  const Block& b = block_of(i);
  switch (op) {
    case KOp::d:
      return prefix_parity(b, pos) ? -1 : 1;
    case KOp::delta:
      return (prefix_parity(b, pos) + ((b.gmask >> pos) & 1u)) & 1 ? -1 : 1;
    default:
      return 1;
  }
}

bool KWindow::body(KOp op, std::size_t pos, std::size_t i, KChain& out, std::int64_t f) const {
  const Block& b = block_of(i);
  const std::uint64_t j = i - b.offset;
  const std::uint32_t ell = level_.primes()[pos];
  const std::uint32_t bit = 1u << pos;
  const std::uint64_t n = b.size;
  const std::uint64_t t = sigma_units_[pos] % n;
  auto push = [&](std::size_t idx, std::int64_t v) { out.push_back({static_cast<std::uint32_t>(idx), v}); };
  switch (op) {
    case KOp::d: {
      if (!(b.gmask & bit)) return true;
      const std::size_t base = locate(b.gmask ^ bit, b.h, 0);
      push(base + j * ell, f);
      for (std::uint64_t s = 0; s < ell; ++s) push(base + j + s * n, -f);
      return true;
    }
    case KOp::delta: {
      Exponents h = b.h;
      ++h[pos];
      const std::size_t base = locate(b.gmask, h, 0);
      if (base == npos) return false;
      if (b.h[pos] % 2 == 0) {
        push(base + j, f);
        push(base + mulmod(j, t, n), -f);
      } else {
        std::uint64_t x = j;
        for (std::uint32_t s = 0; s + 1 < ell; ++s) {
          push(base + x, f);
          x = mulmod(x, t, n);
        }
      }
      return true;
    }
    case KOp::shift: {
      if (!(b.gmask & bit) || b.h[pos] == 0) return true;
      Exponents h = b.h;
      --h[pos];
      push(locate(b.gmask ^ bit, h, 0) + j * ell, f);
      return true;
    }
    case KOp::sigma:
      push(b.offset + mulmod(j, t, n), f);
      return true;
  }
  return true;
}

bool KWindow::image(KOp op, std::size_t pos, std::size_t i, KChain& out, std::int64_t factor) const {
  return body(op, pos, i, out, factor * sign(op, pos, i));
}

bool KWindow::apply(KOp op, std::size_t pos, const KChain& chain, KChain& out) const {
  out.clear();
  for (const auto& t : chain)
    if (!image(op, pos, t.index, out, t.value)) return false;
  normalize(out);
  return true;
}

bool KWindow::apply_d(const KChain& chain, KChain& out) const {
  out.clear();
  for (std::size_t p = 0; p < level_.omega(); ++p)
    for (const auto& t : chain) image(KOp::d, p, t.index, out, t.value);
  normalize(out);
  return true;
}

bool KWindow::apply_delta(const KChain& chain, KChain& out) const {
  out.clear();
  for (std::size_t p = 0; p < level_.omega(); ++p)
    for (const auto& t : chain)
      if (!image(KOp::delta, p, t.index, out, t.value)) return false;
  normalize(out);
  return true;
}

bool KWindow::apply_total(const KChain& chain, KChain& out) const {
  KChain a, b;
  if (!apply_delta(chain, b)) return false;
  apply_d(chain, a);
  out = a + b;
  return true;
}

int KWindow::epsilon_sign(std::size_t i) const {
  const Block& b = block_of(i);
  int s = 0, below = 0;
  for (std::size_t k = 0; k < level_.omega(); ++k) {
    if (b.gmask & (1u << k)) s += below;
    below += b.h[k];
  }
  return s & 1 ? -1 : 1;
}

KChain KWindow::epsilon(const KChain& chain) const {
  KChain out = chain;
  for (auto& t : out) t.value *= epsilon_sign(t.index);
  return out;
}

bool KWindow::in_S(std::size_t i) const {
  const Block& b = block_of(i);
  if (i != b.offset) return true;
  for (std::size_t k = 0; k < level_.omega(); ++k)
    if ((b.gmask & (1u << k)) && b.h[k] == 0) return true;
  return false;
}

SparseIntVector KWindow::component(const KChain& chain, std::uint32_t gmask, const Exponents& h) const {
  const std::size_t base = locate(gmask, h, 0);
  std::vector<std::pair<std::size_t, Integer>> out;
  if (base == npos) return {};
  const std::size_t n = blocks_[static_cast<std::size_t>(block_by_code_[block_code(gmask, h)])].size;
  for (const auto& t : chain)
    if (t.index >= base && t.index < base + n) out.emplace_back(t.index - base, Integer(static_cast<long>(t.value)));
  return SparseIntVector::from_pairs(std::move(out));
}

SparseIntVector KWindow::bottom_part(const KChain& chain) const { return component(chain, 0, Exponents{}); }

KChain delta_shift(const KWindow& w, std::size_t pos, const KChain& chain) {
  KChain out;
  w.apply(KOp::shift, pos, chain, out);
  return out;
}

KIdentityReport differential_identity_check(const KWindow& w) {
  KIdentityReport rep;
  const std::size_t n = w.level().omega();
  struct Op {
    KOp op;
    std::size_t pos;
  };
  std::vector<Op> ops;
  for (std::size_t p = 0; p < n; ++p) ops.push_back({KOp::d, p});
  for (std::size_t p = 0; p < n; ++p) ops.push_back({KOp::delta, p});

  // XY + YX on e_i; true when zero or not evaluable inside the window.
  auto anti = [&](const Op& x, const Op& y, std::size_t i) {
    KChain a, b, c, e = unit_chain(i);
    if (!w.apply(y.op, y.pos, e, a) || !w.apply(x.op, x.pos, a, b)) return true;
    if (!w.apply(x.op, x.pos, e, a) || !w.apply(y.op, y.pos, a, c)) return true;
    return (b + c).empty();
  };
  std::size_t count = 0;
  std::size_t bad = first_failure(w.size(), [&](std::size_t i) {
    for (std::size_t u = 0; u < ops.size(); ++u)
      for (std::size_t v = u + 1; v < ops.size(); ++v)
        if (!anti(ops[u], ops[v], i)) return false;
    return true;
  });
  rep.anticommute = bad == KWindow::npos;
  if (!rep.anticommute) rep.counterexample = describe(w, bad, "anticommutation");
  count += w.size() * ops.size() * (ops.size() - 1) / 2;

  bad = first_failure(w.size(), [&](std::size_t i) {
    KChain a, b;
    for (const auto& x : ops)
      if (w.apply(x.op, x.pos, unit_chain(i), a) && w.apply(x.op, x.pos, a, b) && !b.empty()) return false;
    return true;
  });
  rep.squares_zero = bad == KWindow::npos;
  if (!rep.squares_zero && rep.counterexample.empty()) rep.counterexample = describe(w, bad, "square");
  count += w.size() * ops.size();

  bad = first_failure(w.size(), [&](std::size_t i) {
    KChain a, b, c;
    const KChain e = unit_chain(i);
    w.apply_d(e, a);
    w.apply_d(a, b);
    if (!b.empty()) return false;
    if (w.apply_delta(e, a) && w.apply_delta(a, b) && !b.empty()) return false;
    if (w.apply_delta(e, a)) {
      w.apply_d(a, b);
      KChain dd;
      w.apply_d(e, dd);
      if (w.apply_delta(dd, c) && !(b + c).empty()) return false;
    }
    return true;
  });
  rep.totals_zero = bad == KWindow::npos;
  if (!rep.totals_zero && rep.counterexample.empty()) rep.counterexample = describe(w, bad, "total differential");
  count += w.size() * 3;

  bad = first_failure(w.size(), [&](std::size_t i) {
    KChain a, b, c;
    for (std::size_t s = 0; s < n; ++s)
      for (const auto& x : ops) {
        if (!w.apply(x.op, x.pos, unit_chain(i), a)) continue;
        w.apply(KOp::sigma, s, a, b);
        w.apply(KOp::sigma, s, unit_chain(i), a);
        w.apply(x.op, x.pos, a, c);
        if (b != c) return false;
      }
    return true;
  });
  rep.equivariant = bad == KWindow::npos;
  if (!rep.equivariant && rep.counterexample.empty()) rep.counterexample = describe(w, bad, "equivariance");
  count += w.size() * n * ops.size();
  rep.evaluations = count;
  return rep;
}

EpsilonReport epsilon_check(const KWindow& w) {
  EpsilonReport rep;
  const std::size_t n = w.level().omega();
  std::size_t bad = first_failure(w.size(), [&](std::size_t i) {
    const KChain e = unit_chain(i);
    return w.epsilon(w.epsilon(e)) == e;
  });
  rep.involution = bad == KWindow::npos;
  if (!rep.involution) rep.counterexample = describe(w, bad, "involution");

  // The conjugated operators against the displayed formulas, whose bodies agree
  // with d_ℓ and δ_ℓ and whose signs are computed here independently.
  auto conjugation = [&](KOp op) {
    return first_failure(w.size(), [&](std::size_t i) {
      const KWindow::Block& b = w.block_of(i);
      int gsum_below = 0, gsum = 0, hsum_below = 0;
      for (std::size_t k = 0; k < n; ++k) gsum += (b.gmask >> k) & 1u;
      for (std::size_t p = 0; p < n; ++p) {
        KChain conj, expected;
        if (!w.apply(op, p, w.epsilon(unit_chain(i)), conj)) {
          gsum_below += (b.gmask >> p) & 1u;
          hsum_below += b.h[p];
          continue;
        }
        conj = w.epsilon(conj);
        const int parity = op == KOp::d ? gsum_below : gsum + hsum_below;
        w.body(op, p, i, expected, parity & 1 ? -1 : 1);
        normalize(expected);
        if (conj != expected) return false;
        gsum_below += (b.gmask >> p) & 1u;
        hsum_below += b.h[p];
      }
      return true;
    });
  };
  bad = conjugation(KOp::d);
  rep.d_conjugation = bad == KWindow::npos;
  if (!rep.d_conjugation && rep.counterexample.empty()) rep.counterexample = describe(w, bad, "conjugated d");
  bad = conjugation(KOp::delta);
  rep.delta_conjugation = bad == KWindow::npos;
  if (!rep.delta_conjugation && rep.counterexample.empty()) rep.counterexample = describe(w, bad, "conjugated delta");
  return rep;
}

SStabilityReport s_stability_check(const KWindow& w, std::uint32_t modulus) {
  SStabilityReport rep;
  const std::size_t n = w.level().omega();
  auto supported_in_S = [&](const KChain& c) {
    for (const auto& t : reduce_mod(c, modulus))
      if (!w.in_S(t.index)) return false;
    return true;
  };
  auto record = [&](bool& flag, std::size_t bad, const char* what) {
    flag = bad == KWindow::npos;
    if (!flag && rep.counterexample.empty()) rep.counterexample = describe(w, bad, what);
  };
  record(rep.boundaries_in_S, first_failure(w.size(), [&](std::size_t i) {
           KChain a;
           w.apply_d(unit_chain(i), a);
           if (!supported_in_S(a)) return false;
           return !w.apply_delta(unit_chain(i), a) || supported_in_S(a);
         }),
         "dK + deltaK in S + MK");
  auto stable = [&](KOp op) {
    return first_failure(w.size(), [&](std::size_t i) {
      if (!w.in_S(i)) return true;
      KChain a;
      for (std::size_t p = 0; p < n; ++p)
        if (w.apply(op, p, unit_chain(i), a) && !supported_in_S(a)) return false;
      return true;
    });
  };
  record(rep.d_stable, stable(KOp::d), "S stable under d");
  record(rep.delta_stable, stable(KOp::delta), "S stable under delta");
  record(rep.sigma_stable, stable(KOp::sigma), "S stable under sigma");
  record(rep.epsilon_stable, first_failure(w.size(), [&](std::size_t i) {
           return !w.in_S(i) || supported_in_S(w.epsilon(unit_chain(i)));
         }),
         "S stable under epsilon");
  return rep;
}

ShiftIdentityReport shift_identity_check(const KWindow& w, std::uint32_t modulus) {
  ShiftIdentityReport rep;
  const std::size_t n = w.level().omega();
  auto record = [&](bool& flag, std::size_t bad, const char* what) {
    flag = bad == KWindow::npos;
    if (!flag && rep.counterexample.empty()) rep.counterexample = describe(w, bad, what);
  };
  // Δ_ℓ X = X Δ_ℓ for X = d_p or δ_p, p ≠ ℓ.
  auto commutes = [&](KOp op) {
    return first_failure(w.size(), [&](std::size_t i) {
      KChain a, b, c;
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t p = 0; p < n; ++p) {
          if (p == l) continue;
          if (!w.apply(op, p, unit_chain(i), a)) continue;
          w.apply(KOp::shift, l, a, b);
          w.apply(KOp::shift, l, unit_chain(i), a);
          if (!w.apply(op, p, a, c) || b != c) return false;
        }
      return true;
    });
  };
  record(rep.commutes_d, commutes(KOp::d), "shift commutes with d_p");
  record(rep.commutes_delta, commutes(KOp::delta), "shift commutes with delta_p");
  record(rep.kills_d, first_failure(w.size(), [&](std::size_t i) {
           KChain a, b;
           for (std::size_t l = 0; l < n; ++l) {
             w.apply(KOp::d, l, unit_chain(i), a);
             w.apply(KOp::shift, l, a, b);
             if (!b.empty()) return false;
             w.apply(KOp::shift, l, unit_chain(i), a);
             w.apply(KOp::d, l, a, b);
             if (!b.empty()) return false;
           }
           return true;
         }),
         "shift kills d_ell");
  record(rep.delta_commutator, first_failure(w.size(), [&](std::size_t i) {
           KChain a, b, c;
           for (std::size_t l = 0; l < n; ++l) {
             if (!w.apply(KOp::delta, l, unit_chain(i), a)) continue;
             w.apply(KOp::shift, l, a, b);
             w.apply(KOp::shift, l, unit_chain(i), a);
             w.apply(KOp::delta, l, a, c);
             if (!reduce_mod(c - b, modulus).empty()) return false;
           }
           return true;
         }),
         "delta-shift commutator in MK");

  // Δ_ℓ[a,g,h] = [a,g/ℓ,h/ℓ] lies in K(r/ℓ) only when ℓ no longer divides h/ℓ.
  std::size_t failures = 0, first = KWindow::npos;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const KWindow::Block& b = w.block_of(i);
    for (std::size_t l = 0; l < n; ++l)
      if ((b.gmask & (1u << l)) && b.h[l] >= 2) {
        ++failures;
        if (first == KWindow::npos) first = i;
      }
  }
  rep.containment_failures = failures;
  rep.containment = failures == 0;
  if (!rep.containment && rep.counterexample.empty()) {
    const KSymbol s = w.symbol(first);
    std::size_t l = 0;
    while (!(s.g % w.level().primes()[l] == 0 && s.h[l] >= 2)) ++l;
    KChain img;
    w.apply(KOp::shift, l, unit_chain(first), img);
    const std::uint32_t ell = w.level().primes()[l];
    rep.counterexample = "shift_" + std::to_string(ell) + to_string(s, w.level()) + " = " +
                         to_string(w.symbol(img.front().index), w.level()) + " not in K(" +
                         std::to_string(w.level().r() / ell) + ")";
  }
  return rep;
}

std::size_t CanonicalBasis::position(std::uint64_t g) const {
  for (std::size_t k = 0; k < divisors.size(); ++k)
    if (divisors[k] == g) return k;
  throw ContextError(ContextError::Kind::NotDivisor, std::to_string(g) + " is not a divisor of the level");
}

std::vector<std::uint64_t> divisors_by_omega(const Level& level) {
  auto ds = level.divisors();
  auto omega = [&](std::uint64_t g) {
    int k = 0;
    for (auto p : level.primes()) k += g % p == 0;
    return k;
  };
  std::stable_sort(ds.begin(), ds.end(), [&](std::uint64_t a, std::uint64_t b) { return omega(a) < omega(b); });
  return ds;
}

namespace {

/// Rows of (d+δ) mod M from degree 0 into degree 1, indexed from the start of each range.
std::vector<ModVector> cocycle_rows(const KWindow& w, std::uint32_t modulus) {
  const auto [f0, l0] = w.degree_range(0);
  const auto [f1, l1] = w.degree_range(1);
  std::vector<ModVector> rows(l0 - f0);
  bool inside = true;
#pragma omp parallel for schedule(dynamic, 64) reduction(&& : inside)
  for (long i = 0; i < static_cast<long>(l0 - f0); ++i) {
    KChain img;
    inside = inside && w.apply_total(unit_chain(f0 + static_cast<std::size_t>(i)), img);
    for (const auto& t : img) inside = inside && t.index >= f1 && t.index < l1;
    rows[static_cast<std::size_t>(i)] = to_mod(img, modulus, f1);
  }
  if (!inside) throw InternalContradiction("coboundary of a 0-cochain leaves the window");
  return rows;
}

std::uint32_t full_mask(const Level& level, std::uint64_t g, KWindow::Exponents& h) {
  std::uint32_t mask = 0;
  h = {};
  for (std::size_t k = 0; k < level.omega(); ++k)
    if (g % level.primes()[k] == 0) {
      mask |= 1u << k;
      h[k] = 1;
    }
  return mask;
}

}  // namespace

CanonicalBasis compute_canonical_basis(const KWindow& w, const LevelData& data, std::uint32_t modulus) {
  CanonicalBasis out;
  out.divisors = divisors_by_omega(w.level());
  const auto [f0, l0] = w.degree_range(0);
  const auto [f1, l1] = w.degree_range(1);
  const std::vector<ModVector> rows = cocycle_rows(w, modulus);

  std::vector<std::size_t> unknowns;
  std::vector<ModVector> s_rows;
  for (std::size_t i = f0; i < l0; ++i)
    if (w.in_S(i)) {
      unknowns.push_back(i);
      s_rows.push_back(rows[i - f0]);
    }
  const ModEchelon solver(modulus, l1 - f1, std::move(s_rows), /*track=*/true);

  out.solvable = true;
  out.cocycles_ok = true;
  out.in_h0 = true;
  for (auto g : out.divisors) {
    KWindow::Exponents h;
    const std::uint32_t mask = full_mask(w.level(), g, h);
    const std::size_t top = w.locate(mask, h, 0);
    ModVector target = rows[top - f0];
    mod_scale(target, modulus - 1, modulus);
    const auto comb = solver.express(target);
    if (!comb) {
      out.solvable = false;
      out.cocycles.emplace_back();
      out.classes.emplace_back();
      continue;
    }
    KChain z = unit_chain(top);
    for (const auto& e : *comb) z.push_back({static_cast<std::uint32_t>(unknowns[e.index]), e.value});
    z = reduce_mod(std::move(z), modulus);
    KChain img;
    w.apply_total(z, img);
    if (!reduce_mod(img, modulus).empty()) out.cocycles_ok = false;
    ModVector cls = class_of(data, w.bottom_part(z), modulus);
    if (!is_invariant(data, cls, modulus)) out.in_h0 = false;
    out.cocycles.push_back(std::move(z));
    out.classes.push_back(std::move(cls));
  }

  // Two solutions differ by an S-supported cocycle; all of those must map to 0.
  const auto& kernel = solver.kernel();
  bool unique = true;
#pragma omp parallel for schedule(dynamic, 16) reduction(&& : unique)
  for (long k = 0; k < static_cast<long>(kernel.size()); ++k) {
    KChain z;
    for (const auto& e : kernel[static_cast<std::size_t>(k)])
      z.push_back({static_cast<std::uint32_t>(unknowns[e.index]), e.value});
    unique = unique && class_of(data, w.bottom_part(z), modulus).empty();
  }
  out.unique = unique;

  const ModEchelon span(modulus, data.phi, out.classes);
  bool independent = span.pivot_count() == out.divisors.size();
  for (auto f : span.span_order_factors()) independent = independent && f == modulus;
  const auto dim = data.h0.dimension(modulus);
  out.is_basis = out.solvable && independent && dim && *dim == out.divisors.size();
  return out;
}

const KWindow& KWorkspace::window(std::uint64_t r) const {
  return windows_.get(r, [&] {
    const Level& level = ws_.level(r).level;
    return KWindow(level, level.omega() + 1);
  });
}

const CanonicalBasis& KWorkspace::canonical(std::uint64_t r) const {
  return bases_.get(r, [&] { return compute_canonical_basis(window(r), ws_.level(r), ws_.M()); });
}

std::optional<ModVector> canonical_coordinates(const KWorkspace& kws, std::uint64_t r, const ModVector& cls) {
  const CanonicalBasis& basis = kws.canonical(r);
  return express_in(basis.classes, kws.base().level(r).phi, cls, kws.base().M());
}

H0KReport h0_of_K_check(const KWorkspace& kws, std::uint64_t r) {
  H0KReport rep;
  const std::uint32_t M = kws.base().M();
  const LevelData& data = kws.base().level(r);
  const KWindow& w = kws.window(r);
  const auto [f0, l0] = w.degree_range(0);
  const auto [fm, lm] = w.degree_range(-1);
  const std::size_t n0 = l0 - f0;

  const ModEchelon rows(M, w.degree_range(1).second - w.degree_range(1).first, cocycle_rows(w, M), /*track=*/true);
  Integer all = 1;
  for (std::size_t i = 0; i < n0; ++i) all *= M;
  rep.cocycle_order = all / order_of(rows.span_order_factors());

  std::vector<ModVector> boundaries(lm - fm);
  bool closed = true, dies = true;
#pragma omp parallel for schedule(dynamic, 16) reduction(&& : closed, dies)
  for (long i = 0; i < static_cast<long>(lm - fm); ++i) {
    KChain b, bb;
    w.apply_total(unit_chain(fm + static_cast<std::size_t>(i)), b);
    b = reduce_mod(std::move(b), M);
    w.apply_total(b, bb);
    closed = closed && reduce_mod(bb, M).empty();
    dies = dies && class_of(data, w.bottom_part(b), M).empty();
    boundaries[static_cast<std::size_t>(i)] = to_mod(b, M, f0);
  }
  rep.boundaries_closed = closed;
  rep.well_defined = dies;
  rep.coboundary_order = order_of(ModEchelon(M, n0, std::move(boundaries)).span_order_factors());

  const auto& cocycles = rows.kernel();
  std::vector<ModVector> images(cocycles.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long k = 0; k < static_cast<long>(cocycles.size()); ++k)
    images[static_cast<std::size_t>(k)] =
        class_of(data, w.bottom_part(from_mod(cocycles[static_cast<std::size_t>(k)], f0)), M);
  const ModEchelon h0(M, data.phi, data.h0.basis);
  rep.lands_in_h0 = std::all_of(images.begin(), images.end(), [&](const ModVector& v) { return h0.contains(v); });
  rep.image_order = order_of(ModEchelon(M, data.phi, std::move(images)).span_order_factors());
  rep.h0_order = order_of(data.h0.order_factors);
  rep.bijective = rep.lands_in_h0 && rep.image_order == rep.h0_order &&
                  rep.cocycle_order == rep.coboundary_order * rep.image_order;
  return rep;
}

CanonicalRecursionReport canonical_recursion_check(const KWorkspace& kws, std::uint64_t r) {
  CanonicalRecursionReport rep;
  rep.pass_all = true;
  const Workspace& ws = kws.base();
  const CanonicalBasis& top = kws.canonical(r);
  for (auto ell : ws.level(r).level.primes()) {
    const CanonicalBasis& low = kws.canonical(r / ell);
    for (std::size_t k = 0; k < top.divisors.size(); ++k) {
      const std::uint64_t g = top.divisors[k];
      const DResult d = D_ell(ws, r, ell, top.classes[k]);
      const ModVector expected = g % ell == 0 ? low.classes[low.position(g / ell)] : ModVector{};
      if (!d.ok() || d.cls != expected) {
        rep.pass_all = false;
        if (rep.counterexample.empty())
          rep.counterexample = "D_" + std::to_string(ell) + " on cbar_" + std::to_string(g) + " at level " +
                               std::to_string(r) + (d.ok() ? "" : " (D_ell unverified)");
      }
    }
  }
  return rep;
}

ShiftDReport shift_equals_D_check(const KWorkspace& kws, std::uint64_t r, std::uint32_t ell) {
  ShiftDReport rep;
  const Workspace& ws = kws.base();
  const std::uint32_t M = ws.M();
  const LevelData& data = ws.level(r);
  const std::size_t pos = data.level.prime_position(ell);
  const LevelData& lower = ws.level(r / ell);
  const KWindow& w = kws.window(r);
  const CanonicalBasis& basis = kws.canonical(r);

  std::vector<std::pair<std::string, ModVector>> classes;
  for (std::size_t k = 0; k < basis.divisors.size(); ++k)
    classes.emplace_back("cbar_" + std::to_string(basis.divisors[k]), basis.classes[k]);
  for (auto g : basis.divisors)
    classes.emplace_back("c_" + std::to_string(g),
                         embed_class(ws.level(g), data, universal_kolyvagin_class(ws, g).cls, M));

  rep.cocycle = true;
  rep.equal = true;
  for (const auto& [name, cls] : classes) {
    ++rep.classes_checked;
    const auto coords = canonical_coordinates(kws, r, cls);
    if (!coords) {
      rep.equal = false;
      if (rep.counterexample.empty()) rep.counterexample = name + " has no canonical coordinates";
      continue;
    }
    KChain z;
    for (const auto& e : *coords)
      for (const auto& t : basis.cocycles[e.index]) z.push_back({t.index, t.value * e.value});
    z = reduce_mod(std::move(z), M);
    const KChain shifted = delta_shift(w, pos, z);
    KChain img;
    w.apply_total(shifted, img);
    if (!reduce_mod(img, M).empty()) rep.cocycle = false;
    // The bidegree (0,0) part of Δ_ℓ z sits at indices jℓ of A(r), i.e. j of A(r/ℓ).
    const SparseIntVector bottom = w.bottom_part(shifted);
    bool aligned = true;
    const SparseIntVector y = bottom.remapped([&](std::size_t j) { return aligned = aligned && j % ell == 0; },
                                              [&](std::size_t j) { return j / ell; });
    if (!aligned) throw InternalContradiction("shifted cocycle has a bottom entry outside A(r/ell)");
    const ModVector via_shift = class_of(lower, y, M);
    const DResult d = D_ell(ws, r, ell, cls);
    if (!d.ok() || d.cls != via_shift) {
      rep.equal = false;
      if (rep.counterexample.empty()) rep.counterexample = "shift and D_" + std::to_string(ell) + " differ on " + name;
    }
  }
  return rep;
}

BasisCorollaryReport basis_corollary_check(const KWorkspace& kws, std::uint64_t r) {
  BasisCorollaryReport rep;
  const Workspace& ws = kws.base();
  const std::uint32_t M = ws.M();
  const LevelData& data = ws.level(r);
  const CanonicalBasis& basis = kws.canonical(r);
  rep.divisors = basis.divisors;
  const std::size_t n = rep.divisors.size();
  rep.matrix.assign(n, std::vector<Residue>(n, 0));
  rep.expressible = true;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t g = rep.divisors[i];
    const ModVector c = embed_class(ws.level(g), data, universal_kolyvagin_class(ws, g).cls, M);
    const auto coords = canonical_coordinates(kws, r, c);
    if (!coords) {
      rep.expressible = false;
      continue;
    }
    for (const auto& e : *coords) rep.matrix[i][e.index] = e.value;
  }
  rep.normalized = rep.expressible && embed_class(ws.level(1), data, universal_kolyvagin_class(ws, 1).cls, M) ==
                                          basis.classes[basis.position(1)];
  rep.unitriangular = rep.expressible;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Residue v = rep.matrix[i][k];
      if (i == k && v != 1) rep.unitriangular = false;
      if (i != k && v != 0 && rep.divisors[i] % rep.divisors[k] != 0) rep.unitriangular = false;
    }
  DenseIntMatrix dense(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) dense[i][k] = rep.matrix[i][k];
  rep.determinant = to_residue(determinant(dense), M);
  rep.unit_determinant = rep.expressible && gcd_u32(rep.determinant, M) == 1;
  return rep;
}

}  // namespace udist
