#include "udist/context.hpp"

#include <algorithm>
#include <numeric>

namespace udist {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t multiplicative_order(std::uint32_t x, std::uint32_t p) {
  x %= p;
  if (x == 0) return 0;
  std::uint64_t y = x;
  std::uint32_t k = 1;
  while (y != 1) {
    y = y * x % p;
    ++k;
  }
  return k;
}

std::uint32_t smallest_primitive_root(std::uint32_t p) {
  for (std::uint32_t g = 2; g < p; ++g)
    if (multiplicative_order(g, p) == p - 1) return g;
  return 1;  // p = 2
}

Context Context::build(std::uint32_t M, std::vector<std::uint32_t> primes,
                       const std::map<std::uint32_t, std::uint32_t>& roots) {
  using K = ContextError::Kind;
  if (M < 3 || M % 2 == 0) throw ContextError(K::Admissibility, "admissibility: M must be odd and at least 3");
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw ContextError(K::Admissibility, "admissibility: repeated prime");
  Context ctx;
  ctx.M_ = M;
  for (std::uint32_t ell : primes) {
    const std::string tag = "admissibility: " + std::to_string(ell);
    if (ell % 2 == 0) throw ContextError(K::Admissibility, tag + " is even");
    if (!is_prime(ell)) throw ContextError(K::Admissibility, tag + " is not prime");
    if (ell % M != 1) throw ContextError(K::Admissibility, tag + " is not 1 mod " + std::to_string(M));
  }
  for (const auto& [ell, s] : roots)
    if (!std::binary_search(primes.begin(), primes.end(), ell))
      throw ContextError(K::Admissibility, "admissibility: root given for " + std::to_string(ell) + " outside the pool");
  ctx.primes_ = primes;
  for (std::uint32_t ell : primes) {
    PrimeTable t;
    auto it = roots.find(ell);
    if (it != roots.end()) {
      if (multiplicative_order(it->second, ell) != ell - 1)
        throw ContextError(K::NotGenerator, "not a generator: " + std::to_string(it->second) + " mod " +
                                                std::to_string(ell));
      t.root = it->second % ell;
    } else {
      t.root = smallest_primitive_root(ell);
    }
    t.pow.resize(ell - 1);
    t.log.assign(ell, 0);
    std::uint64_t y = 1;
    for (std::uint32_t e = 0; e + 1 < ell; ++e) {
      t.pow[e] = static_cast<std::uint32_t>(y);
      t.log[y] = e;
      y = y * t.root % ell;
    }
    ctx.roots_[ell] = t.root;
    ctx.tables_[ell] = std::move(t);
  }
  return ctx;
}

const Context::PrimeTable& Context::table(std::uint32_t ell) const {
  auto it = tables_.find(ell);
  if (it == tables_.end())
    throw ContextError(ContextError::Kind::LevelMismatch, "prime " + std::to_string(ell) + " not in pool");
  return it->second;
}

std::uint32_t Context::power(std::uint32_t ell, std::uint64_t e) const {
  const auto& t = table(ell);
  return t.pow[e % (ell - 1)];
}

std::uint32_t Context::dlog(std::uint32_t ell, std::uint64_t x) const {
  const auto& t = table(ell);
  x %= ell;
  if (x == 0) throw ContextError(ContextError::Kind::LevelMismatch, "dlog of a multiple of ell");
  return t.log[x];
}

bool Context::in_pool(std::uint64_t p) const {
  return std::find(primes_.begin(), primes_.end(), p) != primes_.end();
}

std::uint64_t Context::full_level() const {
  std::uint64_t r = 1;
  for (auto p : primes_) r *= p;
  return r;
}

Level::Level(const Context& ctx, std::uint64_t r) : ctx_(&ctx), r_(r) {
  if (r == 0) throw ContextError(ContextError::Kind::LevelMismatch, "level must be positive");
  std::uint64_t rest = r;
  for (auto p : ctx.primes())
    if (rest % p == 0) {
      rest /= p;
      if (rest % p == 0) throw ContextError(ContextError::Kind::LevelMismatch, "level not squarefree");
      primes_.push_back(p);
    }
  if (rest != 1)
    throw ContextError(ContextError::Kind::LevelMismatch, "level " + std::to_string(r) + " has primes outside the pool");
}

Level::Level(const Context& ctx, std::vector<std::uint32_t> primes) : ctx_(&ctx) {
  std::sort(primes.begin(), primes.end());
  r_ = 1;
  for (auto p : primes) {
    if (!ctx.in_pool(p)) throw ContextError(ContextError::Kind::LevelMismatch, "prime outside the pool");
    r_ *= p;
  }
  primes_ = std::move(primes);
}

bool Level::divisible_by(std::uint32_t p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }

std::size_t Level::prime_position(std::uint32_t p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p)
    throw ContextError(ContextError::Kind::NotDivisor, std::to_string(p) + " does not divide " + std::to_string(r_));
  return static_cast<std::size_t>(it - primes_.begin());
}

Level Level::without(std::uint32_t ell) const {
  (void)prime_position(ell);
  std::vector<std::uint32_t> rest;
  for (auto p : primes_)
    if (p != ell) rest.push_back(p);
  return Level(*ctx_, rest);
}

std::vector<std::uint64_t> Level::divisors() const {
  std::vector<std::uint64_t> out{1};
  for (auto p : primes_) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Level::crt(const std::vector<std::uint64_t>& residues) const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const std::uint64_t p = primes_[i];
    const std::uint64_t n = r_ / p;
    const auto inv = static_cast<std::uint64_t>(inverse_mod(static_cast<std::int64_t>(n % p), static_cast<std::int64_t>(p)));
    const std::uint64_t coef = (residues[i] % p) * inv % p;
    t = (t + coef * n) % r_;
  }
  return r_ == 1 ? 0 : t;
}

std::uint64_t Level::sigma_unit(std::uint32_t ell) const {
  const std::size_t pos = prime_position(ell);
  std::vector<std::uint64_t> res(primes_.size(), 1);
  res[pos] = ctx_->root(ell);
  return crt(res);
}

Fraction Fraction::make(std::int64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
  const auto d = static_cast<std::int64_t>(den);
  std::int64_t n = mod_i64(num, d);
  const std::int64_t g = std::gcd(n, d);
  if (n == 0) return {0, 1};
  return {static_cast<std::uint64_t>(n / g), static_cast<std::uint64_t>(d / g)};
}

std::uint64_t Fraction::index(std::uint64_t r) const {
  if (r % den != 0) throw ContextError(ContextError::Kind::LevelMismatch, "fraction " + str() + " not at level " + std::to_string(r));
  return num * (r / den);
}

std::string Fraction::str() const { return num == 0 ? "0" : std::to_string(num) + "/" + std::to_string(den); }

Fraction operator+(const Fraction& a, const Fraction& b) {
  const std::uint64_t den = a.den / std::gcd(a.den, b.den) * b.den;
  const std::uint64_t num = a.num * (den / a.den) + b.num * (den / b.den);
  return Fraction::make(static_cast<std::int64_t>(num % den), den);
}

GroupElement::GroupElement(Level level, std::vector<std::uint32_t> exponents)
    : level_(std::move(level)), exponents_(std::move(exponents)) {
  if (exponents_.size() != level_.omega()) throw std::invalid_argument("GroupElement: exponent count mismatch");
  for (std::size_t i = 0; i < exponents_.size(); ++i) exponents_[i] %= level_.primes()[i] - 1;
}

GroupElement GroupElement::identity(const Level& level) {
  return GroupElement(level, std::vector<std::uint32_t>(level.omega(), 0));
}

GroupElement GroupElement::sigma(const Level& level, std::uint32_t ell, std::uint32_t power) {
  std::vector<std::uint32_t> e(level.omega(), 0);
  e[level.prime_position(ell)] = power;
  return GroupElement(level, std::move(e));
}

std::uint64_t GroupElement::unit() const {
  std::vector<std::uint64_t> res;
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    res.push_back(level_.context().power(level_.primes()[i], exponents_[i]));
  return level_.crt(res);
}

Fraction GroupElement::act(const Fraction& a) const {
  if (level_.r() % a.den != 0)
    throw ContextError(ContextError::Kind::LevelMismatch, "level mismatch: " + a.str() + " at level " + std::to_string(level_.r()));
  const std::uint64_t t = unit() % a.den;
  return Fraction::make(static_cast<std::int64_t>(a.num * t % a.den), a.den);
}

GroupElement GroupElement::inverse() const {
  std::vector<std::uint32_t> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::uint32_t n = level_.primes()[i] - 1;
    e[i] = (n - exponents_[i] % n) % n;
  }
  return GroupElement(level_, std::move(e));
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (!(a.level_ == b.level_)) throw ContextError(ContextError::Kind::LevelMismatch, "level mismatch in group law");
  std::vector<std::uint32_t> e(a.exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exponents_[i] + b.exponents_[i];
  return GroupElement(a.level_, std::move(e));
}

GroupElement frobenius(std::uint32_t ell, const Level& level) {
  if (level.divisible_by(ell))
    throw ContextError(ContextError::Kind::LevelMismatch, "ell divides level: " + std::to_string(ell));
  std::vector<std::uint32_t> e;
  for (auto p : level.primes()) e.push_back(level.context().dlog(p, ell % p));
  return GroupElement(level, std::move(e));
}

GroupRingElement GroupRingElement::identity(const Level& level) { return of(GroupElement::identity(level)); }

GroupRingElement GroupRingElement::of(const GroupElement& g, const Integer& c) {
  GroupRingElement x(g.level());
  x.add(g, c);
  return x;
}

GroupRingElement GroupRingElement::norm(const Level& level, std::uint32_t ell) {
  GroupRingElement x(level);
  for (std::uint32_t i = 0; i + 1 < ell; ++i) x.add(GroupElement::sigma(level, ell, i), 1);
  return x;
}

GroupRingElement GroupRingElement::derivative(const Level& level, std::uint32_t ell) {
  GroupRingElement x(level);
  for (std::uint32_t i = 1; i + 1 < ell; ++i) x.add(GroupElement::sigma(level, ell, i), i);
  return x;
}

GroupRingElement GroupRingElement::derivative(const Level& level) {
  GroupRingElement x = identity(level);
  for (auto ell : level.primes()) x = x * derivative(level, ell);
  return x;
}

Integer GroupRingElement::coefficient(const GroupElement& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Integer(0) : it->second;
}

void GroupRingElement::add(const GroupElement& g, const Integer& c) {
  if (!(g.level() == level_)) throw ContextError(ContextError::Kind::LevelMismatch, "level mismatch in group ring");
  Integer& slot = terms_[g];
  slot += c;
  if (slot == 0) terms_.erase(g);
}

SparseIntVector act_on_chain(std::uint64_t t, std::uint64_t r, const SparseIntVector& chain) {
  std::vector<std::pair<std::size_t, Integer>> out;
  out.reserve(chain.size());
  for (const auto& e : chain.entries())
    out.emplace_back(static_cast<std::size_t>((static_cast<unsigned __int128>(e.index) * t) % r), e.value);
  return SparseIntVector::from_pairs(std::move(out));
}

SparseIntVector GroupRingElement::apply(const SparseIntVector& chain) const {
  const std::uint64_t r = level_.r();
  for (const auto& e : chain.entries())
    if (e.index >= r) throw ContextError(ContextError::Kind::LevelMismatch, "chain index beyond level");
  std::vector<std::pair<std::size_t, Integer>> out;
  for (const auto& [g, c] : terms_) {
    const std::uint64_t t = g.unit();
    for (const auto& e : chain.entries())
      out.emplace_back(static_cast<std::size_t>(e.index * t % r), c * e.value);
  }
  return SparseIntVector::from_pairs(std::move(out));
}

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement x = a;
  for (const auto& [g, c] : b.terms_) x.add(g, c);
  return x;
}

GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement x = a;
  for (const auto& [g, c] : b.terms_) x.add(g, -c);
  return x;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  if (!(a.level_ == b.level_)) throw ContextError(ContextError::Kind::LevelMismatch, "level mismatch in product");
  GroupRingElement x(a.level_);
  for (const auto& [g, c] : a.terms_)
    for (const auto& [h, d] : b.terms_) x.add(g * h, c * d);
  return x;
}

bool norm_identity_check(const Context& ctx, std::uint32_t ell, const GroupRingElement* derivative) {
  const Level level(ctx, std::vector<std::uint32_t>{ell});
  const GroupRingElement nprime = derivative != nullptr ? *derivative : GroupRingElement::derivative(level, ell);
  const GroupRingElement sigma_minus_one =
      GroupRingElement::of(GroupElement::sigma(level, ell)) - GroupRingElement::identity(level);
  const GroupRingElement lhs = nprime * sigma_minus_one;
  GroupRingElement rhs = GroupRingElement::of(GroupElement::identity(level), ell - 1);
  rhs = rhs - GroupRingElement::norm(level, ell);
  return lhs == rhs;
}

}  // namespace udist
