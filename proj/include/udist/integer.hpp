#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace udist {

/// Arbitrary-precision integer used for all lattice arithmetic over Z.
using Integer = mpz_class;

/// Residue class representative in [0, M).
using Residue = std::uint32_t;

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Nonnegative remainder for b > 0.
inline Integer mod_floor(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Residue to_residue(const Integer& a, std::uint32_t modulus) {
  return static_cast<Residue>(mpz_fdiv_ui(a.get_mpz_t(), modulus));
}

inline std::int64_t mod_i64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Extended gcd: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
struct XGcd {
  std::int64_t g, s, t;
};

inline XGcd xgcd_i64(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo m; a must be a unit.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  auto x = xgcd_i64(mod_i64(a, m), m);
  return mod_i64(x.s, m);
}

inline std::string to_string(const Integer& a) { return a.get_str(); }

}  // namespace udist
