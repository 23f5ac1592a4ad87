#include "udist/dense_mod.hpp"

#include "udist/mod_echelon.hpp"

#include <stdexcept>

namespace udist {

namespace {

/// dst[j] += f * src[j] (mod M) for j >= from. For M < 2^16 the sum fits in 32
/// bits and Barrett reduction keeps the loop free of division.
void axpy_row(Residue* dst, const Residue* src, Residue f, std::uint32_t m, std::size_t from, std::size_t n) {
  if (f == 0) return;
  if (m < (1u << 16)) {
    const std::uint64_t mu = (std::uint64_t{1} << 32) / m;
    for (std::size_t j = from; j < n; ++j) {
      const std::uint32_t x = dst[j] + f * src[j];
      const auto q = static_cast<std::uint32_t>((x * mu) >> 32);
      std::uint32_t r = x - q * m;
      r = r >= m ? r - m : r;
      dst[j] = r;
    }
  } else {
    for (std::size_t j = from; j < n; ++j)
      dst[j] = static_cast<Residue>((dst[j] + std::uint64_t{f} * src[j]) % m);
  }
}

void scale_row(std::vector<Residue>& row, Residue u, std::uint32_t m) {
  for (auto& x : row) x = static_cast<Residue>((std::uint64_t{x} * u) % m);
}

Residue neg_mod(Residue x, std::uint32_t m) { return x == 0 ? 0 : m - x; }

/// Zeroes column c below position r by unimodular gcd steps; row r keeps the gcd.
void gcd_clear(DenseModMatrix& a, std::size_t r, std::size_t c) {
  const std::uint32_t m = a.modulus();
  for (std::size_t i = r + 1; i < a.rows(); ++i) {
    const Residue b = a.at(i, c);
    if (b == 0) continue;
    const Residue p = a.at(r, c);
    if (p != 0 && b % p == 0) {
      axpy_row(a.row(i).data(), a.row(r).data(), neg_mod(b / p, m), m, c, a.cols());
      continue;
    }
    const auto x = xgcd_i64(p, b);
    const auto s = static_cast<Residue>(mod_i64(x.s, m));
    const auto t = static_cast<Residue>(mod_i64(x.t, m));
    const auto bg = static_cast<Residue>(b / x.g);
    const auto ag = neg_mod(static_cast<Residue>(p / x.g), m);
    auto& pr = a.row(r);
    auto& ir = a.row(i);
    for (std::size_t j = c; j < a.cols(); ++j) {
      const std::uint64_t u = pr[j], v = ir[j];
      pr[j] = static_cast<Residue>((s * u + t * v) % m);
      ir[j] = static_cast<Residue>((bg * u + ag * v) % m);
    }
  }
}

}  // namespace

DenseModMatrix howell_form(DenseModMatrix a) {
  const std::uint32_t m = a.modulus();
  const std::size_t n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < a.rows(); ++c) {
    // Bring a unit entry to row r when there is one.
    std::size_t pick = a.rows();
    for (std::size_t i = r; i < a.rows(); ++i) {
      const Residue x = a.at(i, c);
      if (x != 0 && (pick == a.rows() || gcd_u32(x, m) < gcd_u32(a.at(pick, c), m))) pick = i;
      if (pick == i && gcd_u32(x, m) == 1) break;
    }
    if (pick == a.rows()) continue;
    std::swap(a.row(r), a.row(pick));
    if (gcd_u32(a.at(r, c), m) != 1) gcd_clear(a, r, c);
    const Residue u = normalizing_unit(a.at(r, c), m);
    if (u != 1) scale_row(a.row(r), u, m);
    const Residue g = a.at(r, c);
    const Residue* pivot = a.row(r).data();
    const auto rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
      if (static_cast<std::size_t>(i) == r) continue;
      const Residue x = a.at(static_cast<std::size_t>(i), c);
      if (x == 0) continue;
      axpy_row(a.row(static_cast<std::size_t>(i)).data(), pivot, neg_mod(x / g, m), m, c, n);
    }
    if (g != 1) {
      std::vector<Residue> ann = a.row(r);
      scale_row(ann, m / g, m);
      bool nonzero = false;
      for (Residue x : ann) nonzero = nonzero || x != 0;
      if (nonzero) a.append_row(std::move(ann));
    }
    ++r;
  }
  a.truncate(r);
  return a;
}

DenseModMatrix howell_form_reference(DenseModMatrix a) {
  const std::uint32_t m = a.modulus();
  const std::size_t n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < a.rows(); ++c) {
    std::size_t pick = a.rows();
    for (std::size_t i = r; i < a.rows(); ++i)
      if (a.at(i, c) != 0) {
        pick = i;
        break;
      }
    if (pick == a.rows()) continue;
    std::swap(a.row(r), a.row(pick));
    gcd_clear(a, r, c);
    const Residue u = normalizing_unit(a.at(r, c), m);
    for (std::size_t j = 0; j < n; ++j) a.at(r, j) = static_cast<Residue>((std::uint64_t{a.at(r, j)} * u) % m);
    const Residue g = a.at(r, c);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      const Residue q = a.at(i, c) / g;
      for (std::size_t j = 0; j < n; ++j)
        a.at(i, j) = static_cast<Residue>((a.at(i, j) + std::uint64_t{m - q} * a.at(r, j)) % m);
    }
    std::vector<Residue> ann(n);
    bool nonzero = false;
    for (std::size_t j = 0; j < n; ++j) {
      ann[j] = static_cast<Residue>((std::uint64_t{a.at(r, j)} * (m / g)) % m);
      nonzero = nonzero || ann[j] != 0;
    }
    if (nonzero) a.append_row(std::move(ann));
    ++r;
  }
  a.truncate(r);
  return a;
}

std::vector<Residue> howell_reduce(std::vector<Residue> v, const DenseModMatrix& howell) {
  const std::uint32_t m = howell.modulus();
  if (v.size() != howell.cols()) throw std::invalid_argument("howell_reduce: length mismatch");
  std::size_t c = 0;
  for (std::size_t i = 0; i < howell.rows(); ++i) {
    while (howell.at(i, c) == 0) ++c;
    const Residue q = v[c] / howell.at(i, c);
    if (q != 0) axpy_row(v.data(), howell.row(i).data(), neg_mod(q, m), m, c, v.size());
  }
  return v;
}

DenseModMatrix left_kernel(const DenseModMatrix& a, bool parallel) {
  const std::size_t m = a.rows(), n = a.cols();
  DenseModMatrix aug(m, n + m, a.modulus());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n + i) = 1;
  }
  DenseModMatrix h = parallel ? howell_form(std::move(aug)) : howell_form_reference(std::move(aug));
  DenseModMatrix kernel(0, m, a.modulus());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    bool zero_prefix = true;
    for (std::size_t j = 0; j < n && zero_prefix; ++j) zero_prefix = h.at(i, j) == 0;
    if (zero_prefix) kernel.append_row(std::vector<Residue>(h.row(i).begin() + static_cast<long>(n), h.row(i).end()));
  }
  return kernel;
}

std::vector<std::uint32_t> howell_order_factors(const DenseModMatrix& howell) {
  std::vector<std::uint32_t> out;
  std::size_t c = 0;
  for (std::size_t i = 0; i < howell.rows(); ++i) {
    while (howell.at(i, c) == 0) ++c;
    out.push_back(howell.modulus() / howell.at(i, c));
  }
  return out;
}

}  // namespace udist
