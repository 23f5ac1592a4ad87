#pragma once

#include "udist/sparse_vector.hpp"

#include <optional>
#include <vector>

namespace udist {

/// Sparse echelon of a submodule of (Z/M)^cols, M ≥ 2 arbitrary.
///
/// Pivot columns are taken in the order of fewest active rows; a unit entry in
/// the shortest row pivots when one exists, otherwise the column is cleared by
/// 2×2 unimodular gcd steps. A non-unit pivot g | M leaves behind the
/// annihilator row (M/g)·row, which rejoins the active rows, so the result has
/// the Howell property in pivot order: reduce() decides membership and the tags
/// of the vanished rows generate the left kernel.
class ModEchelon {
 public:
  ModEchelon() = default;
  ModEchelon(std::uint32_t modulus, std::size_t cols, std::vector<ModVector> rows, bool track = false);

  [[nodiscard]] std::uint32_t modulus() const { return modulus_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t input_rows() const { return input_rows_; }
  [[nodiscard]] std::size_t pivot_count() const { return basis_.size(); }
  [[nodiscard]] const std::vector<ModVector>& basis() const { return basis_; }
  [[nodiscard]] const std::vector<std::uint32_t>& pivot_columns() const { return pivot_col_; }
  /// Pivot values; each divides M.
  [[nodiscard]] std::vector<Residue> pivot_values() const;
  /// |span| = ∏ M / g_i, as prime-power-free bookkeeping: returns the list M/g_i.
  [[nodiscard]] std::vector<std::uint32_t> span_order_factors() const;
  /// log_M |span| when M is prime (the rank); for composite M use span_order_factors.
  [[nodiscard]] std::size_t rank() const { return basis_.size(); }

  ModVector reduce(ModVector v, ModVector* combination = nullptr) const;
  [[nodiscard]] bool contains(const ModVector& v) const { return reduce(v).empty(); }
  /// Coefficients c over input rows with Σ c_i row_i = v, if v is in the span.
  [[nodiscard]] std::optional<ModVector> express(const ModVector& v) const;

  [[nodiscard]] const std::vector<ModVector>& kernel() const;

 private:
  std::uint32_t modulus_ = 2;
  std::size_t cols_ = 0;
  std::size_t input_rows_ = 0;
  bool tracked_ = false;
  std::vector<ModVector> basis_;
  std::vector<ModVector> tags_;
  std::vector<std::uint32_t> pivot_col_;
  std::vector<long> pivot_of_col_;
  std::vector<ModVector> kernel_;
};

std::uint32_t gcd_u32(std::uint32_t a, std::uint32_t b);
/// Unit u with u·a ≡ gcd(a, M) (mod M).
Residue normalizing_unit(Residue a, std::uint32_t modulus);

}  // namespace udist
