#pragma once

#include "udist/integer.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace udist {

/// Dense matrix over Z/M, row-major.
class DenseModMatrix {
 public:
  DenseModMatrix() = default;
  DenseModMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
      : cols_(cols), modulus_(modulus), data_(rows, std::vector<Residue>(cols, 0)) {}

  [[nodiscard]] std::size_t rows() const { return data_.size(); }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::uint32_t modulus() const { return modulus_; }
  Residue& at(std::size_t i, std::size_t j) { return data_[i][j]; }
  [[nodiscard]] Residue at(std::size_t i, std::size_t j) const { return data_[i][j]; }
  std::vector<Residue>& row(std::size_t i) { return data_[i]; }
  [[nodiscard]] const std::vector<Residue>& row(std::size_t i) const { return data_[i]; }
  void append_row(std::vector<Residue> r) { data_.push_back(std::move(r)); }
  void truncate(std::size_t n) { data_.resize(n); }

  friend bool operator==(const DenseModMatrix& a, const DenseModMatrix& b) {
    return a.cols_ == b.cols_ && a.modulus_ == b.modulus_ && a.data_ == b.data_;
  }

 private:
  std::size_t cols_ = 0;
  std::uint32_t modulus_ = 2;
  std::vector<std::vector<Residue>> data_;
};

/// Howell form: zero rows dropped, pivot columns strictly increasing, each
/// pivot a divisor g of M, entries above a pivot reduced into [0, g), and the
/// span closed under the annihilator rows, so reduction is canonical.
/// Row updates for each pivot run in parallel with OpenMP.
DenseModMatrix howell_form(DenseModMatrix a);

/// Serial textbook version of howell_form, kept as the test oracle.
DenseModMatrix howell_form_reference(DenseModMatrix a);

/// Canonical representative of v modulo the span of a Howell form.
std::vector<Residue> howell_reduce(std::vector<Residue> v, const DenseModMatrix& howell);

/// Howell basis of {x : x·A = 0} (left kernel), via the Howell form of [A | I].
DenseModMatrix left_kernel(const DenseModMatrix& a, bool parallel = true);

/// |span| of a Howell form as the list of factors M / pivot.
std::vector<std::uint32_t> howell_order_factors(const DenseModMatrix& howell);

}  // namespace udist
