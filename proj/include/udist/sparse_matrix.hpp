#pragma once

#include "udist/sparse_vector.hpp"

#include <cstddef>
#include <vector>

namespace udist {

using DenseIntMatrix = std::vector<std::vector<Integer>>;

DenseIntMatrix identity_matrix(std::size_t n);
DenseIntMatrix multiply(const DenseIntMatrix& a, const DenseIntMatrix& b);
/// Exact determinant by fraction-free (Bareiss) elimination.
Integer determinant(const DenseIntMatrix& a);

/// Row-major sparse integer matrix; stored rows never contain zero entries.
class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static SparseIntMatrix from_dense(const DenseIntMatrix& dense, std::size_t cols = 0);
  static SparseIntMatrix from_rows(std::size_t cols, std::vector<SparseIntVector> rows);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const;
  [[nodiscard]] Integer at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Integer& value);
  [[nodiscard]] const SparseIntVector& row(std::size_t i) const { return data_.at(i); }
  [[nodiscard]] const std::vector<SparseIntVector>& row_data() const { return data_; }
  void append_row(SparseIntVector row);

  [[nodiscard]] SparseIntMatrix transpose() const;
  [[nodiscard]] DenseIntMatrix to_dense() const;
  [[nodiscard]] SparseIntMatrix operator*(const SparseIntMatrix& other) const;
  /// Row vector times matrix.
  [[nodiscard]] SparseIntVector left_multiply(const SparseIntVector& v) const;

  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseIntVector> data_;
};

}  // namespace udist
