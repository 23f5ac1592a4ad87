#include "udist/sparse_matrix.hpp"

#include <stdexcept>

namespace udist {

DenseIntMatrix identity_matrix(std::size_t n) {
  DenseIntMatrix m(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

DenseIntMatrix multiply(const DenseIntMatrix& a, const DenseIntMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = a.front().size();
  if (inner != b.size()) throw std::invalid_argument("multiply: dimension mismatch");
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  DenseIntMatrix c(a.size(), std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

Integer determinant(const DenseIntMatrix& input) {
  const std::size_t n = input.size();
  if (n == 0) return 1;
  DenseIntMatrix a = input;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

SparseIntMatrix SparseIntMatrix::from_dense(const DenseIntMatrix& dense, std::size_t cols) {
  if (!dense.empty()) cols = dense.front().size();
  SparseIntMatrix m(dense.size(), cols);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i].size() != cols) throw std::invalid_argument("from_dense: ragged rows");
    std::vector<std::pair<std::size_t, Integer>> pairs;
    for (std::size_t j = 0; j < cols; ++j)
      if (dense[i][j] != 0) pairs.emplace_back(j, dense[i][j]);
    m.data_[i] = SparseIntVector::from_pairs(std::move(pairs));
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::from_rows(std::size_t cols, std::vector<SparseIntVector> rows) {
  SparseIntMatrix m(0, cols);
  for (auto& r : rows) m.append_row(std::move(r));
  return m;
}

std::size_t SparseIntMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

Integer SparseIntMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseIntMatrix::at");
  return data_[i].get(j);
}

void SparseIntMatrix::set(std::size_t i, std::size_t j, const Integer& value) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseIntMatrix::set");
  data_[i].set(j, value);
}

void SparseIntMatrix::append_row(SparseIntVector row) {
  if (row.extent() > cols_) throw std::out_of_range("SparseIntMatrix::append_row");
  data_.push_back(std::move(row));
  ++rows_;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  std::vector<std::vector<std::pair<std::size_t, Integer>>> cols(cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : data_[i].entries()) cols[e.index].emplace_back(i, e.value);
  SparseIntMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j) t.data_[j] = SparseIntVector::from_pairs(std::move(cols[j]));
  return t;
}

DenseIntMatrix SparseIntMatrix::to_dense() const {
  DenseIntMatrix d(rows_, std::vector<Integer>(cols_, 0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& e : data_[i].entries()) d[i][e.index] = e.value;
  return d;
}

SparseIntVector SparseIntMatrix::left_multiply(const SparseIntVector& v) const {
  SparseIntVector out;
  for (const auto& e : v.entries()) {
    if (e.index >= rows_) throw std::out_of_range("left_multiply");
    out.add_scaled(data_[e.index], e.value);
  }
  return out;
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("SparseIntMatrix: dimension mismatch");
  SparseIntMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = other.left_multiply(data_[i]);
  return out;
}

bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

}  // namespace udist
