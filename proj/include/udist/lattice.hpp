#pragma once

#include "udist/normal_form.hpp"
#include "udist/sparse_matrix.hpp"

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace udist {

/// Sparse integer row echelon of a lattice L ⊆ Z^cols.
///
/// Right-looking elimination: the next pivot column is the one with the fewest
/// active rows; within it the smallest |entry| (then the shortest row) pivots,
/// and non-unit columns are cleared by repeated Euclidean steps. Every step is
/// unimodular, so the pivot rows are a Z-basis of L and, with tracking on, the
/// transforms of the vanished rows are a basis of the left kernel.
///
/// Basis row i has pivot column pivot_columns()[i] and is zero at every earlier
/// pivot column, which is all reduce() needs.
class RowLattice {
 public:
  RowLattice() = default;
  RowLattice(std::size_t cols, std::vector<SparseIntVector> rows, bool track = false);

  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t input_rows() const { return input_rows_; }
  [[nodiscard]] std::size_t rank() const { return basis_.size(); }
  [[nodiscard]] const std::vector<SparseIntVector>& basis() const { return basis_; }
  [[nodiscard]] const std::vector<std::size_t>& pivot_columns() const { return pivot_col_; }

  /// Reduces v by the basis in pivot order with floor quotients. The result is
  /// zero iff v ∈ L. With tracking, *combination receives the coefficients
  /// (over input rows) of the subtracted lattice vector.
  SparseIntVector reduce(SparseIntVector v, SparseIntVector* combination = nullptr) const;
  [[nodiscard]] bool contains(const SparseIntVector& v) const { return reduce(v).empty(); }

  /// Basis of {x : x·A = 0} in input-row coordinates (tracking required).
  [[nodiscard]] const std::vector<SparseIntVector>& kernel() const;
  /// Input-row expression of basis row i (tracking required).
  [[nodiscard]] const SparseIntVector& basis_tag(std::size_t i) const;

  /// Structure of Z^cols / L.
  [[nodiscard]] const std::vector<Integer>& invariant_factors() const;
  [[nodiscard]] std::size_t free_rank() const { return cols_ - rank(); }
  [[nodiscard]] std::size_t coordinate_count() const { return invariant_factors().size() + free_rank(); }
  /// Canonical coordinates of v + L: torsion part first (reduced into [0, d_i)),
  /// then free part. Two vectors are congruent mod L iff coordinates agree.
  [[nodiscard]] std::vector<Integer> coordinates(const SparseIntVector& v) const;
  [[nodiscard]] SparseIntVector sparse_coordinates(const SparseIntVector& v) const;
  /// sparse_coordinates(e_j) for every column j, computed in one backward sweep.
  [[nodiscard]] std::vector<SparseIntVector> coordinate_table() const;
  /// A vector whose coordinates are e_i.
  [[nodiscard]] SparseIntVector lift(std::size_t i) const;

  /// Column indices that survive the unit pivots, ascending.
  [[nodiscard]] const std::vector<std::size_t>& kept_columns() const;
  /// Image of e_j in Z^kept after eliminating the unit pivot columns, for all j.
  [[nodiscard]] std::vector<SparseIntVector> projection_table() const;

 private:
  void eliminate(std::vector<SparseIntVector> rows, bool track);
  [[nodiscard]] SparseIntVector project_units(SparseIntVector v) const;
  [[nodiscard]] SparseIntVector finish_coordinates(const SparseIntVector& y) const;

  std::size_t cols_ = 0;
  std::size_t input_rows_ = 0;
  bool tracked_ = false;
  std::vector<SparseIntVector> basis_;
  std::vector<SparseIntVector> tags_;
  std::vector<std::size_t> pivot_col_;
  std::vector<long> pivot_of_col_;
  std::vector<SparseIntVector> kernel_;

  struct Quotient {
    std::vector<std::size_t> kept;        // columns outside the unit pivots
    std::vector<long> kept_index;         // column -> position in kept, or -1
    std::vector<std::size_t> torsion_support;  // kept columns meeting the non-unit rows
    DenseIntMatrix V;                     // SNF column transform on that support
    DenseIntMatrix V_inverse;
    std::vector<Integer> diagonal;        // SNF diagonal (length = #non-unit rows)
    std::vector<Integer> invariant_factors;
    std::size_t first_torsion = 0;        // diagonal index of the first non-unit factor
    std::vector<std::size_t> free_columns;  // kept columns outside torsion_support
  };
  // Built lazily and at most once; copies of an eliminated lattice share it.
  struct QuotientCache {
    std::once_flag once;
    std::unique_ptr<Quotient> data;
  };
  std::shared_ptr<QuotientCache> cache_ = std::make_shared<QuotientCache>();
  const Quotient& quotient() const;
};

/// Integer matrix facts derived from one RowLattice of its rows.
struct MatrixInvariants {
  std::size_t rank = 0;
  std::vector<Integer> elementary_divisors;  // non-unit nonzero ones
};
MatrixInvariants matrix_invariants(const SparseIntMatrix& a);

/// Inverse of a unimodular matrix.
DenseIntMatrix unimodular_inverse(const DenseIntMatrix& v);

}  // namespace udist
