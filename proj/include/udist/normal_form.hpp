#pragma once

#include "udist/sparse_matrix.hpp"

#include <optional>
#include <vector>

namespace udist {

/// U * A * V = S with U, V unimodular and S diagonal, d1 | d2 | ... and di >= 0.
struct SmithForm {
  DenseIntMatrix U;
  SparseIntMatrix S;
  DenseIntMatrix V;

  /// Nonzero diagonal entries of S, in order.
  [[nodiscard]] std::vector<Integer> diagonal() const;
};

/// Dense Smith normal form with transforms, intended for desk-scale matrices.
/// Pivot choice: minimal Markowitz cost among nonzero entries, ties broken by
/// smallest absolute value, then by position.
SmithForm smith_normal_form(const SparseIntMatrix& a);

/// Row-style Hermite normal form of the row lattice: zero rows dropped, pivots
/// strictly increasing in column, positive, and entries above each pivot
/// reduced into [0, pivot).
DenseIntMatrix hermite_normal_form(const DenseIntMatrix& rows);

/// Reduces v against an HNF basis (as returned by hermite_normal_form).
std::vector<Integer> reduce_by_hnf(std::vector<Integer> v, const DenseIntMatrix& hnf);

/// Solves A x = b over Z (modulus == 0) or over Z/modulus. Among all solutions,
/// returns the representative reduced against the Hermite (resp. Howell) basis
/// of the solution lattice. Returns nullopt when the system is inconsistent.
std::optional<std::vector<Integer>> solve_linear(const SparseIntMatrix& a, const std::vector<Integer>& b,
                                                 const Integer& modulus);

}  // namespace udist
