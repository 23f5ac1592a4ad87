#pragma once

#include "udist/lattice.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace udist {

/// Finitely generated abelian group Z^gens / (row lattice of relations).
class PresentedModule {
 public:
  PresentedModule() = default;
  PresentedModule(std::vector<std::string> labels, SparseIntMatrix relations);

  /// Same module with M·e_i adjoined for every generator (a Z/M-module).
  [[nodiscard]] PresentedModule modulo(const Integer& modulus) const;

  [[nodiscard]] std::size_t generator_count() const { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const SparseIntMatrix& relations() const { return relations_; }
  [[nodiscard]] const RowLattice& lattice() const { return *lattice_; }

  [[nodiscard]] const std::vector<Integer>& invariant_factors() const { return lattice_->invariant_factors(); }
  [[nodiscard]] std::size_t free_rank() const { return lattice_->free_rank(); }
  [[nodiscard]] bool is_zero_module() const { return free_rank() == 0 && invariant_factors().empty(); }
  [[nodiscard]] bool is_free() const { return invariant_factors().empty(); }

  [[nodiscard]] bool is_zero(const SparseIntVector& v) const { return lattice_->contains(v); }
  [[nodiscard]] bool equal(const SparseIntVector& a, const SparseIntVector& b) const { return is_zero(a - b); }
  /// Canonical coordinates in ⊕ Z/d_i ⊕ Z^free.
  [[nodiscard]] std::vector<Integer> coordinates(const SparseIntVector& v) const { return lattice_->coordinates(v); }
  [[nodiscard]] std::size_t coordinate_count() const { return lattice_->coordinate_count(); }
  [[nodiscard]] SparseIntVector lift(std::size_t coordinate) const { return lattice_->lift(coordinate); }

 private:
  std::vector<std::string> labels_;
  SparseIntMatrix relations_;
  std::shared_ptr<const RowLattice> lattice_;
};

/// present_quotient in the usual vocabulary.
PresentedModule present_quotient(std::vector<std::string> labels, SparseIntMatrix relations);

class ModuleElement {
 public:
  ModuleElement(const PresentedModule& parent, SparseIntVector coefficients)
      : parent_(&parent), coefficients_(std::move(coefficients)) {}
  [[nodiscard]] const PresentedModule& parent() const { return *parent_; }
  [[nodiscard]] const SparseIntVector& coefficients() const { return coefficients_; }
  /// Decided by the parent's normal form, never by raw coefficients.
  friend bool operator==(const ModuleElement& a, const ModuleElement& b);

 private:
  const PresentedModule* parent_;
  SparseIntVector coefficients_;
};

struct NotHomomorphism : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A submodule or quotient together with its structure map. For kernels and
/// images, map[i] is generator i written in the ambient generators; for
/// cokernels, map[j] is the image of ambient generator j.
struct DerivedModule {
  PresentedModule module;
  std::vector<SparseIntVector> map;
};

/// Homomorphism given by the images of the source generators.
class ModuleHom {
 public:
  /// Throws NotHomomorphism when a source relation does not map to zero.
  ModuleHom(const PresentedModule& source, const PresentedModule& target, std::vector<SparseIntVector> images);

  [[nodiscard]] SparseIntVector apply(const SparseIntVector& v) const;
  [[nodiscard]] DerivedModule kernel() const;
  [[nodiscard]] DerivedModule image() const;
  [[nodiscard]] DerivedModule cokernel() const;
  [[nodiscard]] bool injective() const { return kernel().module.is_zero_module(); }
  [[nodiscard]] bool surjective() const { return cokernel().module.is_zero_module(); }

 private:
  /// Rows of the coordinate lattice {x ∈ Z^a : f(x) = 0}.
  [[nodiscard]] std::vector<SparseIntVector> kernel_lattice() const;

  PresentedModule source_;
  PresentedModule target_;
  std::vector<SparseIntVector> images_;
};

}  // namespace udist
