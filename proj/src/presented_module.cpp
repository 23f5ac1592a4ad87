#include "udist/presented_module.hpp"

namespace udist {

namespace {

SparseIntVector dense_to_sparse(const std::vector<Integer>& v) {
  std::vector<std::pair<std::size_t, Integer>> pairs;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) pairs.emplace_back(i, v[i]);
  return SparseIntVector::from_pairs(std::move(pairs));
}

}  // namespace

PresentedModule::PresentedModule(std::vector<std::string> labels, SparseIntMatrix relations)
    : labels_(std::move(labels)), relations_(std::move(relations)) {
  if (relations_.cols() != labels_.size()) throw std::invalid_argument("PresentedModule: relation width mismatch");
  lattice_ = std::make_shared<const RowLattice>(labels_.size(), relations_.row_data());
}

PresentedModule PresentedModule::modulo(const Integer& modulus) const {
  SparseIntMatrix rel = relations_;
  for (std::size_t i = 0; i < labels_.size(); ++i) rel.append_row(SparseIntVector::unit(i, modulus));
  return PresentedModule(labels_, std::move(rel));
}

PresentedModule present_quotient(std::vector<std::string> labels, SparseIntMatrix relations) {
  return PresentedModule(std::move(labels), std::move(relations));
}

bool operator==(const ModuleElement& a, const ModuleElement& b) {
  if (a.parent_ != b.parent_) throw std::invalid_argument("ModuleElement: different parents");
  return a.parent_->equal(a.coefficients_, b.coefficients_);
}

ModuleHom::ModuleHom(const PresentedModule& source, const PresentedModule& target,
                     std::vector<SparseIntVector> images)
    : source_(source), target_(target), images_(std::move(images)) {
  if (images_.size() != source.generator_count()) throw std::invalid_argument("ModuleHom: image count mismatch");
  for (const auto& im : images_)
    if (im.extent() > target.generator_count()) throw std::invalid_argument("ModuleHom: image out of range");
  for (std::size_t i = 0; i < source.relations().rows(); ++i)
    if (!target.is_zero(apply(source.relations().row(i))))
      throw NotHomomorphism("not a homomorphism: relation " + std::to_string(i) + " is not preserved");
}

SparseIntVector ModuleHom::apply(const SparseIntVector& v) const {
  SparseIntVector out;
  for (const auto& e : v.entries()) out.add_scaled(images_.at(e.index), e.value);
  return out;
}

std::vector<SparseIntVector> ModuleHom::kernel_lattice() const {
  const std::size_t a = source_.coordinate_count();
  const std::size_t b = target_.coordinate_count();
  const auto& d2 = target_.invariant_factors();
  std::vector<SparseIntVector> rows;
  rows.reserve(a + d2.size());
  for (std::size_t i = 0; i < a; ++i) rows.push_back(dense_to_sparse(target_.coordinates(apply(source_.lift(i)))));
  for (std::size_t j = 0; j < d2.size(); ++j) rows.push_back(SparseIntVector::unit(j, d2[j]));
  RowLattice stacked(b, std::move(rows), /*track=*/true);
  std::vector<SparseIntVector> projected;
  for (const auto& k : stacked.kernel())
    projected.push_back(k.remapped([a](std::size_t i) { return i < a; }, [](std::size_t i) { return i; }));
  RowLattice lattice(a, std::move(projected));
  return lattice.basis();
}

DerivedModule ModuleHom::kernel() const {
  const std::size_t a = source_.coordinate_count();
  std::vector<SparseIntVector> basis = kernel_lattice();
  RowLattice in_basis(a, basis, /*track=*/true);
  SparseIntMatrix rel(0, basis.size());
  const auto& d1 = source_.invariant_factors();
  for (std::size_t j = 0; j < d1.size(); ++j) {
    SparseIntVector combination;
    if (!in_basis.reduce(SparseIntVector::unit(j, d1[j]), &combination).empty())
      throw std::logic_error("ModuleHom::kernel: torsion relation outside kernel lattice");
    rel.append_row(std::move(combination));
  }
  std::vector<std::string> labels;
  std::vector<SparseIntVector> inclusion;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    labels.push_back("k" + std::to_string(i));
    SparseIntVector lifted;
    for (const auto& e : basis[i].entries()) lifted.add_scaled(source_.lift(e.index), e.value);
    inclusion.push_back(std::move(lifted));
  }
  return {PresentedModule(std::move(labels), std::move(rel)), std::move(inclusion)};
}

DerivedModule ModuleHom::image() const {
  const std::size_t a = source_.coordinate_count();
  std::vector<std::string> labels;
  std::vector<SparseIntVector> inclusion;
  for (std::size_t i = 0; i < a; ++i) {
    labels.push_back("i" + std::to_string(i));
    inclusion.push_back(apply(source_.lift(i)));
  }
  return {PresentedModule(std::move(labels), SparseIntMatrix::from_rows(a, kernel_lattice())), std::move(inclusion)};
}

DerivedModule ModuleHom::cokernel() const {
  SparseIntMatrix rel = target_.relations();
  for (const auto& im : images_) rel.append_row(im);
  std::vector<SparseIntVector> projection;
  for (std::size_t j = 0; j < target_.generator_count(); ++j) projection.push_back(SparseIntVector::unit(j));
  return {PresentedModule(target_.labels(), std::move(rel)), std::move(projection)};
}

}  // namespace udist
