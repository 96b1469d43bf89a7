#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "weyl_lab/geometry.hpp"

namespace weyl_lab {

/// Off-diagonal coefficient a(row, col) with row < col.
struct UpperEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Sparse symmetric matrix stored as its diagonal plus the strict upper
/// triangle in compressed-row layout. Each unordered pair is stored once.
class SymmetricSparseMatrix {
 public:
  SymmetricSparseMatrix() = default;
  /// Entries with row > col are transposed; duplicates are summed.
  SymmetricSparseMatrix(std::vector<double> diagonal, std::vector<UpperEntry> off_diagonal);

  std::size_t size() const noexcept { return diagonal_.size(); }
  std::size_t upper_nonzeros() const noexcept { return cols_.size(); }

  double diagonal(std::size_t i) const { return diagonal_[i]; }
  double entry(std::size_t i, std::size_t j) const;

  /// Strict-upper columns and values of row i.
  std::span<const std::size_t> upper_columns(std::size_t i) const;
  std::span<const double> upper_values(std::size_t i) const;

  /// y = A x. Throws Error(length_mismatch) on size mismatch.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// max_i (a_ii + sum_j |a_ij|) and min_i (a_ii - sum_j |a_ij|).
  double gershgorin_upper() const;
  double gershgorin_lower() const;

  /// Upper triangle (diagonal included) as an Eigen column-major matrix.
  Eigen::SparseMatrix<double> to_eigen_upper() const;

  /// "row col value" lines, 0-based, upper triangle plus diagonal, row-major.
  void write_coordinate(std::ostream& out) const;

 private:
  std::vector<double> diagonal_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

/// Finite-difference Dirichlet Laplacian on the interior lattice of a domain.
class GridOperator {
 public:
  GridOperator(Domain domain, std::shared_ptr<const InteriorGrid> grid, SymmetricSparseMatrix matrix);

  int dimension() const noexcept { return grid_->dimension(); }
  double h() const noexcept { return grid_->h(); }
  std::size_t size() const noexcept { return matrix_.size(); }

  const Domain& domain() const noexcept { return domain_; }
  const InteriorGrid& grid() const noexcept { return *grid_; }
  std::shared_ptr<const InteriorGrid> shared_grid() const noexcept { return grid_; }
  const SymmetricSparseMatrix& matrix() const noexcept { return matrix_; }

  std::vector<double> apply(std::span<const double> field) const { return matrix_.apply(field); }

 private:
  Domain domain_;
  std::shared_ptr<const InteriorGrid> grid_;
  SymmetricSparseMatrix matrix_;
};

/// (2n+1)-point stencil: diagonal 2n/h^2, -1/h^2 between lattice neighbours
/// that are both interior. Neighbours on or outside the boundary are
/// eliminated (homogeneous Dirichlet).
GridOperator assemble_dirichlet_laplacian(const Domain& d, double h);

}  // namespace weyl_lab
