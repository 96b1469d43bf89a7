#include "weyl_lab/grid_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "weyl_lab/error.hpp"
#include "weyl_lab/format.hpp"

namespace weyl_lab {

namespace {
constexpr std::string_view kModule = "operator";
}

SymmetricSparseMatrix::SymmetricSparseMatrix(std::vector<double> diagonal, std::vector<UpperEntry> off_diagonal)
    : diagonal_(std::move(diagonal)) {
  const std::size_t n = diagonal_.size();
  for (auto& e : off_diagonal) {
    if (e.row > e.col) std::swap(e.row, e.col);
    if (e.col >= n) fail(Errc::invalid_argument, kModule, "off-diagonal entry index out of range");
    if (e.row == e.col) fail(Errc::invalid_argument, kModule, "diagonal entry passed as off-diagonal");
  }
  std::sort(off_diagonal.begin(), off_diagonal.end(),
            [](const UpperEntry& a, const UpperEntry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

  row_ptr_.assign(n + 1, 0);
  for (std::size_t k = 0; k < off_diagonal.size(); ++k) {
    const auto& e = off_diagonal[k];
    if (!cols_.empty() && k > 0 && off_diagonal[k - 1].row == e.row && off_diagonal[k - 1].col == e.col) {
      values_.back() += e.value;
      continue;
    }
    cols_.push_back(e.col);
    values_.push_back(e.value);
    ++row_ptr_[e.row + 1];
  }
  for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] += row_ptr_[i];
}

double SymmetricSparseMatrix::entry(std::size_t i, std::size_t j) const {
  if (i == j) return diagonal_[i];
  if (i > j) std::swap(i, j);
  const auto cols = upper_columns(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + static_cast<std::size_t>(it - cols.begin())];
}

std::span<const std::size_t> SymmetricSparseMatrix::upper_columns(std::size_t i) const {
  return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::span<const double> SymmetricSparseMatrix::upper_values(std::size_t i) const {
  return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

void SymmetricSparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) {
    fail(Errc::length_mismatch, kModule,
         "field length " + std::to_string(x.size()) + " does not match operator size " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) y[i] = diagonal_[i] * x[i];
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      acc += values_[k] * x[cols_[k]];
      y[cols_[k]] += values_[k] * x[i];
    }
    y[i] += acc;
  }
}

std::vector<double> SymmetricSparseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

namespace {
std::vector<double> absolute_row_sums(const SymmetricSparseMatrix& m) {
  std::vector<double> sums(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto cols = m.upper_columns(i);
    const auto vals = m.upper_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sums[i] += std::abs(vals[k]);
      sums[cols[k]] += std::abs(vals[k]);
    }
  }
  return sums;
}
}  // namespace

double SymmetricSparseMatrix::gershgorin_upper() const {
  const auto sums = absolute_row_sums(*this);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) best = std::max(best, diagonal_[i] + sums[i]);
  return best;
}

double SymmetricSparseMatrix::gershgorin_lower() const {
  const auto sums = absolute_row_sums(*this);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) best = std::min(best, diagonal_[i] - sums[i]);
  return best;
}

Eigen::SparseMatrix<double> SymmetricSparseMatrix::to_eigen_upper() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(size() + cols_.size());
  for (std::size_t i = 0; i < size(); ++i) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), diagonal_[i]);
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(cols_[k]), values_[k]);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

void SymmetricSparseMatrix::write_coordinate(std::ostream& out) const {
  for (std::size_t i = 0; i < size(); ++i) {
    out << i << ' ' << i << ' ' << format_double(diagonal_[i]) << '\n';
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out << i << ' ' << cols_[k] << ' ' << format_double(values_[k]) << '\n';
    }
  }
}

GridOperator::GridOperator(Domain domain, std::shared_ptr<const InteriorGrid> grid, SymmetricSparseMatrix matrix)
    : domain_(std::move(domain)), grid_(std::move(grid)), matrix_(std::move(matrix)) {}

GridOperator assemble_dirichlet_laplacian(const Domain& d, double h) {
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(d, h));
  const int n = grid->dimension();
  const double inv_h2 = 1.0 / (h * h);

  std::vector<double> diagonal(grid->size(), 2.0 * n * inv_h2);
  std::vector<UpperEntry> upper;
  upper.reserve(grid->size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < grid->size(); ++i) {
    for (int axis = 0; axis < n; ++axis) {
      auto site = grid->lattice(i);
      ++site[axis];
      if (const auto j = grid->index_of(site)) upper.push_back({i, *j, -inv_h2});
    }
  }
  return GridOperator(d, std::move(grid), SymmetricSparseMatrix(std::move(diagonal), std::move(upper)));
}

}  // namespace weyl_lab
