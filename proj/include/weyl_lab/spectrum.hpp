#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "weyl_lab/geometry.hpp"

namespace weyl_lab {

/// Relative tolerance when comparing lambda against an eigenvalue level.
inline constexpr double kLevelTolerance = 1e-12;

enum class SpectrumSource { discrete, analytic };

/// Evaluates the j-th eigenfunction (0-based) at a point of the closed domain.
class Eigenbasis {
 public:
  virtual ~Eigenbasis() = default;
  virtual std::size_t size() const = 0;
  virtual double value(std::size_t j, const Point& x) const = 0;
  /// Values of the first out.size() eigenfunctions at x.
  virtual void values(const Point& x, std::span<double> out) const;
};

/// Discrete eigenfunctions as coefficient columns over the interior grid,
/// scaled so that sum_x u(x)^2 h^n = 1. Off-grid points use multilinear
/// interpolation with zero values on non-interior lattice sites.
class GridEigenbasis final : public Eigenbasis {
 public:
  GridEigenbasis(std::shared_ptr<const InteriorGrid> grid, Eigen::MatrixXd coefficients);

  std::size_t size() const override { return static_cast<std::size_t>(coefficients_.cols()); }
  double value(std::size_t j, const Point& x) const override;
  void values(const Point& x, std::span<double> out) const override;

  const InteriorGrid& grid() const noexcept { return *grid_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }

 private:
  struct Stencil {
    std::array<std::size_t, 8> index{};
    std::array<double, 8> weight{};
    int count = 0;
  };
  Stencil stencil(const Point& x) const;

  std::shared_ptr<const InteriorGrid> grid_;
  Eigen::MatrixXd coefficients_;
};

/// Degeneracy bookkeeping for closed-form spectra: (m, n[, l]) for boxes,
/// (nu, k) plus parity (0 = cos, 1 = sin) for disks.
struct ModeLabel {
  std::array<int, 3> index{};
  int parity = 0;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Ascending eigenvalues (with multiplicity) of the Dirichlet Laplacian on a
/// domain together with their L2-normalised eigenfunctions. Immutable.
class Spectrum {
 public:
  static Spectrum discrete(Domain domain, double h, std::vector<double> eigenvalues,
                           std::shared_ptr<const GridEigenbasis> basis, std::vector<double> residuals = {});
  static Spectrum analytic(Domain domain, std::string oracle, std::vector<double> eigenvalues,
                           std::vector<ModeLabel> labels, std::shared_ptr<const Eigenbasis> basis, double lambda_max);

  SpectrumSource source() const noexcept { return source_; }
  bool is_discrete() const noexcept { return source_ == SpectrumSource::discrete; }
  /// "discrete(h=...)" or "analytic(<oracle>)".
  std::string tag() const;

  const Domain& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return domain_.dimension(); }
  /// Mesh width for discrete spectra, 0 for analytic ones.
  double h() const noexcept { return h_; }

  std::size_t size() const noexcept { return eigenvalues_.size(); }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  double eigenvalue(std::size_t j) const { return eigenvalues_.at(j); }
  std::span<const double> residuals() const noexcept { return residuals_; }
  const std::vector<ModeLabel>& labels() const noexcept { return labels_; }

  /// Generation bound for analytic spectra; largest computed eigenvalue for
  /// discrete ones.
  double lambda_max() const noexcept { return lambda_max_; }
  /// Largest lambda downstream sweeps may use; see resolved_cutoff().
  double trusted_cutoff() const noexcept { return trusted_cutoff_; }

  /// Number of eigenvalues <= lambda (closed condition, relative slack
  /// kLevelTolerance), no cutoff check.
  std::size_t count_at_most(double lambda) const;

  const Eigenbasis& basis() const noexcept { return *basis_; }
  /// Typed access for discrete spectra; nullptr for analytic ones.
  const GridEigenbasis* grid_basis() const noexcept;
  double eigenfunction(std::size_t j, const Point& x) const { return basis_->value(j, x); }

 private:
  Spectrum() = default;
  void validate() const;

  SpectrumSource source_ = SpectrumSource::analytic;
  Domain domain_ = Domain::unit_square();
  std::string oracle_;
  double h_ = 0.0;
  std::vector<double> eigenvalues_;
  std::vector<double> residuals_;
  std::vector<ModeLabel> labels_;
  std::shared_ptr<const Eigenbasis> basis_;
  double lambda_max_ = 0.0;
  double trusted_cutoff_ = 0.0;
};

/// "j lambda" header, then "index eigenvalue" lines (1-based, 17 digits).
void write_spectrum(std::ostream& out, std::span<const double> eigenvalues);
std::vector<double> read_spectrum(std::istream& in);

/// "x y value" lines (one coordinate column per dimension) in grid order.
void write_eigenfunction(std::ostream& out, const Spectrum& s, std::size_t j);
/// Reads the value column of an eigenfunction dump; the coordinates must
/// match the grid points in order.
std::vector<double> read_eigenfunction(std::istream& in, const InteriorGrid& grid);

}  // namespace weyl_lab
