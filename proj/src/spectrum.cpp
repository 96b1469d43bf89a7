#include "weyl_lab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "weyl_lab/eigensolve.hpp"
#include "weyl_lab/error.hpp"
#include "weyl_lab/format.hpp"

namespace weyl_lab {

namespace {
constexpr std::string_view kModule = "eigensolve";
}

void Eigenbasis::values(const Point& x, std::span<double> out) const {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = value(j, x);
}

GridEigenbasis::GridEigenbasis(std::shared_ptr<const InteriorGrid> grid, Eigen::MatrixXd coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
  if (static_cast<std::size_t>(coefficients_.rows()) != grid_->size()) {
    fail(Errc::length_mismatch, kModule, "eigenvector length does not match the interior grid");
  }
}

GridEigenbasis::Stencil GridEigenbasis::stencil(const Point& x) const {
  const int n = grid_->dimension();
  const double h = grid_->h();
  std::array<std::int64_t, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double t = x[k] / h;
    const double fl = std::floor(t);
    base[k] = static_cast<std::int64_t>(fl);
    frac[k] = t - fl;
    // Snap round-off so that lattice points interpolate exactly.
    if (frac[k] < 1e-12) frac[k] = 0.0;
    if (frac[k] > 1.0 - 1e-12) {
      frac[k] = 0.0;
      ++base[k];
    }
  }
  Stencil st;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    InteriorGrid::Lattice site{0, 0, 0};
    for (int k = 0; k < n; ++k) {
      const bool upper = (corner >> k) & 1;
      w *= upper ? frac[k] : 1.0 - frac[k];
      site[k] = base[k] + (upper ? 1 : 0);
    }
    if (w == 0.0) continue;
    if (const auto idx = grid_->index_of(site)) {
      st.index[st.count] = *idx;
      st.weight[st.count] = w;
      ++st.count;
    }
  }
  return st;
}

double GridEigenbasis::value(std::size_t j, const Point& x) const {
  const auto st = stencil(x);
  double v = 0.0;
  for (int c = 0; c < st.count; ++c) v += st.weight[c] * coefficients_(static_cast<Eigen::Index>(st.index[c]), static_cast<Eigen::Index>(j));
  return v;
}

void GridEigenbasis::values(const Point& x, std::span<double> out) const {
  const auto st = stencil(x);
  for (std::size_t j = 0; j < out.size(); ++j) {
    double v = 0.0;
    for (int c = 0; c < st.count; ++c) v += st.weight[c] * coefficients_(static_cast<Eigen::Index>(st.index[c]), static_cast<Eigen::Index>(j));
    out[j] = v;
  }
}

Spectrum Spectrum::discrete(Domain domain, double h, std::vector<double> eigenvalues,
                            std::shared_ptr<const GridEigenbasis> basis, std::vector<double> residuals) {
  Spectrum s;
  s.source_ = SpectrumSource::discrete;
  s.domain_ = std::move(domain);
  s.h_ = h;
  s.eigenvalues_ = std::move(eigenvalues);
  s.residuals_ = std::move(residuals);
  s.basis_ = std::move(basis);
  s.validate();
  s.lambda_max_ = s.eigenvalues_.back();
  s.trusted_cutoff_ = resolved_cutoff(s);
  return s;
}

Spectrum Spectrum::analytic(Domain domain, std::string oracle, std::vector<double> eigenvalues,
                            std::vector<ModeLabel> labels, std::shared_ptr<const Eigenbasis> basis, double lambda_max) {
  Spectrum s;
  s.source_ = SpectrumSource::analytic;
  s.domain_ = std::move(domain);
  s.oracle_ = std::move(oracle);
  s.eigenvalues_ = std::move(eigenvalues);
  s.labels_ = std::move(labels);
  s.basis_ = std::move(basis);
  s.validate();
  s.lambda_max_ = lambda_max;
  s.trusted_cutoff_ = resolved_cutoff(s);
  return s;
}

void Spectrum::validate() const {
  if (eigenvalues_.empty()) fail(Errc::empty_spectrum, kModule, "spectrum has no eigenvalues");
  if (!(eigenvalues_.front() > 0.0)) fail(Errc::invalid_argument, kModule, "lambda_1 must be strictly positive");
  if (!std::is_sorted(eigenvalues_.begin(), eigenvalues_.end())) {
    fail(Errc::invalid_argument, kModule, "eigenvalues must be nondecreasing");
  }
  if (!basis_ || basis_->size() < eigenvalues_.size()) {
    fail(Errc::invalid_argument, kModule, "eigenbasis does not cover all eigenvalues");
  }
}

std::string Spectrum::tag() const {
  if (is_discrete()) return "discrete(h=" + format_double(h_) + ")";
  return "analytic(" + oracle_ + ")";
}

std::size_t Spectrum::count_at_most(double lambda) const {
  // Rounding slack so that lambda = 5 pi^2 counts both modes of that level.
  const double bound = lambda + kLevelTolerance * std::abs(lambda);
  return static_cast<std::size_t>(std::upper_bound(eigenvalues_.begin(), eigenvalues_.end(), bound) -
                                  eigenvalues_.begin());
}

const GridEigenbasis* Spectrum::grid_basis() const noexcept {
  return dynamic_cast<const GridEigenbasis*>(basis_.get());
}

void write_spectrum(std::ostream& out, std::span<const double> eigenvalues) {
  out << "j lambda\n";
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) out << (j + 1) << ' ' << format_double(eigenvalues[j]) << '\n';
}

std::vector<double> read_spectrum(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("j lambda", 0) != 0) {
    fail(Errc::io_error, kModule, "spectrum file must start with the header 'j lambda'");
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string index;
    std::string value;
    row >> index >> value;
    double v = 0.0;
    if (!parse_number(value, v)) fail(Errc::io_error, kModule, "malformed spectrum line: " + line);
    values.push_back(v);
  }
  return values;
}

void write_eigenfunction(std::ostream& out, const Spectrum& s, std::size_t j) {
  const auto* basis = s.grid_basis();
  if (basis == nullptr) fail(Errc::invalid_argument, kModule, "eigenfunction dumps require a discrete spectrum");
  const auto& grid = basis->grid();
  const int n = grid.dimension();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    for (int k = 0; k < n; ++k) out << format_double(p[k]) << ' ';
    out << format_double(basis->coefficients()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
  }
}

std::vector<double> read_eigenfunction(std::istream& in, const InteriorGrid& grid) {
  const int n = grid.dimension();
  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= grid.size()) fail(Errc::io_error, kModule, "eigenfunction dump has more rows than grid points");
    std::istringstream row(line);
    const Point expected = grid.point(i);
    for (int k = 0; k < n; ++k) {
      std::string tok;
      row >> tok;
      double c = 0.0;
      if (!parse_number(tok, c) || std::abs(c - expected[k]) > 1e-9 * std::max(1.0, std::abs(expected[k]))) {
        fail(Errc::io_error, kModule, "eigenfunction dump does not match the interior grid at row " + std::to_string(i));
      }
    }
    std::string tok;
    row >> tok;
    double v = 0.0;
    if (!parse_number(tok, v)) fail(Errc::io_error, kModule, "malformed eigenfunction value at row " + std::to_string(i));
    values.push_back(v);
    ++i;
  }
  if (values.size() != grid.size()) fail(Errc::io_error, kModule, "eigenfunction dump is shorter than the grid");
  return values;
}

}  // namespace weyl_lab
