#pragma once

// Frequency-line objects: the odd spectral measure f(tau) = sgn(tau) e(x,x;tau^2)/2,
// its free counterpart g, mollified differences, the Tauberian
// hypothesis/conclusion checker and the smoothed wave trace.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "weyl_lab/geometry.hpp"
#include "weyl_lab/spectrum.hpp"

namespace weyl_lab {

/// Odd primitive of an even measure on the frequency line, either atomic
/// (atoms at +-tau_j with weight w_j each) or absolutely continuous with the
/// free density n C_n |tau|^{n-1} / 2. The measure lives on |tau| <= cutoff.
class SpectralMeasure {
 public:
  static SpectralMeasure atomic(std::vector<double> positions, std::vector<double> weights, double cutoff, int n = 0);
  static SpectralMeasure free(int n, double cutoff = std::numeric_limits<double>::infinity());

  bool is_atomic() const noexcept { return atomic_; }
  /// Ambient dimension; 0 when an atomic measure was built without one.
  int dimension() const noexcept { return n_; }
  double cutoff() const noexcept { return cutoff_; }
  /// Positive atom positions, ascending.
  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Density of the continuous part at tau (0 beyond the cutoff or for atomic measures).
  double density(double tau) const;
  /// f(tau): odd, f(0) = 0, closed condition at atoms.
  double primitive(double tau) const;
  /// Total weight of the atoms sitting at |tau| (relative tolerance 1e-12).
  double jump(double tau) const;

 private:
  SpectralMeasure() = default;

  bool atomic_ = true;
  int n_ = 0;
  double weyl_constant_ = 0.0;
  double cutoff_ = 0.0;
  std::vector<double> positions_;
  std::vector<double> weights_;
  std::vector<double> prefix_;
};

/// Atoms at sqrt(lambda_j) with weight u_j(x)^2 / 2 for every eigenvalue
/// within the trusted cutoff; the measure's cutoff is sqrt(trusted cutoff).
SpectralMeasure spectral_measure_at(const Spectrum& s, const Point& x);

/// g(tau) = sgn(tau) C_n |tau|^n / 2.
SpectralMeasure free_measure(int n, double cutoff = std::numeric_limits<double>::infinity());

/// phi_a(tau) = a phi(a tau), phi(t) = (3 / (8 pi)) (sin(t/4) / (t/4))^4.
/// phi >= 0, unit mass, Fourier transform supported in [-1, 1].
class Mollifier {
 public:
  explicit Mollifier(double a);
  double scale() const noexcept { return a_; }
  double operator()(double tau) const;
  static double base(double t);

 private:
  double a_;
};

/// Samples (df - dg) * phi_a on the grid. Both measures are restricted to
/// the common support |sigma| <= T, T = min of the cutoffs. Throws
/// Error(grid_exceeds_resolution) when max |tau| > T - 5/a.
std::vector<double> mollify_difference(const SpectralMeasure& f, const SpectralMeasure& g, const Mollifier& m,
                                       std::span<const double> taus);

struct TauberianRow {
  double tau = 0.0;
  double f = 0.0;
  double g = 0.0;
  double conv = 0.0;
  /// |f - g|
  double bound_lhs = 0.0;
  /// M1 a (|tau| + c1)^{n-1} + M2 (|tau| + a) (|tau| + c2)^p, without C.
  double bound_rhs = 0.0;
};

struct TauberianReport {
  int n = 2;
  double p = 0.0;
  double a = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double c = 0.0;
  std::vector<TauberianRow> rows;
  /// Hypothesis violations found while checking; empty when all hold.
  std::vector<std::string> violations;
};

/// Empirical M1 = sup |dg/dtau| / (|tau| + c1)^{n-1}, M2 = sup |conv| / (|tau| + c2)^p
/// and the smallest C with |f - g| <= C (M1 a (|tau|+c1)^{n-1} + M2 (|tau|+a)(|tau|+c2)^p)
/// on the grid.
TauberianReport tauberian_check(const SpectralMeasure& f, const SpectralMeasure& g, const Mollifier& m, double p,
                                double c1, double c2, std::span<const double> taus);

/// Re-evaluates the conclusion with frozen (M1, M2, C) on a new grid.
/// Returns the rows and counts points where |f - g| > C * rhs.
struct ConclusionCheck {
  std::vector<TauberianRow> rows;
  std::size_t violations = 0;
};
ConclusionCheck check_conclusion(const SpectralMeasure& f, const SpectralMeasure& g, const Mollifier& m,
                                 const TauberianReport& frozen, std::span<const double> taus);

/// a = 1 / min(s(x), d0).
double default_mollifier_scale(const Domain& d, const Point& x, double d0);

enum class TraceWindow { gaussian, sharp };

/// T(t) = sum_j w(lambda_j) cos(t sqrt(lambda_j)) with w = exp(-lambda/lambda_c)
/// (gaussian) or the indicator of lambda <= lambda_c (sharp). Throws
/// Error(window_exceeds_cutoff) when lambda_c > trusted cutoff / 4.
std::vector<double> wave_trace(const Spectrum& s, double lambda_c, std::span<const double> ts,
                               TraceWindow window = TraceWindow::gaussian);

struct Peak {
  double t = 0.0;
  double height = 0.0;
};

/// Local maxima of the samples (endpoints included) whose topographic
/// prominence, divided by max - min of the samples, is at least `prominence`.
/// Interior peaks are refined by a three-point parabola.
std::vector<Peak> find_peaks(std::span<const double> ts, std::span<const double> values, double prominence);

}  // namespace weyl_lab
