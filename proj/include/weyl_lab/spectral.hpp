#pragma once

// Spectral function, counting function, free term and the Weyl-law sweeps.
// Flat metric throughout, so all volume and metric factors are 1.

#include <cstddef>
#include <span>
#include <vector>

#include "weyl_lab/geometry.hpp"
#include "weyl_lab/spectrum.hpp"

namespace weyl_lab {

struct FreeTerm {
  int n = 2;
  double unit_ball_volume = 0.0;
  /// (2 pi)^{-n} * unit_ball_volume.
  double weyl_constant = 0.0;
};

double unit_ball_volume(int n);
/// Throws Error(invalid_argument) unless 1 <= n <= 3.
FreeTerm free_term(int n);

/// N(lambda) = #{j : lambda_j <= lambda}. Throws Error(beyond_cutoff) when
/// lambda exceeds the spectrum's trusted cutoff.
std::size_t counting(const Spectrum& s, double lambda);

/// e(x, y; lambda) = sum over lambda_j <= lambda of u_j(x) u_j(y).
/// Throws Error(point_outside_domain) or Error(beyond_cutoff).
double spectral_function(const Spectrum& s, const Point& x, const Point& y, double lambda);

/// e0(0, lambda) = C_n lambda^{n/2}.
double free_term_diag(int n, double lambda);

/// e0(x, lambda) = (2 pi)^{-n/2} (tau/|x|)^{n/2} J_{n/2}(tau |x|), tau = sqrt(lambda).
/// Evaluated through J_nu(z)/z^nu so the limit |x| -> 0 is continuous.
double free_term_offdiag(int n, const Point& displacement, double lambda);

/// Direct polar tensor Gauss-Legendre quadrature of
/// (2 pi)^{-2} * integral over |xi| < sqrt(lambda) of cos(x . xi) d xi (n = 2).
/// Independent of the Bessel path; the cross-check for free_term_offdiag.
double free_term_offdiag_quadrature(const Point& displacement, double lambda, std::size_t panels = 48);

/// r = |e(x,x;lambda) - e0(0,lambda)| (1 + s(x) sqrt(lambda)) / lambda^{n/2},
/// with s the distance to the boundary of d.
double local_weyl_residual(const Spectrum& s, const Domain& d, const Point& x, double lambda);

/// Cell centres of an m^n grid over the bounding box that lie inside d.
std::vector<Point> interior_sample_points(const Domain& d, std::size_t m);

struct LocalWeylRow {
  Point x;
  double s = 0.0;
  double lambda = 0.0;
  double e_diag = 0.0;
  double e0 = 0.0;
  double residual = 0.0;
};

struct LocalWeylSweep {
  /// Point-major, lambda-minor.
  std::vector<LocalWeylRow> rows;
  double sup_residual = 0.0;
  double median_residual = 0.0;
  /// sup over x of max_lambda r(x, .) divided by its median over x.
  double pointwise_sup_ratio = 0.0;
  /// max |e - e0| / lambda^{n/2} over rows with s sqrt(lambda) <= 1.
  double near_boundary_constant = 0.0;
  /// max r over rows with s sqrt(lambda) > 1.
  double interior_constant = 0.0;
  /// sup of e(x,x;lambda) / lambda^{n/2}.
  double diagonal_sup = 0.0;
  double min_e_diag = 0.0;
  /// e(x,x;.) nondecreasing along every point's lambda sweep.
  bool monotone = true;
};

/// Evaluates the local Weyl residual on points x lambdas. lambdas must be
/// ascending and within the trusted cutoff.
LocalWeylSweep local_weyl_sweep(const Spectrum& s, const Domain& d, std::span<const Point> points,
                                std::span<const double> lambdas);

struct WeylSample {
  double lambda = 0.0;
  double count = 0.0;
  /// N(lambda) - C_n vol lambda^{n/2}.
  double remainder = 0.0;
  /// remainder / (lambda^{(n-1)/2} log lambda).
  double normalized = 0.0;
};

struct WeylFitReport {
  /// Leading coefficient of the joint fit N ~ A lambda^{n/2} + B lambda^{(n-1)/2}.
  double a = 0.0;
  double b = 0.0;
  /// Coefficient of the one-term least-squares fit N ~ A lambda^{n/2}.
  double a_single = 0.0;
  /// C_n vol(d).
  double target = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::vector<WeylSample> samples;
  double sup_normalized = 0.0;
};

/// Least-squares Weyl fit on `count` log-spaced samples of [lambda_lo, lambda_hi].
/// Requires lambda_1 < lambda_lo, 1 < lambda_lo < lambda_hi <= cutoff.
/// Throws Error(window_too_small) when fewer than 10 eigenvalues lie in
/// the window.
WeylFitReport weyl_fit(const Spectrum& s, const Domain& d, double lambda_lo, double lambda_hi, std::size_t count = 200);

struct TraceResult {
  double value = 0.0;
  /// |Q(q) - Q(q/2)| for the quadrature path, 0 for the exact discrete sum.
  double error_estimate = 0.0;
};

/// Integral of e(x,x;lambda) over d. Discrete spectra: sum_x e(x,x) h^n.
/// Analytic spectra: midpoint rule with q points per axis on the bounding
/// box (points outside d contribute 0).
TraceResult trace_counting(const Spectrum& s, const Domain& d, double lambda, std::size_t q = 512);

struct DiagonalBound {
  double sup = 0.0;
  Point arg_x;
  double arg_lambda = 0.0;
  double min_e = 0.0;
};

/// sup of e(x,x;lambda)/lambda^{n/2} over the product grid.
DiagonalBound diagonal_bound_check(const Spectrum& s, const Domain& d, std::span<const double> lambdas,
                                   std::span<const Point> points);

}  // namespace weyl_lab
