#include "weyl_lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "weyl_lab/bessel.hpp"
#include "weyl_lab/error.hpp"
#include "weyl_lab/format.hpp"
#include "weyl_lab/parallel.hpp"
#include "weyl_lab/quadrature.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "spectral";

void require_dimension(int n) {
  if (n < 1 || n > 3) fail(Errc::invalid_argument, kModule, "dimension must be 1, 2 or 3");
}

void require_within_cutoff(const Spectrum& s, double lambda) {
  if (std::isnan(lambda)) fail(Errc::invalid_argument, kModule, "lambda is NaN");
  if (lambda > s.trusted_cutoff() * (1.0 + 1e-12)) {
    fail(Errc::beyond_cutoff, kModule,
         "lambda = " + format_double(lambda) + " exceeds the trusted cutoff " + format_double(s.trusted_cutoff()));
  }
}

void require_in_closure(const Domain& d, const Point& x) {
  if (!d.in_closure(x)) fail(Errc::point_outside_domain, kModule, "point lies outside the domain closure");
}

// J_nu(z) / z^nu, continuous at z = 0.
double scaled_bessel(double nu, double z) {
  if (z < 1.0) {
    // sum_k (-1)^k (z/2)^{2k} / (2^nu k! Gamma(nu + k + 1))
    const double q = 0.25 * z * z;
    double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 40; ++k) {
      term *= -q / (k * (nu + k));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return bessel_j(nu, z) / std::pow(z, nu);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Prefix sums of u_j(x)^2 for the first `modes` eigenfunctions.
std::vector<double> squared_prefix(const Spectrum& s, const Point& x, std::size_t modes) {
  std::vector<double> vals(modes);
  s.basis().values(x, vals);
  std::vector<double> prefix(modes + 1, 0.0);
  for (std::size_t j = 0; j < modes; ++j) prefix[j + 1] = prefix[j] + vals[j] * vals[j];
  return prefix;
}

}  // namespace

double unit_ball_volume(int n) {
  require_dimension(n);
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

FreeTerm free_term(int n) {
  const double omega = unit_ball_volume(n);
  return FreeTerm{n, omega, omega / std::pow(2.0 * std::numbers::pi, n)};
}

std::size_t counting(const Spectrum& s, double lambda) {
  require_within_cutoff(s, lambda);
  return s.count_at_most(lambda);
}

double spectral_function(const Spectrum& s, const Point& x, const Point& y, double lambda) {
  require_in_closure(s.domain(), x);
  require_in_closure(s.domain(), y);
  const std::size_t modes = counting(s, lambda);
  if (modes == 0) return 0.0;
  std::vector<double> ux(modes);
  std::vector<double> uy(modes);
  s.basis().values(x, ux);
  s.basis().values(y, uy);
  double e = 0.0;
  for (std::size_t j = 0; j < modes; ++j) e += ux[j] * uy[j];
  return e;
}

double free_term_diag(int n, double lambda) {
  if (!(lambda >= 0.0)) fail(Errc::invalid_argument, kModule, "lambda must be nonnegative");
  return free_term(n).weyl_constant * std::pow(lambda, 0.5 * n);
}

double free_term_offdiag(int n, const Point& displacement, double lambda) {
  require_dimension(n);
  if (!(lambda >= 0.0)) fail(Errc::invalid_argument, kModule, "lambda must be nonnegative");
  double r2 = 0.0;
  for (int k = 0; k < n; ++k) r2 += displacement[k] * displacement[k];
  const double tau = std::sqrt(lambda);
  const double nu = 0.5 * n;
  // (2 pi)^{-n/2} (tau/r)^{nu} J_nu(tau r) = (2 pi)^{-n/2} tau^n J_nu(z)/z^nu.
  return std::pow(2.0 * std::numbers::pi, -nu) * std::pow(tau, n) * scaled_bessel(nu, tau * std::sqrt(r2));
}

double free_term_offdiag_quadrature(const Point& displacement, double lambda, std::size_t panels) {
  if (!(lambda >= 0.0)) fail(Errc::invalid_argument, kModule, "lambda must be nonnegative");
  if (panels == 0) fail(Errc::invalid_argument, kModule, "quadrature needs at least one panel");
  const double tau = std::sqrt(lambda);
  const double two_pi = 2.0 * std::numbers::pi;
  const GaussRule& rule = gauss_legendre(16);
  double total = 0.0;
  for (std::size_t pr = 0; pr < panels; ++pr) {
    const double r0 = tau * static_cast<double>(pr) / static_cast<double>(panels);
    const double r1 = tau * static_cast<double>(pr + 1) / static_cast<double>(panels);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double rho = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * rule.nodes[i];
      const double wr = 0.5 * (r1 - r0) * rule.weights[i];
      double ring = 0.0;
      for (std::size_t pt = 0; pt < 2 * panels; ++pt) {
        const double t0 = two_pi * static_cast<double>(pt) / static_cast<double>(2 * panels);
        const double t1 = two_pi * static_cast<double>(pt + 1) / static_cast<double>(2 * panels);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double theta = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * rule.nodes[k];
          const double phase = rho * (displacement.x * std::cos(theta) + displacement.y * std::sin(theta));
          ring += 0.5 * (t1 - t0) * rule.weights[k] * std::cos(phase);
        }
      }
      total += wr * rho * ring;
    }
  }
  return total / (two_pi * two_pi);
}

double local_weyl_residual(const Spectrum& s, const Domain& d, const Point& x, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, kModule, "lambda must be positive");
  const int n = d.dimension();
  const double e = spectral_function(s, x, x, lambda);
  const double dist = d.boundary_distance(x);
  return std::abs(e - free_term_diag(n, lambda)) * (1.0 + dist * std::sqrt(lambda)) / std::pow(lambda, 0.5 * n);
}

std::vector<Point> interior_sample_points(const Domain& d, std::size_t m) {
  if (m == 0) fail(Errc::invalid_argument, kModule, "sample grid needs at least one cell per axis");
  const int n = d.dimension();
  const BoundingBox box = d.bounds();
  std::vector<Point> out;
  const std::size_t mz = n > 2 ? m : 1;
  const std::size_t my = n > 1 ? m : 1;
  for (std::size_t k = 0; k < mz; ++k) {
    for (std::size_t j = 0; j < my; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        Point p;
        const std::size_t idx[3] = {i, j, k};
        for (int a = 0; a < n; ++a) {
          const double lo = box.lo[a];
          const double hi = box.hi[a];
          p[a] = lo + (hi - lo) * (static_cast<double>(idx[a]) + 0.5) / static_cast<double>(m);
        }
        if (d.contains(p)) out.push_back(p);
      }
    }
  }
  return out;
}

LocalWeylSweep local_weyl_sweep(const Spectrum& s, const Domain& d, std::span<const Point> points,
                                std::span<const double> lambdas) {
  if (points.empty() || lambdas.empty()) fail(Errc::invalid_argument, kModule, "local Weyl sweep needs points and lambdas");
  if (!std::is_sorted(lambdas.begin(), lambdas.end()) || !(lambdas.front() > 0.0)) {
    fail(Errc::invalid_argument, kModule, "sweep lambdas must be positive and ascending");
  }
  require_within_cutoff(s, lambdas.back());
  for (const auto& x : points) require_in_closure(d, x);

  const int n = d.dimension();
  const std::size_t modes = s.count_at_most(lambdas.back());
  std::vector<std::size_t> counts(lambdas.size());
  for (std::size_t l = 0; l < lambdas.size(); ++l) counts[l] = s.count_at_most(lambdas[l]);

  LocalWeylSweep out;
  out.rows.resize(points.size() * lambdas.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& x = points[i];
    const double dist = d.boundary_distance(x);
    const auto prefix = squared_prefix(s, x, modes);
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const double lambda = lambdas[l];
      LocalWeylRow& row = out.rows[i * lambdas.size() + l];
      row.x = x;
      row.s = dist;
      row.lambda = lambda;
      row.e_diag = prefix[counts[l]];
      row.e0 = free_term_diag(n, lambda);
      row.residual = std::abs(row.e_diag - row.e0) * (1.0 + dist * std::sqrt(lambda)) / std::pow(lambda, 0.5 * n);
    }
  });

  std::vector<double> residuals;
  residuals.reserve(out.rows.size());
  std::vector<double> point_sup(points.size(), 0.0);
  out.min_e_diag = out.rows.front().e_diag;
  for (std::size_t idx = 0; idx < out.rows.size(); ++idx) {
    const auto& row = out.rows[idx];
    residuals.push_back(row.residual);
    out.sup_residual = std::max(out.sup_residual, row.residual);
    point_sup[idx / lambdas.size()] = std::max(point_sup[idx / lambdas.size()], row.residual);
    const double scale = std::pow(row.lambda, 0.5 * n);
    out.diagonal_sup = std::max(out.diagonal_sup, row.e_diag / scale);
    out.min_e_diag = std::min(out.min_e_diag, row.e_diag);
    if (row.s * std::sqrt(row.lambda) <= 1.0) {
      out.near_boundary_constant = std::max(out.near_boundary_constant, std::abs(row.e_diag - row.e0) / scale);
    } else {
      out.interior_constant = std::max(out.interior_constant, row.residual);
    }
    if (idx % lambdas.size() != 0 && row.e_diag < out.rows[idx - 1].e_diag) out.monotone = false;
  }
  out.median_residual = median_of(residuals);
  const double point_median = median_of(point_sup);
  out.pointwise_sup_ratio = point_median > 0.0 ? *std::max_element(point_sup.begin(), point_sup.end()) / point_median : 0.0;
  return out;
}

WeylFitReport weyl_fit(const Spectrum& s, const Domain& d, double lambda_lo, double lambda_hi, std::size_t count) {
  if (count < 2) fail(Errc::invalid_argument, kModule, "Weyl fit needs at least two samples");
  if (!(lambda_lo < lambda_hi)) fail(Errc::invalid_argument, kModule, "Weyl fit window must satisfy lambda_lo < lambda_hi");
  if (!(lambda_lo > s.eigenvalue(0)) || !(lambda_lo > 1.0)) {
    fail(Errc::invalid_argument, kModule, "Weyl fit window must start above lambda_1 and above 1");
  }
  require_within_cutoff(s, lambda_hi);
  const std::size_t inside = s.count_at_most(lambda_hi) - s.count_at_most(lambda_lo);
  if (inside < 10) {
    fail(Errc::window_too_small, kModule, "only " + std::to_string(inside) + " eigenvalues in the fit window");
  }

  const int n = d.dimension();
  WeylFitReport rep;
  rep.lambda_lo = lambda_lo;
  rep.lambda_hi = lambda_hi;
  rep.target = free_term(n).weyl_constant * d.area();

  const auto lambdas = logspace(lambda_lo, lambda_hi, count);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(count), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(count));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double lambda = lambdas[i];
    const double lead = std::pow(lambda, 0.5 * n);
    const double sub = std::pow(lambda, 0.5 * (n - 1));
    const auto N = static_cast<double>(s.count_at_most(lambda));
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = lead;
    design(row, 1) = sub;
    rhs(row) = N;
    num += lead * N;
    den += lead * lead;

    WeylSample sample;
    sample.lambda = lambda;
    sample.count = N;
    sample.remainder = N - rep.target * lead;
    sample.normalized = sample.remainder / (sub * std::log(lambda));
    rep.sup_normalized = std::max(rep.sup_normalized, std::abs(sample.normalized));
    rep.samples.push_back(sample);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  rep.a = coef(0);
  rep.b = coef(1);
  rep.a_single = num / den;
  return rep;
}

TraceResult trace_counting(const Spectrum& s, const Domain& d, double lambda, std::size_t q) {
  const std::size_t modes = counting(s, lambda);
  if (modes == 0) return {};
  const int n = d.dimension();

  if (const auto* grid_basis = s.grid_basis()) {
    const auto& c = grid_basis->coefficients();
    const double cell = std::pow(grid_basis->grid().h(), n);
    return {c.leftCols(static_cast<Eigen::Index>(modes)).squaredNorm() * cell, 0.0};
  }

  if (q < 2) fail(Errc::invalid_argument, kModule, "trace quadrature needs at least 2 points per axis");
  const BoundingBox box = d.bounds();
  auto midpoint_rule = [&](std::size_t m) {
    std::array<double, 3> step{1.0, 1.0, 1.0};
    double cell = 1.0;
    for (int a = 0; a < n; ++a) {
      step[a] = (box.hi[a] - box.lo[a]) / static_cast<double>(m);
      cell *= step[a];
    }
    const std::size_t my = n > 1 ? m : 1;
    const std::size_t mz = n > 2 ? m : 1;
    // One slab per outermost index; summed in index order afterwards.
    const std::size_t slabs = n == 1 ? 1 : (n == 2 ? my : mz);
    std::vector<double> partial(slabs, 0.0);
    parallel_for(slabs, [&](std::size_t outer) {
      std::vector<double> vals(modes);
      double acc = 0.0;
      const std::size_t inner_y = n == 3 ? my : 1;
      for (std::size_t j = 0; j < inner_y; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
          Point p;
          p.x = box.lo.x + (static_cast<double>(i) + 0.5) * step[0];
          if (n == 2) p.y = box.lo.y + (static_cast<double>(outer) + 0.5) * step[1];
          if (n == 3) {
            p.y = box.lo.y + (static_cast<double>(j) + 0.5) * step[1];
            p.z = box.lo.z + (static_cast<double>(outer) + 0.5) * step[2];
          }
          if (!d.contains(p)) continue;
          s.basis().values(p, vals);
          for (double v : vals) acc += v * v;
        }
      }
      partial[outer] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total * cell;
  };
  const double fine = midpoint_rule(q);
  const double coarse = midpoint_rule(std::max<std::size_t>(1, q / 2));
  return {fine, std::abs(fine - coarse)};
}

DiagonalBound diagonal_bound_check(const Spectrum& s, const Domain& d, std::span<const double> lambdas,
                                   std::span<const Point> points) {
  const auto sweep = local_weyl_sweep(s, d, points, lambdas);
  DiagonalBound out;
  out.min_e = sweep.min_e_diag;
  const int n = d.dimension();
  for (const auto& row : sweep.rows) {
    const double v = row.e_diag / std::pow(row.lambda, 0.5 * n);
    if (v > out.sup) {
      out.sup = v;
      out.arg_x = row.x;
      out.arg_lambda = row.lambda;
    }
  }
  return out;
}

}  // namespace weyl_lab
