#include "weyl_lab/tauberian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weyl_lab/error.hpp"
#include "weyl_lab/format.hpp"
#include "weyl_lab/parallel.hpp"
#include "weyl_lab/quadrature.hpp"
#include "weyl_lab/spectral.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "tauberian";
constexpr double kAtomTolerance = 1e-12;
constexpr std::size_t kConvolutionOrder = 20;

// Integral of density(sigma) phi_a(tau - sigma) over [lo, hi], panels no
// wider than 1/(2a).
double convolve_density(const SpectralMeasure& g, const Mollifier& m, double tau, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const double width = 0.5 / m.scale();
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  return integrate([&](double sigma) { return g.density(sigma) * m(tau - sigma); }, lo, hi, std::max<std::size_t>(panels, 1),
                   kConvolutionOrder);
}

double mollified(const SpectralMeasure& mu, const Mollifier& m, double tau, double support) {
  double v = 0.0;
  if (mu.is_atomic()) {
    const auto pos = mu.positions();
    const auto w = mu.weights();
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (pos[j] > support) break;
      v += w[j] * (m(tau - pos[j]) + m(tau + pos[j]));
    }
    return v;
  }
  std::vector<double> cuts{-support, support};
  if (std::abs(tau) < support) cuts.push_back(tau);
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) v += convolve_density(mu, m, tau, cuts[k], cuts[k + 1]);
  return v;
}

void check_grid(std::span<const double> taus) {
  if (taus.empty()) fail(Errc::invalid_argument, kModule, "tau grid is empty");
  for (double t : taus) {
    if (!std::isfinite(t)) fail(Errc::invalid_argument, kModule, "tau grid contains a non-finite value");
  }
}

}  // namespace

SpectralMeasure SpectralMeasure::atomic(std::vector<double> positions, std::vector<double> weights, double cutoff, int n) {
  if (positions.size() != weights.size()) fail(Errc::length_mismatch, kModule, "atom positions and weights differ in length");
  if (!(cutoff > 0.0)) fail(Errc::invalid_argument, kModule, "measure cutoff must be positive");
  if (!std::is_sorted(positions.begin(), positions.end())) {
    fail(Errc::invalid_argument, kModule, "atom positions must be ascending");
  }
  if (!positions.empty() && !(positions.front() >= 0.0)) {
    fail(Errc::invalid_argument, kModule, "atom positions must be nonnegative");
  }
  SpectralMeasure mu;
  mu.atomic_ = true;
  mu.n_ = n;
  mu.cutoff_ = cutoff;
  mu.positions_ = std::move(positions);
  mu.weights_ = std::move(weights);
  mu.prefix_.assign(mu.weights_.size() + 1, 0.0);
  for (std::size_t j = 0; j < mu.weights_.size(); ++j) mu.prefix_[j + 1] = mu.prefix_[j] + mu.weights_[j];
  return mu;
}

SpectralMeasure SpectralMeasure::free(int n, double cutoff) {
  if (!(cutoff > 0.0)) fail(Errc::invalid_argument, kModule, "measure cutoff must be positive");
  SpectralMeasure mu;
  mu.atomic_ = false;
  mu.n_ = n;
  mu.weyl_constant_ = free_term(n).weyl_constant;
  mu.cutoff_ = cutoff;
  return mu;
}

double SpectralMeasure::density(double tau) const {
  if (atomic_ || std::abs(tau) > cutoff_) return 0.0;
  return 0.5 * n_ * weyl_constant_ * std::pow(std::abs(tau), n_ - 1);
}

double SpectralMeasure::primitive(double tau) const {
  if (tau == 0.0) return 0.0;
  const double r = std::min(std::abs(tau), cutoff_);
  double v = 0.0;
  if (atomic_) {
    const auto k = static_cast<std::size_t>(std::upper_bound(positions_.begin(), positions_.end(), r) - positions_.begin());
    v = prefix_[k];
  } else {
    v = 0.5 * weyl_constant_ * std::pow(r, n_);
  }
  return tau < 0.0 ? -v : v;
}

double SpectralMeasure::jump(double tau) const {
  if (!atomic_) return 0.0;
  const double r = std::abs(tau);
  double v = 0.0;
  for (std::size_t j = 0; j < positions_.size(); ++j) {
    if (std::abs(positions_[j] - r) <= kAtomTolerance * r) v += weights_[j];
  }
  return v;
}

SpectralMeasure spectral_measure_at(const Spectrum& s, const Point& x) {
  if (!s.domain().in_closure(x)) fail(Errc::point_outside_domain, kModule, "point lies outside the domain closure");
  const std::size_t modes = s.count_at_most(s.trusted_cutoff());
  std::vector<double> vals(modes);
  s.basis().values(x, vals);
  std::vector<double> positions(modes);
  std::vector<double> weights(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    positions[j] = std::sqrt(s.eigenvalue(j));
    weights[j] = 0.5 * vals[j] * vals[j];
  }
  return SpectralMeasure::atomic(std::move(positions), std::move(weights), std::sqrt(s.trusted_cutoff()),
                                 s.dimension());
}

SpectralMeasure free_measure(int n, double cutoff) { return SpectralMeasure::free(n, cutoff); }

Mollifier::Mollifier(double a) : a_(a) {
  if (!(std::isfinite(a) && a > 0.0)) fail(Errc::invalid_argument, kModule, "mollifier scale must be positive");
}

double Mollifier::base(double t) {
  constexpr double c = 3.0 / (8.0 * std::numbers::pi);
  const double u = 0.25 * t;
  if (std::abs(u) < 1e-4) {
    // sinc(u)^4 = 1 - 2u^2/3 + O(u^4)
    return c * (1.0 - 2.0 * u * u / 3.0);
  }
  const double s = std::sin(u) / u;
  return c * s * s * s * s;
}

double Mollifier::operator()(double tau) const { return a_ * base(a_ * tau); }

std::vector<double> mollify_difference(const SpectralMeasure& f, const SpectralMeasure& g, const Mollifier& m,
                                       std::span<const double> taus) {
  check_grid(taus);
  const double support = std::min(f.cutoff(), g.cutoff());
  if (!std::isfinite(support)) {
    fail(Errc::invalid_argument, kModule, "at least one measure must have a finite cutoff");
  }
  double reach = 0.0;
  for (double t : taus) reach = std::max(reach, std::abs(t));
  if (reach > support - 5.0 / m.scale()) {
    fail(Errc::grid_exceeds_resolution, kModule,
         "max |tau| = " + format_double(reach) + " exceeds the resolved range " + format_double(support - 5.0 / m.scale()));
  }
  std::vector<double> out(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    out[i] = mollified(f, m, taus[i], support) - mollified(g, m, taus[i], support);
  });
  return out;
}

namespace {

std::vector<TauberianRow> evaluate_rows(const SpectralMeasure& f, const SpectralMeasure& g, const TauberianReport& r,
                                        std::span<const double> taus, std::span<const double> conv) {
  std::vector<TauberianRow> rows(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double t = std::abs(taus[i]);
    TauberianRow& row = rows[i];
    row.tau = taus[i];
    row.f = f.primitive(taus[i]);
    row.g = g.primitive(taus[i]);
    row.conv = conv[i];
    row.bound_lhs = std::abs(row.f - row.g);
    row.bound_rhs = r.m1 * r.a * std::pow(t + r.c1, r.n - 1) + r.m2 * (t + r.a) * std::pow(t + r.c2, r.p);
  }
  return rows;
}

}  // namespace

TauberianReport tauberian_check(const SpectralMeasure& f, const SpectralMeasure& g, const Mollifier& m, double p,
                                double c1, double c2, std::span<const double> taus) {
  check_grid(taus);
  TauberianReport r;
  r.n = std::max(f.dimension(), g.dimension());
  if (r.n < 1 || r.n > 3) fail(Errc::invalid_argument, kModule, "measures carry no usable dimension");
  r.p = p;
  r.a = m.scale();
  r.c1 = c1;
  r.c2 = c2;

  if (!(p >= 0.0 && p <= r.n - 1)) r.violations.push_back("p = " + format_double(p) + " outside [0, n-1]");
  if (c1 < r.a) r.violations.push_back("c1 = " + format_double(c1) + " below a");
  if (c2 < r.a) r.violations.push_back("c2 = " + format_double(c2) + " below a");
  for (const SpectralMeasure* mu : {&f, &g}) {
    const char* name = mu == &f ? "f" : "g";
    if (mu->primitive(0.0) != 0.0) r.violations.push_back(std::string(name) + "(0) != 0");
    for (double w : mu->weights()) {
      if (w < 0.0) {
        r.violations.push_back(std::string(name) + " is not nondecreasing (negative atom weight)");
        break;
      }
    }
  }

  const auto conv = mollify_difference(f, g, m, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double t = std::abs(taus[i]);
    const double dg = std::abs(g.density(taus[i]) - f.density(taus[i]));
    r.m1 = std::max(r.m1, dg / std::pow(t + c1, r.n - 1));
    r.m2 = std::max(r.m2, std::abs(conv[i]) / std::pow(t + c2, p));
  }
  r.rows = evaluate_rows(f, g, r, taus, conv);
  for (const auto& row : r.rows) {
    if (row.bound_lhs == 0.0) continue;
    if (row.bound_rhs == 0.0) {
      r.violations.push_back("conclusion bound vanishes at tau = " + format_double(row.tau) + " while |f - g| > 0");
      r.c = std::numeric_limits<double>::infinity();
      continue;
    }
    r.c = std::max(r.c, row.bound_lhs / row.bound_rhs);
  }
  return r;
}

ConclusionCheck check_conclusion(const SpectralMeasure& f, const SpectralMeasure& g, const Mollifier& m,
                                 const TauberianReport& frozen, std::span<const double> taus) {
  check_grid(taus);
  ConclusionCheck out;
  out.rows = evaluate_rows(f, g, frozen, taus, mollify_difference(f, g, m, taus));
  for (const auto& row : out.rows) {
    if (row.bound_lhs > frozen.c * row.bound_rhs) ++out.violations;
  }
  return out;
}

double default_mollifier_scale(const Domain& d, const Point& x, double d0) {
  if (!(d0 > 0.0)) fail(Errc::invalid_argument, kModule, "d0 must be positive");
  const double s = d.boundary_distance(x);
  const double r = std::min(s, d0);
  if (!(r > 0.0)) fail(Errc::invalid_argument, kModule, "mollifier scale undefined on the boundary");
  return 1.0 / r;
}

std::vector<double> wave_trace(const Spectrum& s, double lambda_c, std::span<const double> ts, TraceWindow window) {
  if (!(lambda_c > 0.0)) fail(Errc::invalid_argument, kModule, "lambda_c must be positive");
  if (lambda_c > 0.25 * s.trusted_cutoff()) {
    fail(Errc::window_exceeds_cutoff, kModule,
         "lambda_c = " + format_double(lambda_c) + " exceeds a quarter of the trusted cutoff " +
             format_double(s.trusted_cutoff()));
  }
  const std::size_t modes = s.count_at_most(window == TraceWindow::sharp ? lambda_c : s.trusted_cutoff());
  std::vector<double> freq(modes);
  std::vector<double> weight(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    freq[j] = std::sqrt(s.eigenvalue(j));
    weight[j] = window == TraceWindow::gaussian ? std::exp(-s.eigenvalue(j) / lambda_c) : 1.0;
  }
  std::vector<double> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const double t = std::abs(ts[i]);
    double v = 0.0;
    for (std::size_t j = 0; j < modes; ++j) v += weight[j] * std::cos(t * freq[j]);
    out[i] = v;
  });
  return out;
}

std::vector<Peak> find_peaks(std::span<const double> ts, std::span<const double> values, double prominence) {
  if (ts.size() != values.size()) fail(Errc::length_mismatch, kModule, "peak search needs one sample per t");
  std::vector<Peak> peaks;
  const std::size_t n = values.size();
  if (n == 0) return peaks;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double range = *hi_it - *lo_it;
  if (!(range > 0.0)) return peaks;

  for (std::size_t i = 0; i < n; ++i) {
    const double v = values[i];
    // Plateaus count once, at their left end.
    if (i > 0 && values[i - 1] >= v) continue;
    std::size_t right = i;
    while (right + 1 < n && values[right + 1] == v) ++right;
    if (right + 1 < n && values[right + 1] > v) continue;

    // Lowest point on each side before reaching strictly higher ground.
    double left_min = v;
    for (std::size_t k = i; k-- > 0;) {
      if (values[k] > v) {
        break;
      }
      left_min = std::min(left_min, values[k]);
    }
    double right_min = v;
    for (std::size_t k = right + 1; k < n; ++k) {
      if (values[k] > v) {
        break;
      }
      right_min = std::min(right_min, values[k]);
    }
    double base = std::max(left_min, right_min);
    if (i == 0) base = right_min;
    if (right == n - 1) base = left_min;
    if (i == 0 && right == n - 1) continue;
    if ((v - base) / range < prominence) continue;

    Peak pk{ts[i], v};
    if (i > 0 && right == i && i + 1 < n) {
      // Vertex of the parabola through the three samples.
      const double t0 = ts[i - 1], t1 = ts[i], t2 = ts[i + 1];
      const double y0 = values[i - 1], y1 = v, y2 = values[i + 1];
      const double d1 = (y1 - y0) / (t1 - t0);
      const double d2 = (y2 - y1) / (t2 - t1);
      const double curv = (d2 - d1) / (t2 - t0);
      if (curv < 0.0) {
        const double slope = d1 + curv * (t1 - t0);  // derivative at t1 of the interpolant
        const double shift = -slope / (2.0 * curv);
        if (std::abs(shift) <= std::max(t1 - t0, t2 - t1)) {
          pk.t = t1 + shift;
          pk.height = y1 + slope * shift + curv * shift * shift;
        }
      }
    }
    peaks.push_back(pk);
  }
  return peaks;
}

}  // namespace weyl_lab
