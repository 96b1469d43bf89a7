#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "weyl_lab/error.hpp"
#include "weyl_lab/oracles.hpp"
#include "weyl_lab/quadrature.hpp"
#include "weyl_lab/spectral.hpp"
#include "weyl_lab/tauberian.hpp"

using namespace weyl_lab;

namespace {

constexpr double pi = std::numbers::pi;
const Point centre{0.5, 0.5, 0.0};

// Eigenvalue-only spectra for trace tests.
class NullBasis final : public Eigenbasis {
 public:
  explicit NullBasis(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  double value(std::size_t, const Point&) const override { return 0.0; }

 private:
  std::size_t n_;
};

}  // namespace

TEST_CASE("spectral measure of the square at its centre") {
  const auto s = rectangle_spectrum(1.0, 1.0, 1e4);
  const auto f = spectral_measure_at(s, centre);
  CHECK(f.jump(std::sqrt(2.0 * pi * pi)) == doctest::Approx(2.0));
  CHECK(f.primitive(0.0) == 0.0);
  const double top = 99.0;
  CHECK(f.primitive(top) == doctest::Approx(spectral_function(s, centre, centre, top * top) / 2.0));
  for (double tau : linspace(0.1, 90.0, 100)) CHECK(f.primitive(-tau) == -f.primitive(tau));
}

TEST_CASE("jump matches the spectral function increment") {
  const auto s = rectangle_spectrum(1.0, 1.0, 2000.0);
  const Point x{0.3, 0.7, 0.0};
  const auto f = spectral_measure_at(s, x);
  for (std::size_t j = 0; j < 40; ++j) {
    const double lambda = s.eigenvalue(j);
    const double above = spectral_function(s, x, x, lambda * (1.0 + 1e-12));
    const double below = spectral_function(s, x, x, lambda * (1.0 - 1e-9));
    CHECK(std::abs(f.jump(std::sqrt(lambda)) - (above - below) / 2.0) < 1e-10);
  }
}

TEST_CASE("free measure") {
  const auto g = free_measure(2);
  CHECK(g.primitive(0.0) == 0.0);
  for (double tau : {0.5, 3.0, 40.0}) {
    CHECK(g.primitive(tau) == doctest::Approx(tau * tau / (8.0 * pi)));
    CHECK(g.primitive(-tau) == -g.primitive(tau));
    // |dg| <= M1 (|tau| + c1)^{n-1} with M1 = n C_n / 2.
    CHECK(g.density(tau) <= 2.0 * free_term(2).weyl_constant / 2.0 * (tau + 0.3) + 1e-15);
  }
}

TEST_CASE("property: mollifier mass and positivity") {
  for (double a : {0.5, 1.0, 2.0, 10.0}) {
    const Mollifier m(a);
    // The kernel decays like t^-4; integrate far out and add the tail bound.
    const double span = 4000.0 / a;
    const double mass = integrate([&](double t) { return m(t); }, -span, span, 16000, 16);
    CHECK(std::abs(mass - 1.0) < 1e-9);
    for (double t : linspace(-50.0, 50.0, 1001)) CHECK(m(t) >= 0.0);
  }
  CHECK(Mollifier::base(0.0) == doctest::Approx(3.0 / (8.0 * pi)));
}

TEST_CASE("convolution with a unit atom at the origin samples the mollifier") {
  const auto f = SpectralMeasure::atomic({0.0}, {0.5}, 100.0, 2);
  const auto zero = SpectralMeasure::atomic({}, {}, 100.0, 2);
  const Mollifier m(2.0);
  const auto taus = linspace(-20.0, 20.0, 81);
  const auto out = mollify_difference(f, zero, m, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) CHECK(out[i] == doctest::Approx(m(taus[i])).epsilon(1e-12));
}

TEST_CASE("mass preservation and translation") {
  const auto f = SpectralMeasure::atomic({3.0, 5.5}, {1.0, 0.25}, 1000.0, 2);
  const auto zero = SpectralMeasure::atomic({}, {}, 1000.0, 2);
  const Mollifier m(1.0);
  const auto taus = linspace(-600.0, 600.0, 60001);
  const auto out = mollify_difference(f, zero, m, taus);
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) mass += 0.5 * (out[i] + out[i + 1]) * (taus[i + 1] - taus[i]);
  CHECK(mass == doctest::Approx(2.5).epsilon(1e-6));

  // Narrow kernel, atoms far from the origin: mirror images are negligible.
  const Mollifier narrow(10.0);
  const auto p = SpectralMeasure::atomic({30.0, 35.5}, {1.0, 0.25}, 1000.0, 2);
  const auto q = SpectralMeasure::atomic({31.0, 36.5}, {1.0, 0.25}, 1000.0, 2);
  const auto a = mollify_difference(p, zero, narrow, linspace(25.0, 40.0, 151));
  const auto b = mollify_difference(q, zero, narrow, linspace(26.0, 41.0, 151));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("grid beyond the resolved support") {
  const auto f = SpectralMeasure::atomic({1.0}, {1.0}, 10.0, 2);
  const auto g = free_measure(2, 10.0);
  const double taus[] = {9.0};
  try {
    mollify_difference(f, g, Mollifier(1.0), taus);
    FAIL("expected grid_exceeds_resolution");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::grid_exceeds_resolution);
  }
}

TEST_CASE("identical measures give zero constants") {
  const auto g = free_measure(2, 100.0);
  const auto rep = tauberian_check(g, g, Mollifier(2.0), 0.0, 2.0, 2.0, linspace(1.0, 40.0, 100));
  CHECK(rep.m2 == 0.0);
  CHECK(rep.c == 0.0);
  CHECK(rep.violations.empty());
}

TEST_CASE("Tauberian check on the analytic square") {
  const auto s = rectangle_spectrum(1.0, 1.0, 1e4);
  const Domain d = Domain::unit_square();
  const double a = default_mollifier_scale(d, centre, d.diameter() / 4.0);
  CHECK(a == doctest::Approx(1.0 / (std::sqrt(2.0) / 4.0)));

  const auto f = spectral_measure_at(s, centre);
  const auto g = free_measure(2);
  const Mollifier m(2.0);
  const auto rep = tauberian_check(f, g, m, 0.0, 2.0, 2.0, linspace(1.0, 40.0, 400));
  CHECK(rep.n == 2);
  CHECK(std::isfinite(rep.m1));
  CHECK(std::isfinite(rep.m2));
  CHECK(std::isfinite(rep.c));
  CHECK(rep.violations.empty());

  const auto ext = check_conclusion(f, g, m, rep, linspace(1.0, 60.0, 400));
  CHECK(ext.violations == 0);

  // Doubling the tau range keeps M2 within 2x.
  const auto rep2 = tauberian_check(f, g, m, 0.0, 2.0, 2.0, linspace(1.0, 80.0, 400));
  CHECK(rep2.m2 / rep.m2 < 2.0);
  CHECK(rep.m2 / rep2.m2 < 2.0);
}

TEST_CASE("hypothesis violations are reported") {
  const auto g = free_measure(2, 100.0);
  const auto rep = tauberian_check(g, g, Mollifier(2.0), 5.0, 1.0, 2.0, linspace(1.0, 10.0, 10));
  CHECK(rep.violations.size() >= 2);
}

TEST_CASE("wave trace basics") {
  const auto s = rectangle_spectrum(1.0, 1.0, 2e4);
  const double lc = 2000.0;
  const double zero[] = {0.0};
  double expected = 0.0;
  for (double l : s.eigenvalues()) expected += std::exp(-l / lc);
  CHECK(wave_trace(s, lc, zero)[0] == doctest::Approx(expected));

  std::vector<double> ts;
  for (double t : linspace(0.0, 3.0, 301)) ts.push_back(t);
  for (double t : linspace(0.0, 3.0, 301)) ts.push_back(-t);
  const auto tr = wave_trace(s, lc, ts);
  for (std::size_t i = 0; i < 301; ++i) CHECK(tr[i] == tr[301 + i]);

  CHECK_THROWS_AS(wave_trace(s, 6000.0, ts), Error);
  const auto sharp = wave_trace(s, lc, zero, TraceWindow::sharp);
  CHECK(sharp[0] == doctest::Approx(static_cast<double>(counting(s, lc))));
}

TEST_CASE("property: wave trace is linear in the spectrum") {
  const auto a = rectangle_spectrum(1.0, 1.0, 4000.0);
  const auto b = disk_spectrum(1.0, 4000.0);
  std::vector<double> merged(a.eigenvalues().begin(), a.eigenvalues().end());
  merged.insert(merged.end(), b.eigenvalues().begin(), b.eigenvalues().end());
  std::sort(merged.begin(), merged.end());
  std::vector<ModeLabel> labels(merged.size());
  const auto both = Spectrum::analytic(Domain::unit_square(), "merged", merged, labels,
                                       std::make_shared<NullBasis>(merged.size()), 4000.0);
  const auto ts = linspace(0.0, 3.0, 61);
  const auto ta = wave_trace(a, 900.0, ts);
  const auto tb = wave_trace(b, 900.0, ts);
  const auto tm = wave_trace(both, 900.0, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(tm[i] == doctest::Approx(ta[i] + tb[i]).epsilon(1e-12));
}

TEST_CASE("peak finding") {
  const auto ts = linspace(0.0, 3.0, 3001);
  std::vector<double> v;
  for (double t : ts) v.push_back(std::cos(2.0 * pi * t));
  const auto peaks = find_peaks(ts, v, 0.05);
  REQUIRE(peaks.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(peaks[static_cast<std::size_t>(k)].t == doctest::Approx(k).scale(1.0).epsilon(1e-3));

  CHECK(find_peaks(ts, std::vector<double>(ts.size(), 0.0), 0.05).empty());

  const auto ts2 = linspace(0.0, 8.0, 8001);
  std::vector<double> w;
  for (double t : ts2) w.push_back(std::cos(t) + std::cos(3.0 * t));
  const auto p2 = find_peaks(ts2, w, 0.5);
  REQUIRE(p2.size() == 2);
  CHECK(p2[0].t == doctest::Approx(0.0).scale(1.0));
  CHECK(p2[1].t == doctest::Approx(2.0 * pi).epsilon(1e-4));
}
