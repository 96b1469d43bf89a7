#include <doctest.h>

#include <cmath>
#include <numbers>

#include "weyl_lab/bessel.hpp"
#include "weyl_lab/error.hpp"
#include "weyl_lab/oracles.hpp"
#include "weyl_lab/quadrature.hpp"

using namespace weyl_lab;

namespace {

constexpr double pi = std::numbers::pi;

std::size_t lattice_count(double a, double b, double lambda) {
  std::size_t n = 0;
  for (long m = 1; pi * pi * m * m / (a * a) <= lambda; ++m) {
    for (long k = 1; pi * pi * (m * m / (a * a) + k * k / (b * b)) <= lambda; ++k) ++n;
  }
  return n;
}

// Bisection in long double on std::cyl_bessel_j, bracketed near a guess.
long double bisect_zero(double nu, double lo, double hi) {
  long double a = lo;
  long double b = hi;
  long double fa = std::cyl_bessel_j(static_cast<long double>(nu), a);
  for (int i = 0; i < 200; ++i) {
    const long double m = 0.5L * (a + b);
    const long double fm = std::cyl_bessel_j(static_cast<long double>(nu), m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5L * (a + b);
}

}  // namespace

TEST_CASE("unit square to lambda = 100") {
  const auto s = rectangle_spectrum(1.0, 1.0, 100.0);
  REQUIRE(s.size() == 6);
  const double expect[] = {2, 5, 5, 8, 10, 10};
  for (std::size_t j = 0; j < 6; ++j) CHECK(s.eigenvalue(j) == doctest::Approx(expect[j] * pi * pi));
  CHECK(s.eigenvalue(0) == doctest::Approx(19.7392088));
}

TEST_CASE("pi x pi square to lambda = 5") {
  const auto s = rectangle_spectrum(pi, pi, 5.0);
  REQUIRE(s.size() == 3);
  CHECK(s.eigenvalue(0) == doctest::Approx(2.0));
  CHECK(s.eigenvalue(1) == doctest::Approx(5.0));
  CHECK(s.eigenvalue(2) == doctest::Approx(5.0));
}

TEST_CASE("interval spectra") {
  const auto s = interval_spectrum(pi, 10.0);
  REQUIRE(s.size() == 3);
  CHECK(s.eigenvalue(2) == doctest::Approx(9.0));
  const auto t = interval_spectrum(1.0, pi * pi + 1e-9);
  REQUIRE(t.size() == 1);
  CHECK(interval_spectrum(1.0, 100.0).size() == 3);
}

TEST_CASE("rectangle counts match brute-force lattice enumeration") {
  for (double lambda : {50.0, 1e3, 1e4, 1e5}) {
    CHECK(rectangle_spectrum(1.0, 1.0, lambda).size() == lattice_count(1.0, 1.0, lambda));
    CHECK(rectangle_spectrum(2.0, 1.0, lambda).size() == lattice_count(2.0, 1.0, lambda));
  }
}

TEST_CASE("3D box count") {
  std::size_t n = 0;
  const double lambda = 2000.0;
  for (int a = 1; a < 20; ++a)
    for (int b = 1; b < 20; ++b)
      for (int c = 1; c < 20; ++c) n += pi * pi * (a * a + b * b + c * c) <= lambda;
  CHECK(box_spectrum({1.0, 1.0, 1.0}, lambda).size() == n);
}

TEST_CASE("Bessel function values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, 2.404826)) < 1e-6);
  for (double nu : {0.0, 1.0, 2.0, 5.0, 0.5, 1.5}) {
    for (double x : {0.1, 1.0, 7.5, 11.9, 12.1, 30.0, 200.0, 900.0}) {
      CHECK(std::abs(bessel_j(nu, x) - std::cyl_bessel_j(nu, x)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(bessel_j(0.3, 1.0), Error);
}

TEST_CASE("Bessel zeros against long-double bisection") {
  CHECK(std::abs(bessel_zero(0, 1) - 2.4048255577) < 1e-8);
  CHECK(std::abs(bessel_zero(1, 1) - 3.8317059702) < 1e-8);
  CHECK(bessel_zero(0, 1) < bessel_zero(1, 1));
  CHECK(bessel_zero(1, 1) < bessel_zero(0, 2));
  for (int nu = 0; nu <= 6; ++nu) {
    for (int k = 1; k <= 5; ++k) {
      const double z = bessel_zero(nu, k);
      const auto ref = bisect_zero(nu, z - 0.1, z + 0.1);
      CHECK(std::abs(static_cast<long double>(z) - ref) < 1e-8L);
    }
  }
}

TEST_CASE("disk spectrum levels and multiplicity") {
  const auto s = disk_spectrum(1.0, 20.0);
  REQUIRE(s.size() >= 3);
  const double j01 = bessel_zero(0, 1);
  const double j11 = bessel_zero(1, 1);
  CHECK(s.eigenvalue(0) == doctest::Approx(j01 * j01));
  CHECK(s.eigenvalue(0) == doctest::Approx(5.7832).epsilon(1e-4));
  CHECK(s.eigenvalue(1) == doctest::Approx(j11 * j11));
  CHECK(s.eigenvalue(2) == doctest::Approx(j11 * j11));
  CHECK(s.eigenvalue(1) == doctest::Approx(14.682).epsilon(1e-4));

  const auto big = disk_spectrum(2.0, 5.0);
  for (std::size_t j = 0; j < big.size(); ++j) CHECK(big.eigenvalue(j) == doctest::Approx(s.eigenvalue(j) / 4.0));
}

TEST_CASE("disk eigenfunction normalisation") {
  const double z = bessel_zero(2, 1);
  CHECK(disk_mode_norm_closed_form(2, z, 1.0) > 0.0);
  const auto s = disk_spectrum(1.0, 60.0);
  // Polar quadrature of u_j^2 and u_0 u_j over the unit disk.
  const auto& rule = gauss_legendre(40);
  for (std::size_t j = 0; j < s.size(); ++j) {
    double norm = 0.0;
    double cross = 0.0;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
      const double r = 0.5 * (rule.nodes[a] + 1.0);
      for (int b = 0; b < 128; ++b) {
        const double th = 2.0 * pi * (b + 0.5) / 128.0;
        const Point x{r * std::cos(th), r * std::sin(th), 0.0};
        const double w = 0.5 * rule.weights[a] * r * 2.0 * pi / 128.0;
        const double u = s.eigenfunction(j, x);
        norm += w * u * u;
        cross += w * u * s.eigenfunction(0, x);
      }
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    if (j > 0) CHECK(std::abs(cross) < 1e-6);
  }
}

TEST_CASE("square eigenfunctions are orthonormal") {
  const auto s = rectangle_spectrum(1.0, 1.0, 200.0);
  const std::size_t q = 64;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      double sum = 0.0;
      for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b) {
          const Point x{(a + 0.5) / q, (b + 0.5) / q, 0.0};
          sum += s.eigenfunction(i, x) * s.eigenfunction(j, x);
        }
      CHECK(sum / (q * q) == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("analytic dispatch rejects shapes without a closed form") {
  CHECK_THROWS_AS(analytic_spectrum(Domain::l_shape(), 100.0), Error);
  CHECK(analytic_spectrum(Domain::disk(1.0), 20.0).size() == disk_spectrum(1.0, 20.0).size());
}
