#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weyl_lab/error.hpp"
#include "weyl_lab/geometry.hpp"

using namespace weyl_lab;

TEST_CASE("area and diameter of the standard shapes") {
  CHECK(Domain::unit_square().area() == doctest::Approx(1.0));
  CHECK(Domain::disk(1.0).area() == doctest::Approx(std::numbers::pi));
  CHECK(Domain::l_shape().area() == doctest::Approx(0.75));
  CHECK(Domain::annulus(0.5, 1.0).area() == doctest::Approx(0.75 * std::numbers::pi));
  CHECK(Domain::rectangle(2.0, 1.0).area() == doctest::Approx(2.0));

  CHECK(Domain::unit_square().diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(Domain::disk(1.0).diameter() == doctest::Approx(2.0));
  CHECK(Domain::l_shape().diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(Domain::rectangle(2.0, 1.0).diameter() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("perimeter") {
  CHECK(Domain::unit_square().perimeter() == doctest::Approx(4.0));
  CHECK(Domain::disk(1.0).perimeter() == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(Domain::l_shape().perimeter() == doctest::Approx(4.0));
}

TEST_CASE("boundary distance on the unit square") {
  const Domain sq = Domain::unit_square();
  CHECK(sq.boundary_distance({0.5, 0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(sq.boundary_distance({0.0, 0.3, 0.0}) == doctest::Approx(0.0));
  CHECK(sq.boundary_distance({0.25, 0.5, 0.0}) == doctest::Approx(0.25));
}

TEST_CASE("boundary distance of disk and L-shape") {
  CHECK(Domain::disk(1.0).boundary_distance({0.3, 0.4, 0.0}) == doctest::Approx(0.5));
  CHECK(Domain::annulus(0.5, 1.0).boundary_distance({0.7, 0.0, 0.0}) == doctest::Approx(0.2));
  // Re-entrant corner at (0.5, 0.5).
  CHECK(Domain::l_shape().boundary_distance({0.4, 0.4, 0.0}) == doctest::Approx(std::sqrt(0.02)));
}

TEST_CASE("open-set membership") {
  const Domain sq = Domain::unit_square();
  CHECK(sq.contains({0.5, 0.5, 0.0}));
  CHECK_FALSE(sq.contains({1.0, 0.5, 0.0}));
  CHECK(sq.in_closure({1.0, 0.5, 0.0}));
  CHECK_FALSE(Domain::l_shape().contains({0.75, 0.75, 0.0}));
  CHECK(Domain::l_shape().contains({0.25, 0.75, 0.0}));
  CHECK_FALSE(Domain::annulus(0.5, 1.0).contains({0.1, 0.1, 0.0}));
  CHECK_FALSE(Domain::disk(1.0).contains({1.0, 0.0, 0.0}));
}

TEST_CASE("interior lattice counts") {
  const auto one = interior_grid(Domain::unit_square(), 0.5);
  REQUIRE(one.size() == 1);
  CHECK(one.point(0).x == doctest::Approx(0.5));
  CHECK(one.point(0).y == doctest::Approx(0.5));
  CHECK(interior_grid(Domain::unit_square(), 1.0 / 8.0).size() == 49);
  CHECK(interior_grid(Domain::interval(1.0), 0.25).size() == 3);
  CHECK(interior_grid(Domain::box({1.0, 1.0, 1.0}), 0.25).size() == 27);
}

TEST_CASE("interior grid ordering is y-major and index_of round-trips") {
  const auto g = interior_grid(Domain::l_shape(), 1.0 / 16.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.index_of(g.lattice(i));
    REQUIRE(idx.has_value());
    CHECK(*idx == i);
    if (i > 0) {
      const auto& a = g.lattice(i - 1);
      const auto& b = g.lattice(i);
      CHECK((a[1] < b[1] || (a[1] == b[1] && a[0] < b[0])));
    }
  }
}

TEST_CASE("too coarse grid is an error") {
  CHECK_THROWS_AS(interior_grid(Domain::unit_square(), 1.0), Error);
  try {
    interior_grid(Domain::unit_square(), 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::grid_too_coarse);
  }
}

TEST_CASE("property: boundary distance lies in [0, diameter] and vanishes outside") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (const Domain& d : {Domain::unit_square(), Domain::disk(1.0), Domain::annulus(0.5, 1.0), Domain::l_shape(),
                          Domain::rectangle(2.0, 1.0)}) {
    for (int i = 0; i < 500; ++i) {
      const Point p{u(rng), u(rng), 0.0};
      if (!d.contains(p)) continue;
      const double s = d.boundary_distance(p);
      CHECK(s >= 0.0);
      CHECK(s <= d.diameter());
    }
  }
}

TEST_CASE("scaling a domain scales area quadratically") {
  CHECK(Domain::l_shape().scaled(2.0).area() == doctest::Approx(3.0));
  CHECK(Domain::disk(1.0).scaled(0.5).diameter() == doctest::Approx(1.0));
}
