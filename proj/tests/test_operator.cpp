#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "weyl_lab/geometry.hpp"
#include "weyl_lab/grid_operator.hpp"

using namespace weyl_lab;

namespace {

std::vector<double> unit(std::size_t n, std::size_t i) {
  std::vector<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("1D stencil on h = 1/4") {
  const auto op = assemble_dirichlet_laplacian(Domain::interval(1.0), 0.25);
  REQUIRE(op.size() == 3);
  const auto& m = op.matrix();
  for (std::size_t i = 0; i < 3; ++i) CHECK(m.entry(i, i) == doctest::Approx(32.0));
  CHECK(m.entry(0, 1) == doctest::Approx(-16.0));
  CHECK(m.entry(1, 0) == doctest::Approx(-16.0));
  CHECK(m.entry(1, 2) == doctest::Approx(-16.0));
  CHECK(m.entry(0, 2) == 0.0);

  const auto y = op.apply(std::vector<double>{1.0, 1.0, 1.0});
  CHECK(y[0] == doctest::Approx(16.0));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK(y[2] == doctest::Approx(16.0));
}

TEST_CASE("single interior point of the square") {
  const auto op = assemble_dirichlet_laplacian(Domain::unit_square(), 0.5);
  REQUIRE(op.size() == 1);
  CHECK(op.matrix().entry(0, 0) == doctest::Approx(16.0));
}

TEST_CASE("square h = 1/8 matches direct stencil enumeration") {
  const auto op = assemble_dirichlet_laplacian(Domain::unit_square(), 1.0 / 8.0);
  REQUIRE(op.size() == 49);
  const auto& g = op.grid();
  std::size_t adjacencies = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(op.matrix().entry(i, i) == doctest::Approx(256.0));
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const auto& a = g.lattice(i);
      const auto& b = g.lattice(j);
      const auto manhattan = std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]);
      const double expected = manhattan == 1 ? -64.0 : 0.0;
      CHECK(op.matrix().entry(i, j) == doctest::Approx(expected));
      if (manhattan == 1) ++adjacencies;
    }
  }
  // 2 * 7 * 6 undirected edges, counted both ways.
  CHECK(adjacencies == 2 * 2 * 7 * 6);
}

TEST_CASE("zero field maps to zero") {
  const auto op = assemble_dirichlet_laplacian(Domain::l_shape(), 1.0 / 16.0);
  const auto y = op.apply(std::vector<double>(op.size(), 0.0));
  for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("property: symmetry on unit fields") {
  for (const Domain& d : {Domain::unit_square(), Domain::disk(1.0), Domain::l_shape(), Domain::annulus(0.5, 1.0)}) {
    const auto op = assemble_dirichlet_laplacian(d, 1.0 / 8.0);
    const std::size_t n = op.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto ai = op.apply(unit(n, i));
      for (std::size_t j = i; j < n; ++j) {
        const auto aj = op.apply(unit(n, j));
        CHECK(dot(ai, unit(n, j)) == doctest::Approx(dot(aj, unit(n, i))));
      }
    }
  }
}

TEST_CASE("property: positivity on random fields") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (const Domain& d : {Domain::unit_square(), Domain::rectangle(2.0, 1.0), Domain::disk(1.0),
                          Domain::annulus(0.5, 1.0), Domain::l_shape(), Domain::interval(1.0)}) {
    const auto op = assemble_dirichlet_laplacian(d, 1.0 / 16.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> f(op.size());
      for (double& v : f) v = normal(rng);
      CHECK(dot(f, op.apply(f)) > 0.0);
    }
  }
}

TEST_CASE("Gershgorin bounds bracket the stencil") {
  const auto op = assemble_dirichlet_laplacian(Domain::unit_square(), 0.25);
  CHECK(op.matrix().gershgorin_upper() <= 8.0 * 16.0 + 1e-12);
  CHECK(op.matrix().gershgorin_lower() >= -1e-12);
}

TEST_CASE("coordinate dump lists every stored entry") {
  const auto op = assemble_dirichlet_laplacian(Domain::interval(1.0), 0.25);
  std::ostringstream out;
  op.matrix().write_coordinate(out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.find('\r') == std::string::npos);
}
