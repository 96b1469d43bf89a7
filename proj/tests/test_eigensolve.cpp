#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "weyl_lab/eigensolve.hpp"
#include "weyl_lab/error.hpp"
#include "weyl_lab/geometry.hpp"
#include "weyl_lab/grid_operator.hpp"
#include "weyl_lab/oracles.hpp"

using namespace weyl_lab;

namespace {

SymmetricSparseMatrix random_sparse(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> diag(n);
  for (double& d : diag) d = 4.0 + 2.0 * u(rng);
  std::vector<UpperEntry> off;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((rng() % 10) == 0) off.push_back({i, j, 0.5 * u(rng)});
    }
  }
  return SymmetricSparseMatrix(std::move(diag), std::move(off));
}

Eigen::MatrixXd dense(const SymmetricSparseMatrix& a) {
  Eigen::MatrixXd m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a.entry(i, j);
  }
  return m;
}

}  // namespace

TEST_CASE("diagonal matrix") {
  const SymmetricSparseMatrix a({1.0, 2.0, 3.0}, {});
  const auto pairs = lowest_eigenpairs(a, 2);
  REQUIRE(pairs.values.size() == 2);
  CHECK(pairs.values[0] == doctest::Approx(1.0));
  CHECK(pairs.values[1] == doctest::Approx(2.0));
  CHECK(std::abs(pairs.vectors(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("1D Toeplitz closed form") {
  const auto op = assemble_dirichlet_laplacian(Domain::interval(1.0), 0.25);
  const auto s = lowest_eigenpairs(op, 3);
  for (int k = 1; k <= 3; ++k) {
    CHECK(s.eigenvalue(k - 1) == doctest::Approx(32.0 - 32.0 * std::cos(k * std::numbers::pi / 4.0)).epsilon(1e-12));
  }
}

TEST_CASE("random sparse 50x50 against dense oracle, both paths") {
  const auto a = random_sparse(50, 42);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(dense(a));
  for (EigenMethod method : {EigenMethod::dense, EigenMethod::krylov}) {
    EigenOptions opts;
    opts.method = method;
    opts.block_size = 4;
    const auto pairs = lowest_eigenpairs(a, 10, opts);
    for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(pairs.values[j] - oracle.eigenvalues()(j)) < 1e-8);
  }
}

TEST_CASE("Krylov path on a square grid agrees with dense") {
  const auto op = assemble_dirichlet_laplacian(Domain::unit_square(), 1.0 / 24.0);
  EigenOptions dense_opts;
  dense_opts.method = EigenMethod::dense;
  EigenOptions krylov_opts;
  krylov_opts.method = EigenMethod::krylov;
  const auto d = lowest_eigenpairs(op.matrix(), 12, dense_opts);
  const auto k = lowest_eigenpairs(op.matrix(), 12, krylov_opts);
  for (std::size_t j = 0; j < 12; ++j) {
    CHECK(k.values[j] == doctest::Approx(d.values[j]).epsilon(1e-10));
    CHECK(k.residuals[j] <= 1e-9);
  }
  // Nondegenerate levels give identical canonical vectors up to solver noise.
  CHECK((k.vectors.col(0) - d.vectors.col(0)).norm() < 1e-6);
}

TEST_CASE("residual contract and orthonormality") {
  const auto op = assemble_dirichlet_laplacian(Domain::l_shape(), 1.0 / 32.0);
  EigenOptions opts;
  opts.method = EigenMethod::krylov;
  const auto pairs = lowest_eigenpairs(op.matrix(), 8, opts);
  const Eigen::MatrixXd gram = pairs.vectors.transpose() * pairs.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-8);
  for (std::size_t j = 0; j < 8; ++j) {
    const Eigen::VectorXd u = pairs.vectors.col(static_cast<Eigen::Index>(j));
    std::vector<double> x(u.data(), u.data() + u.size());
    const auto y = op.apply(x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r += (y[i] - pairs.values[j] * x[i]) * (y[i] - pairs.values[j] * x[i]);
    CHECK(std::sqrt(r) <= 1e-9 * pairs.values[j]);
  }
}

TEST_CASE("determinism for a fixed seed") {
  const auto op = assemble_dirichlet_laplacian(Domain::disk(1.0), 1.0 / 40.0);
  EigenOptions opts;
  opts.method = EigenMethod::krylov;
  opts.seed = 99;
  const auto a = lowest_eigenpairs(op.matrix(), 6, opts);
  const auto b = lowest_eigenpairs(op.matrix(), 6, opts);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("canonical signs: first nonzero coefficient positive") {
  const auto op = assemble_dirichlet_laplacian(Domain::unit_square(), 1.0 / 16.0);
  const auto pairs = lowest_eigenpairs(op.matrix(), 6);
  for (Eigen::Index j = 0; j < pairs.vectors.cols(); ++j) {
    Eigen::Index i = 0;
    while (std::abs(pairs.vectors(i, j)) < 1e-12) ++i;
    CHECK(pairs.vectors(i, j) > 0.0);
  }
}

TEST_CASE("k larger than the dimension") {
  const SymmetricSparseMatrix a({1.0, 2.0}, {});
  try {
    lowest_eigenpairs(a, 3);
    FAIL("expected k_too_large");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::k_too_large);
  }
}

TEST_CASE("discrete eigenfunctions are grid-normalised") {
  const double h = 1.0 / 16.0;
  const auto op = assemble_dirichlet_laplacian(Domain::unit_square(), h);
  const auto s = lowest_eigenpairs(op, 4);
  const auto* basis = s.grid_basis();
  REQUIRE(basis != nullptr);
  for (Eigen::Index j = 0; j < 4; ++j) CHECK(basis->coefficients().col(j).squaredNorm() * h * h == doctest::Approx(1.0));
  CHECK(s.eigenfunction(0, {0.5, 0.5, 0.0}) > 0.0);
}

TEST_CASE("resolution cutoff arithmetic") {
  const double h = 1.0 / 256.0;
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(Domain::unit_square(), h));
  auto basis = std::make_shared<const GridEigenbasis>(grid, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid->size()), 1));
  const auto s = Spectrum::discrete(Domain::unit_square(), h, {2500.0}, basis);
  CHECK(resolved_cutoff(s) == doctest::Approx(1310.72));

  const auto coarse = lowest_eigenpairs(assemble_dirichlet_laplacian(Domain::unit_square(), 0.5), 1);
  CHECK(coarse.eigenvalue(0) == doctest::Approx(16.0));
  CHECK(resolved_cutoff(coarse) == doctest::Approx(0.08));

  CHECK(resolved_cutoff(rectangle_spectrum(1.0, 1.0, 500.0)) == doctest::Approx(500.0));
}

TEST_CASE("property: Poincare product on every suite domain at a coarse grid") {
  for (const Domain& d : {Domain::unit_square(), Domain::rectangle(2.0, 1.0), Domain::disk(1.0),
                          Domain::annulus(0.5, 1.0), Domain::l_shape()}) {
    const auto s = lowest_eigenpairs(assemble_dirichlet_laplacian(d, 1.0 / 32.0), 1);
    CHECK(s.eigenvalue(0) * d.diameter() * d.diameter() >= 1.0);
  }
}
