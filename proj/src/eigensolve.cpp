#include "weyl_lab/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "weyl_lab/error.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "eigensolve";

// Uniform doubles in [-1, 1) straight from the engine bits, so the sequence
// does not depend on the standard library's distribution implementation.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }

 private:
  std::mt19937_64 engine_;
};

Eigen::VectorXd apply(const SymmetricSparseMatrix& a, const Eigen::VectorXd& x) {
  Eigen::VectorXd y(x.size());
  a.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

double relative_residual(const SymmetricSparseMatrix& a, const Eigen::VectorXd& u, double lambda) {
  const double scale = std::max(std::abs(lambda), std::numeric_limits<double>::min()) * u.norm();
  return (apply(a, u) - lambda * u).norm() / scale;
}

std::string residual_summary(const std::vector<double>& residuals) {
  std::ostringstream out;
  out.precision(3);
  out << "achieved relative residuals:";
  for (double r : residuals) out << ' ' << r;
  return out.str();
}

EigenPairs dense_path(const SymmetricSparseMatrix& a, std::size_t k) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    m(ii, ii) = a.diagonal(i);
    const auto cols = a.upper_columns(i);
    const auto vals = a.upper_values(i);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto jj = static_cast<Eigen::Index>(cols[c]);
      m(ii, jj) = vals[c];
      m(jj, ii) = vals[c];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) fail(Errc::non_convergence, kModule, "dense eigensolver failed");
  EigenPairs out;
  const auto kk = static_cast<Eigen::Index>(k);
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + kk);
  out.vectors = solver.eigenvectors().leftCols(kk);
  return out;
}

// Orthonormalises the columns of w against the first m columns of v and
// against each other (two classical Gram-Schmidt passes per column). Columns
// that keep less than 1e-13 of their norm are dropped. Returns the kept
// columns.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& v, Eigen::Index m, const Eigen::MatrixXd& w) {
  Eigen::MatrixXd kept(w.rows(), w.cols());
  Eigen::Index count = 0;
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    Eigen::VectorXd x = w.col(c);
    const double original = x.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (m > 0) x -= v.leftCols(m) * (v.leftCols(m).transpose() * x);
      if (count > 0) x -= kept.leftCols(count) * (kept.leftCols(count).transpose() * x);
    }
    const double norm = x.norm();
    if (norm <= 1e-13 * original) continue;
    kept.col(count++) = x / norm;
  }
  return kept.leftCols(count);
}

EigenPairs krylov_path(const SymmetricSparseMatrix& a, std::size_t k, const EigenOptions& options) {
  const auto n = static_cast<Eigen::Index>(a.size());
  const auto kk = static_cast<Eigen::Index>(k);
  const auto block = static_cast<Eigen::Index>(std::clamp<std::size_t>(options.block_size, 1, a.size()));
  const Eigen::Index keep = std::min(n, kk + block);
  Eigen::Index max_basis = options.max_basis > 0 ? static_cast<Eigen::Index>(options.max_basis)
                                                 : std::max<Eigen::Index>(4 * (kk + block), 120);
  max_basis = std::min(n, std::max(max_basis, keep + block));

  // Shift strictly below the spectrum so that A - sigma I is positive definite.
  const double lower = a.gershgorin_lower();
  const double scale = std::max({1.0, std::abs(lower), std::abs(a.gershgorin_upper())});
  const double sigma = std::min(0.0, lower) - 1e-8 * scale;

  Eigen::SparseMatrix<double> shifted = a.to_eigen_upper();
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Upper> factor(shifted);
  if (factor.info() != Eigen::Success) fail(Errc::non_convergence, kModule, "sparse factorisation of A - sigma I failed");

  UniformSource uniform(options.seed);
  auto random_block = [&](Eigen::Index cols) {
    Eigen::MatrixXd r(n, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index i = 0; i < n; ++i) r(i, c) = uniform.next();
    return r;
  };

  // basis holds V, images holds B V with B = (A - sigma I)^{-1}, projected = V^T B V.
  Eigen::MatrixXd basis(n, max_basis);
  Eigen::MatrixXd images(n, max_basis);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(max_basis, max_basis);
  Eigen::Index m = 0;

  auto append = [&](const Eigen::MatrixXd& z) {
    const Eigen::Index c = z.cols();
    Eigen::MatrixXd bz(n, c);
    for (Eigen::Index j = 0; j < c; ++j) bz.col(j) = factor.solve(Eigen::VectorXd(z.col(j)));
    if (m > 0) {
      const Eigen::MatrixXd cross = basis.leftCols(m).transpose() * bz;
      projected.block(0, m, m, c) = cross;
      projected.block(m, 0, c, m) = cross.transpose();
    }
    const Eigen::MatrixXd diag = z.transpose() * bz;
    projected.block(m, m, c, c) = 0.5 * (diag + diag.transpose());
    basis.middleCols(m, c) = z;
    images.middleCols(m, c) = bz;
    m += c;
  };

  append(orthonormalize(basis, 0, random_block(block)));

  std::vector<double> residuals;
  for (std::size_t step = 0; step <= options.max_steps; ++step) {
    // Largest eigenvalues of V^T B V belong to the lowest eigenvalues of A.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(projected.topLeftCorner(m, m));
    const Eigen::Index ritz_count = std::min(m, keep);
    const Eigen::MatrixXd s = rr.eigenvectors().rightCols(ritz_count).rowwise().reverse();

    // Purified vectors B y are far less contaminated by high modes than y.
    Eigen::MatrixXd purified = images.leftCols(m) * s;
    const Eigen::Index checked = std::min(ritz_count, kk);
    residuals.assign(static_cast<std::size_t>(checked), 0.0);
    std::vector<double> lambda(static_cast<std::size_t>(checked), 0.0);
    bool converged = checked == kk;
    for (Eigen::Index j = 0; j < checked; ++j) {
      purified.col(j).normalize();
      const Eigen::VectorXd au = apply(a, purified.col(j));
      const double rq = purified.col(j).dot(au);
      lambda[static_cast<std::size_t>(j)] = rq;
      const double r = (au - rq * purified.col(j)).norm() / std::max(std::abs(rq), std::numeric_limits<double>::min());
      residuals[static_cast<std::size_t>(j)] = r;
      if (r > options.tol) converged = false;
    }
    if (converged) {
      EigenPairs out;
      out.vectors = purified.leftCols(kk);
      // Re-orthonormalise within the converged set; degenerate clusters may
      // have drifted apart slightly during purification.
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(out.vectors);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, kk);
      const Eigen::MatrixXd small = q.transpose() * [&] {
        Eigen::MatrixXd aq(n, kk);
        for (Eigen::Index j = 0; j < kk; ++j) aq.col(j) = apply(a, q.col(j));
        return aq;
      }();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fin(0.5 * (small + small.transpose()));
      out.vectors = q * fin.eigenvectors();
      out.values.assign(fin.eigenvalues().data(), fin.eigenvalues().data() + kk);
      return out;
    }
    if (step == options.max_steps) break;

    std::vector<Eigen::Index> selected;
    for (Eigen::Index j = 0; j < checked && static_cast<Eigen::Index>(selected.size()) < block; ++j) {
      if (residuals[static_cast<std::size_t>(j)] > options.tol) selected.push_back(j);
    }
    for (Eigen::Index j = checked; j < ritz_count && static_cast<Eigen::Index>(selected.size()) < block; ++j) {
      selected.push_back(j);
    }

    // New directions B y_j = (B V) s_j need no extra solves.
    Eigen::MatrixXd w(n, static_cast<Eigen::Index>(selected.size()));
    for (std::size_t c = 0; c < selected.size(); ++c) {
      w.col(static_cast<Eigen::Index>(c)) = images.leftCols(m) * s.col(selected[c]);
    }

    if (m + static_cast<Eigen::Index>(selected.size()) > max_basis) {
      // Thick restart onto the wanted Ritz vectors.
      const Eigen::MatrixXd v_new = basis.leftCols(m) * s;
      const Eigen::MatrixXd bv_new = images.leftCols(m) * s;
      basis.leftCols(ritz_count) = v_new;
      images.leftCols(ritz_count) = bv_new;
      projected.setZero();
      const Eigen::VectorXd mu = rr.eigenvalues().tail(ritz_count).reverse();
      projected.topLeftCorner(ritz_count, ritz_count) = mu.asDiagonal();
      m = ritz_count;
    }

    Eigen::MatrixXd fresh = orthonormalize(basis, m, w);
    if (fresh.cols() == 0 && m < n) fresh = orthonormalize(basis, m, random_block(std::min(block, n - m)));
    if (fresh.cols() == 0) break;
    if (m + fresh.cols() > max_basis) fresh = fresh.leftCols(max_basis - m).eval();
    if (fresh.cols() == 0) break;
    append(fresh);
  }
  fail(Errc::non_convergence, kModule, residual_summary(residuals));
}

}  // namespace

void canonicalize(EigenPairs& pairs) {
  const auto k = pairs.values.size();
  std::vector<Eigen::Index> first_index(k, 0);
  std::vector<double> first_abs(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    auto col = pairs.vectors.col(static_cast<Eigen::Index>(j));
    const double threshold = 1e-10 * col.cwiseAbs().maxCoeff();
    Eigen::Index i = 0;
    while (i < col.size() && std::abs(col(i)) <= threshold) ++i;
    if (i == col.size()) continue;
    if (col(i) < 0.0) col = -col;
    first_index[j] = i;
    first_abs[j] = std::abs(col(i));
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::size_t start = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    const bool boundary =
        j == k || (pairs.values[j] - pairs.values[j - 1]) >
                      kDegeneracyGap * std::max({std::abs(pairs.values[j]), std::abs(pairs.values[j - 1]),
                                                 std::numeric_limits<double>::min()});
    if (!boundary) continue;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(j),
                     [&](std::size_t p, std::size_t q) {
                       if (first_abs[p] != first_abs[q]) return first_abs[p] > first_abs[q];
                       return first_index[p] < first_index[q];
                     });
    start = j;
  }

  EigenPairs sorted;
  sorted.vectors.resize(pairs.vectors.rows(), pairs.vectors.cols());
  for (std::size_t j = 0; j < k; ++j) {
    // Cluster members differ by less than kDegeneracyGap; keeping the value
    // sequence ascending leaves only the vectors reordered.
    sorted.values.push_back(pairs.values[j]);
    sorted.vectors.col(static_cast<Eigen::Index>(j)) = pairs.vectors.col(static_cast<Eigen::Index>(order[j]));
    if (!pairs.residuals.empty()) sorted.residuals.push_back(pairs.residuals[order[j]]);
  }
  pairs = std::move(sorted);
}

EigenPairs lowest_eigenpairs(const SymmetricSparseMatrix& a, std::size_t k, const EigenOptions& options) {
  if (k == 0) fail(Errc::invalid_argument, kModule, "K must be at least 1");
  if (k > a.size()) {
    fail(Errc::k_too_large, kModule,
         "K=" + std::to_string(k) + " exceeds the matrix dimension " + std::to_string(a.size()));
  }
  if (!(options.tol > 0.0 && options.tol <= 1e-4)) fail(Errc::invalid_argument, kModule, "tol must lie in (0, 1e-4]");

  const bool use_dense = options.method == EigenMethod::dense ||
                         (options.method == EigenMethod::automatic && a.size() <= kDenseFallbackLimit);
  EigenPairs pairs = use_dense ? dense_path(a, k) : krylov_path(a, k, options);

  pairs.residuals.clear();
  for (std::size_t j = 0; j < k; ++j) {
    pairs.residuals.push_back(relative_residual(a, pairs.vectors.col(static_cast<Eigen::Index>(j)), pairs.values[j]));
  }
  if (use_dense) {
    const double worst = *std::max_element(pairs.residuals.begin(), pairs.residuals.end());
    if (worst > options.tol) fail(Errc::non_convergence, kModule, residual_summary(pairs.residuals));
  }
  canonicalize(pairs);
  return pairs;
}

Spectrum lowest_eigenpairs(const GridOperator& op, std::size_t k, const EigenOptions& options) {
  EigenPairs pairs = lowest_eigenpairs(op.matrix(), k, options);
  const double scale = std::pow(op.h(), -0.5 * op.dimension());
  auto basis = std::make_shared<const GridEigenbasis>(op.shared_grid(), pairs.vectors * scale);
  return Spectrum::discrete(op.domain(), op.h(), std::move(pairs.values), std::move(basis), std::move(pairs.residuals));
}

double resolved_cutoff(const Spectrum& s) {
  if (!s.is_discrete()) return s.lambda_max();
  return std::min(kResolutionBudget / (s.h() * s.h()), s.eigenvalues().back());
}

}  // namespace weyl_lab
