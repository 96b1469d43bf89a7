#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "weyl_lab/grid_operator.hpp"
#include "weyl_lab/spectrum.hpp"

namespace weyl_lab {

enum class EigenMethod {
  automatic,  ///< dense for dimension <= kDenseFallbackLimit, Krylov otherwise
  dense,
  krylov,
};

inline constexpr std::size_t kDenseFallbackLimit = 2000;
/// Discrete eigenvalues are trusted while lambda * h^2 <= this budget.
inline constexpr double kResolutionBudget = 0.02;
/// Relative gap below which eigenvalues are treated as one degenerate cluster.
inline constexpr double kDegeneracyGap = 1e-8;
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct EigenOptions {
  /// Relative residual ||A u - lambda u|| <= tol * |lambda| * ||u||; in (0, 1e-4].
  double tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
  EigenMethod method = EigenMethod::automatic;
  /// Number of new Krylov directions per expansion step.
  std::size_t block_size = 8;
  /// Basis size that triggers a thick restart; 0 picks max(4 (K + block), 120).
  std::size_t max_basis = 0;
  std::size_t max_steps = 400;
};

/// Lowest eigenpairs with unit-norm eigenvector columns, in canonical order.
struct EigenPairs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  /// Achieved relative residuals, one per pair.
  std::vector<double> residuals;
};

/// Lowest k eigenpairs of a symmetric matrix.
///
/// The Krylov path expands a basis with (A - sigma I)^{-1} applied to the
/// lowest unconverged Ritz vectors, sigma strictly below the Gershgorin
/// bound. Rayleigh-Ritz runs on the shift-inverted operator over the fully
/// reorthogonalised basis; converged vectors get a final Rayleigh-Ritz
/// with A itself. Results are deterministic for a fixed seed.
///
/// Eigenvector signs make the first nonzero coefficient positive. Within
/// clusters of relative gap < kDegeneracyGap vectors are ordered by
/// descending |first nonzero coefficient|, then by its index.
///
/// Throws Error(k_too_large) when k exceeds the dimension and
/// Error(non_convergence) (with the achieved residuals) when the step budget
/// runs out.
EigenPairs lowest_eigenpairs(const SymmetricSparseMatrix& a, std::size_t k, const EigenOptions& options = {});

/// Lowest k eigenpairs of a grid operator as a discrete Spectrum whose
/// eigenfunctions are normalised to sum_x u(x)^2 h^n = 1.
Spectrum lowest_eigenpairs(const GridOperator& op, std::size_t k, const EigenOptions& options = {});

/// Largest lambda with lambda * h^2 <= kResolutionBudget and lambda <= lambda_K
/// for discrete spectra; the generation bound for analytic spectra.
double resolved_cutoff(const Spectrum& s);

/// Applies the sign and tie-break rules in place.
void canonicalize(EigenPairs& pairs);

}  // namespace weyl_lab
