#pragma once

#include <vector>

namespace weyl_lab {

/// True for the orders bessel_j accepts: nonnegative integers, 1/2 and 3/2.
bool is_supported_bessel_order(double nu);

/// Bessel function of the first kind J_nu(x) for x >= 0.
///
/// Power series for x <= 12; Hankel asymptotic expansion (optimally
/// truncated, at least 6 terms) for orders 0 and 1 beyond; closed
/// trigonometric forms for half-integer orders; upward recurrence from J_0,
/// J_1 (nu < x) or Miller's downward recurrence (nu >= x) for integer
/// orders >= 2 beyond x = 12. Absolute error below 1e-10 for x <= 1000.
/// Throws Error(unsupported_order) for other orders.
double bessel_j(double nu, double x);

/// k-th positive zero j_{nu,k} (k >= 1) by sign bracketing on a fixed step
/// followed by bisection. Memoised per order. Throws Error(bracket_failure)
/// when the scan cannot find k sign changes.
double bessel_zero(double nu, int k);

/// All positive zeros of J_nu strictly below limit, ascending.
std::vector<double> bessel_zeros_below(double nu, double limit);

}  // namespace weyl_lab
