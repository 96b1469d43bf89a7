#pragma once

#include <vector>

#include "weyl_lab/spectrum.hpp"

namespace weyl_lab {

/// pi^2 (m^2/a^2 + n^2/b^2) <= lambda_max on [0,a]x[0,b] with eigenfunctions
/// 2/sqrt(ab) sin(m pi x/a) sin(n pi y/b). Degenerate levels ordered by (m, n).
/// Throws Error(empty_spectrum) when lambda_max is below the ground state.
Spectrum rectangle_spectrum(double a, double b, double lambda_max);

/// (k pi/L)^2 <= lambda_max on [0, L], eigenfunctions sqrt(2/L) sin(k pi x/L).
Spectrum interval_spectrum(double length, double lambda_max);

/// Separated-variables spectrum of [0,L_1]x...x[0,L_n], n <= 3.
Spectrum box_spectrum(const std::vector<double>& lengths, double lambda_max);

/// (j_{nu,k}/r)^2 <= lambda_max on the disk of radius r centred at the origin;
/// multiplicity 2 (cos, sin) for nu >= 1. Eigenfunctions are normalised by
/// a 400-node Gauss-Legendre radial quadrature. Degenerate levels ordered by
/// (nu, parity cos-before-sin, k).
Spectrum disk_spectrum(double r, double lambda_max);

/// Closed-form spectrum for rectangles, boxes/intervals and disks; throws
/// Error(invalid_argument) for shapes without an oracle.
Spectrum analytic_spectrum(const Domain& d, double lambda_max);

/// Closed-form disk normalisation pi r^2 J_{nu+1}(j)^2 / 2 (times 2 for nu = 0),
/// the cross-check for the quadrature path.
double disk_mode_norm_closed_form(int nu, double zero, double r);

}  // namespace weyl_lab
