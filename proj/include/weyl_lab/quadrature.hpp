#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace weyl_lab {

struct GaussRule {
  std::vector<double> nodes;    ///< on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n). Cached per n.
const GaussRule& gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre integral of f over [a, b] split into `panels`
/// equal panels with an `order`-point rule each.
double integrate(const std::function<double(double)>& f, double a, double b, std::size_t panels, std::size_t order = 16);

std::vector<double> linspace(double lo, double hi, std::size_t count);
/// count points uniformly spaced in log(lambda); endpoints exact.
std::vector<double> logspace(double lo, double hi, std::size_t count);

}  // namespace weyl_lab
