#include "weyl_lab/bessel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "weyl_lab/error.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "oracles";
constexpr double kSeriesLimit = 12.0;
constexpr double kScanStep = 0.2;

bool is_integer_order(double nu) { return nu >= 0.0 && nu == std::floor(nu); }

double power_series(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<double>(k) * (static_cast<double>(k) + nu));
    sum += term;
    if (static_cast<double>(k) > half && std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), summed
// until the terms stop decreasing.
double hankel_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double previous = std::abs(term);
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (static_cast<double>(k) * 8.0 * x);
    const double mag = std::abs(term);
    if (k > 6 && (mag > previous || mag < 1e-17)) break;
    previous = mag;
    // a_k / x^k enters P with sign (-1)^{k/2} for even k and Q with
    // (-1)^{(k-1)/2} for odd k.
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double half_integer_closed(double nu, double x) {
  const double pref = std::sqrt(2.0 / (std::numbers::pi * x));
  if (nu == 0.5) return pref * std::sin(x);
  return pref * (std::sin(x) / x - std::cos(x));
}

double upward_recurrence(int n, double x) {
  double jm = hankel_asymptotic(0.0, x);
  double j = hankel_asymptotic(1.0, x);
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * k / x) * j - jm;
    jm = j;
    j = next;
  }
  return j;
}

// Miller's algorithm: downward recurrence from an order well above max(n, x),
// normalised by J_0 + 2 sum J_{2k} = 1.
double miller(int n, double x) {
  const double top = std::max(static_cast<double>(n), x);
  int m = 2 * ((static_cast<int>(top) + static_cast<int>(std::sqrt(160.0 * top)) + 20) / 2);
  const double tox = 2.0 / x;
  double bjp = 0.0;
  double bj = 1.0;
  double ans = 0.0;
  double sum = 0.0;
  bool accumulate = false;
  for (int j = m; j > 0; --j) {
    const double bjm = j * tox * bj - bjp;
    bjp = bj;
    bj = bjm;
    if (std::abs(bj) > 1e250) {
      bj *= 1e-250;
      bjp *= 1e-250;
      ans *= 1e-250;
      sum *= 1e-250;
    }
    if (accumulate) sum += bj;
    accumulate = !accumulate;
    if (j == n) ans = bjp;
  }
  sum = 2.0 * sum - bj;
  return ans / sum;
}

void require_supported(double nu) {
  if (!is_supported_bessel_order(nu)) {
    fail(Errc::unsupported_order, kModule, "Bessel order " + std::to_string(nu) + " is not supported");
  }
}

std::mutex zero_mutex;

double bisect(double nu, double lo, double hi) {
  double flo = bessel_j(nu, lo);
  for (int iter = 0; iter < 200 && hi - lo > 4e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = bessel_j(nu, mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Extends `zeros` (the zeros of J_nu found so far, scanned up to `reach`)
// until either `count` zeros are known or the scan passes `limit`.
void scan_zeros(double nu, std::vector<double>& zeros, double& reach, std::size_t count, double limit) {
  double x = reach;
  double fx = bessel_j(nu, x);
  while (zeros.size() < count && x < limit) {
    const double next = x + kScanStep;
    const double fnext = bessel_j(nu, next);
    if (fx == 0.0) {
      zeros.push_back(x);
    } else if ((fx > 0.0) != (fnext > 0.0) && fnext != 0.0) {
      zeros.push_back(bisect(nu, x, next));
    }
    x = next;
    fx = fnext;
  }
  reach = x;
}

struct ZeroTable {
  std::vector<double> zeros;
  double reach = 0.0;
};

std::map<double, ZeroTable> tables;

ZeroTable& table_for(double nu) {
  auto it = tables.find(nu);
  if (it == tables.end()) {
    // J_nu keeps its sign on (0, nu] for nu > 0; j_{0,1} > 2.
    it = tables.emplace(nu, ZeroTable{{}, std::max(nu, 0.5)}).first;
  }
  return it->second;
}

}  // namespace

bool is_supported_bessel_order(double nu) { return is_integer_order(nu) || nu == 0.5 || nu == 1.5; }

double bessel_j(double nu, double x) {
  require_supported(nu);
  if (!(x >= 0.0) || !std::isfinite(x)) fail(Errc::invalid_argument, kModule, "Bessel argument must be finite and >= 0");
  if (!is_integer_order(nu)) {
    return x < 1.0 ? power_series(nu, x) : half_integer_closed(nu, x);
  }
  if (x <= kSeriesLimit) return power_series(nu, x);
  const int n = static_cast<int>(nu);
  if (n <= 1) return hankel_asymptotic(nu, x);
  if (static_cast<double>(n) < x) return upward_recurrence(n, x);
  return miller(n, x);
}

double bessel_zero(double nu, int k) {
  require_supported(nu);
  if (k < 1) fail(Errc::invalid_argument, kModule, "zero index k must be >= 1");
  std::lock_guard lock(zero_mutex);
  ZeroTable& t = table_for(nu);
  const double limit = std::numbers::pi * (static_cast<double>(k) + 0.5 * nu + 1.0) + nu + 20.0;
  scan_zeros(nu, t.zeros, t.reach, static_cast<std::size_t>(k), limit);
  if (t.zeros.size() < static_cast<std::size_t>(k)) {
    fail(Errc::bracket_failure, kModule,
         "found only " + std::to_string(t.zeros.size()) + " sign changes of J_" + std::to_string(nu));
  }
  return t.zeros[static_cast<std::size_t>(k - 1)];
}

std::vector<double> bessel_zeros_below(double nu, double limit) {
  require_supported(nu);
  std::lock_guard lock(zero_mutex);
  ZeroTable& t = table_for(nu);
  if (t.reach < limit) scan_zeros(nu, t.zeros, t.reach, static_cast<std::size_t>(-1), limit);
  std::vector<double> out;
  for (double z : t.zeros) {
    if (z >= limit) break;
    out.push_back(z);
  }
  return out;
}

}  // namespace weyl_lab
