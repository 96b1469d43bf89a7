#pragma once

// Experiment configuration: an INI file with one section per subcommand.
//
//   [domain]      shape = square | rectangle | disk | annulus | polygon | l-shape | interval | box
//                 a, b (rectangle), r (disk), r_in, r_out (annulus),
//                 vertices = "x0 y0 x1 y1 ..." (polygon), length (interval),
//                 lengths = "L1 L2 [L3]" (box)
//   [solve]       h, k, tol, seed, method = auto | dense | krylov,
//                 eigenfunctions (how many to dump, default all), write_operator,
//                 expect_oracle_rel_error, expect_max_seconds
//   [oracle]      lambda_max, expect_count
//   [poincare]    h, domains = "square rectangle-2x1 disk annulus l-shape", expect_min_product
//   [free-term]   n, pairs, seed, lambda_lo, lambda_hi, x_max, expect_abs_error
//   [trace]       source, lambda_max, lambda_lo, lambda_hi, lambdas, values = "l1 l2 ...",
//                 q, expect_rel_error
//   [weyl-fit]    source, lambda_max, lambda_lo, lambda_hi, samples, drift_lambda_hi,
//                 expect_a_rel_error, expect_max_drift, expect_max_seconds
//   [local-weyl]  source, lambda_max, points_per_axis, lambda_lo, lambda_hi, samples,
//                 drift_factor, expect_max_sup_median, expect_max_drift,
//                 expect_max_diag_drift, expect_max_seconds
//   [tauberian]   source, lambda_max, x = "x y", a, d0, p, c1, c2, tau_lo, tau_hi,
//                 samples, extend, expect_zero_violations, expect_max_m2_drift
//   [wave-trace]  source, lambda_max, lambda_c, window = gaussian | sharp, t_lo, t_hi,
//                 samples, peak_lo, peak_hi, prominence, expect_peak, expect_peak_rel_error
//   [output]      dir, plots
//
// `source` is analytic (closed-form oracle, needs lambda_max) or discrete
// (the spectrum from [solve]). Numbers accept decimals, 0x hex and p/q
// fractions. Unknown sections and keys are rejected; expect_* keys turn a
// section's headline numbers into pass/fail assertions.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "weyl_lab/eigensolve.hpp"
#include "weyl_lab/geometry.hpp"
#include "weyl_lab/tauberian.hpp"

namespace weyl_lab {

enum class Source { analytic, discrete };

struct SolveConfig {
  double h = 1.0 / 64.0;
  std::size_t k = 20;
  double tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
  EigenMethod method = EigenMethod::automatic;
  std::optional<std::size_t> eigenfunctions;
  bool write_operator = false;
  std::optional<double> expect_oracle_rel_error;
  std::optional<double> expect_max_seconds;
};

struct OracleConfig {
  double lambda_max = 1e4;
  std::optional<std::size_t> expect_count;
};

struct PoincareConfig {
  double h = 1.0 / 128.0;
  std::vector<std::string> domains{"square", "rectangle-2x1", "disk", "annulus", "l-shape"};
  std::optional<double> expect_min_product;
};

struct FreeTermConfig {
  int n = 2;
  std::size_t pairs = 50;
  std::uint64_t seed = kDefaultSeed;
  double lambda_lo = 1.0;
  double lambda_hi = 400.0;
  double x_max = 1.0;
  std::optional<double> expect_abs_error;
};

struct SpectrumSourceConfig {
  Source source = Source::analytic;
  /// Generation bound for analytic sources.
  std::optional<double> lambda_max;
};

struct TraceConfig : SpectrumSourceConfig {
  std::optional<double> lambda_lo;
  std::optional<double> lambda_hi;
  std::size_t lambdas = 50;
  /// Explicit lambdas; overrides the log-spaced grid when non-empty.
  std::vector<double> values;
  std::size_t q = 512;
  std::optional<double> expect_rel_error;
};

struct WeylFitConfig : SpectrumSourceConfig {
  double lambda_lo = 1e3;
  double lambda_hi = 1e5;
  std::size_t samples = 200;
  std::optional<double> drift_lambda_hi;
  std::optional<double> expect_a_rel_error;
  std::optional<double> expect_max_drift;
  std::optional<double> expect_max_seconds;
};

struct LocalWeylConfig : SpectrumSourceConfig {
  std::size_t points_per_axis = 20;
  double lambda_lo = 20.0;
  double lambda_hi = 2000.0;
  std::size_t samples = 200;
  double drift_factor = 2.0;
  std::optional<double> expect_max_sup_median;
  std::optional<double> expect_max_drift;
  std::optional<double> expect_max_diag_drift;
  std::optional<double> expect_max_seconds;
};

struct TauberianConfig : SpectrumSourceConfig {
  Point x{0.5, 0.5, 0.0};
  std::optional<double> a;
  std::optional<double> d0;
  std::optional<double> p;
  std::optional<double> c1;
  std::optional<double> c2;
  double tau_lo = 1.0;
  double tau_hi = 40.0;
  std::size_t samples = 400;
  double extend = 1.5;
  bool expect_zero_violations = false;
  std::optional<double> expect_max_m2_drift;
};

struct WaveTraceConfig : SpectrumSourceConfig {
  double lambda_c = 2000.0;
  TraceWindow window = TraceWindow::gaussian;
  double t_lo = 0.0;
  double t_hi = 3.0;
  std::size_t samples = 3001;
  double peak_lo = 0.5;
  double peak_hi = 3.0;
  double prominence = 0.05;
  std::optional<double> expect_peak;
  double expect_peak_rel_error = 0.02;
};

struct ExperimentConfig {
  std::string name;
  std::optional<Domain> domain;
  std::optional<SolveConfig> solve;
  std::optional<OracleConfig> oracle;
  std::optional<PoincareConfig> poincare;
  std::optional<FreeTermConfig> free_term;
  std::optional<TraceConfig> trace;
  std::optional<WeylFitConfig> weyl_fit;
  std::optional<LocalWeylConfig> local_weyl;
  std::optional<TauberianConfig> tauberian;
  std::optional<WaveTraceConfig> wave_trace;
  std::filesystem::path output_dir = "out";
  bool plots = false;
};

/// Throws Error(config_parse) with the offending section/key.
ExperimentConfig parse_config(std::istream& in, const std::string& name);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Domain named in [poincare] domains lists.
Domain named_domain(const std::string& name);

}  // namespace weyl_lab
