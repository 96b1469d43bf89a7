#include "weyl_lab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "weyl_lab/bessel.hpp"
#include "weyl_lab/eigensolve.hpp"
#include "weyl_lab/error.hpp"
#include "weyl_lab/format.hpp"
#include "weyl_lab/grid_operator.hpp"
#include "weyl_lab/oracles.hpp"
#include "weyl_lab/quadrature.hpp"
#include "weyl_lab/spectral.hpp"
#include "weyl_lab/svg.hpp"
#include "weyl_lab/tauberian.hpp"

namespace weyl_lab {

namespace {

constexpr std::string_view kModule = "cli";

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void constant(SubcommandResult& r, const std::string& key, double value) { r.constants.emplace_back(key, format_double(value)); }
void constant(SubcommandResult& r, const std::string& key, const std::string& value) { r.constants.emplace_back(key, value); }

void check(SubcommandResult& r, const std::string& name, bool passed, const std::string& detail) {
  r.assertions.push_back({name, passed, detail});
}

void check_at_most(SubcommandResult& r, const std::string& name, double value, const std::optional<double>& limit,
                   const std::string& what) {
  if (!limit) return;
  check(r, name, value <= *limit, what + " = " + format_double(value) + " <= " + format_double(*limit));
}

void write_csv(SubcommandResult& r, const CsvTable& table, const std::filesystem::path& p) {
  table.write_file(p.string());
  r.csvs.push_back(p);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(Errc::io_error, kModule, "cannot write " + p.string());
  out << text;
  if (!out) fail(Errc::io_error, kModule, "failed writing " + p.string());
}

double drift_ratio(double p, double q) {
  const double lo = std::min(p, q);
  const double hi = std::max(p, q);
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

bool SubcommandResult::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

bool ExperimentReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const SubcommandResult& r) { return r.passed(); });
}

int ExperimentReport::exit_code() const { return passed() ? 0 : 2; }

const std::vector<std::string>& subcommand_order() {
  static const std::vector<std::string> order{"solve",      "oracle",    "poincare",  "free-term",  "trace",
                                              "weyl-fit",   "local-weyl", "tauberian", "wave-trace", "report"};
  return order;
}

Experiment::Experiment(ExperimentConfig config, const RunOptions& options) : config_(std::move(config)) {
  if (options.output_dir) config_.output_dir = *options.output_dir;
  if (options.plots) config_.plots = true;
  if (options.seed) {
    if (config_.solve) config_.solve->seed = *options.seed;
    if (config_.free_term) config_.free_term->seed = *options.seed;
  }
}

Experiment::~Experiment() = default;

SubcommandResult Experiment::run(std::string_view subcommand) {
  std::error_code ec;
  std::filesystem::create_directories(config_.output_dir, ec);
  if (ec) fail(Errc::io_error, kModule, "cannot create output directory " + config_.output_dir.string());

  auto missing = [&](std::string_view section) -> SubcommandResult {
    fail(Errc::config_parse, kModule, config_.name + ": no [" + std::string(section) + "] section");
  };
  const Stopwatch clock;
  SubcommandResult r;
  if (subcommand == "solve") {
    r = config_.solve ? solve() : missing(subcommand);
  } else if (subcommand == "oracle") {
    r = config_.oracle ? oracle() : missing(subcommand);
  } else if (subcommand == "poincare") {
    r = config_.poincare ? poincare() : missing(subcommand);
  } else if (subcommand == "free-term") {
    r = config_.free_term ? free_term_check() : missing(subcommand);
  } else if (subcommand == "trace") {
    r = config_.trace ? trace() : missing(subcommand);
  } else if (subcommand == "weyl-fit") {
    r = config_.weyl_fit ? weyl_fit_sweep() : missing(subcommand);
  } else if (subcommand == "local-weyl") {
    r = config_.local_weyl ? local_weyl() : missing(subcommand);
  } else if (subcommand == "tauberian") {
    r = config_.tauberian ? tauberian() : missing(subcommand);
  } else if (subcommand == "wave-trace") {
    r = config_.wave_trace ? wave_trace_sweep() : missing(subcommand);
  } else if (subcommand == "report") {
    return report();
  } else {
    fail(Errc::invalid_argument, kModule, "unknown subcommand '" + std::string(subcommand) + "'");
  }
  r.subcommand = std::string(subcommand);
  r.seconds = clock.seconds();
  write_summary(r);
  return r;
}

ExperimentReport Experiment::run_all() {
  ExperimentReport rep;
  const bool present[] = {config_.solve.has_value(),     config_.oracle.has_value(),    config_.poincare.has_value(),
                          config_.free_term.has_value(), config_.trace.has_value(),     config_.weyl_fit.has_value(),
                          config_.local_weyl.has_value(), config_.tauberian.has_value(), config_.wave_trace.has_value()};
  const auto& order = subcommand_order();
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (present[i]) rep.results.push_back(run(order[i]));
  }
  if (rep.results.empty()) fail(Errc::config_parse, kModule, config_.name + ": no runnable sections");
  report();
  return rep;
}

void Experiment::write_summary(const SubcommandResult& r) const {
  std::ostringstream out;
  out << "subcommand = " << r.subcommand << '\n';
  out << "config = " << config_.name << '\n';
  for (const auto& csv : r.csvs) out << "csv = " << csv.filename().string() << '\n';
  for (const auto& [k, v] : r.constants) out << k << " = " << v << '\n';
  for (const auto& a : r.assertions) out << "assert " << a.name << (a.passed ? " PASS " : " FAIL ") << a.detail << '\n';
  out << "seconds = " << format_double(r.seconds) << '\n';
  write_text(path("summary_" + r.subcommand + ".txt"), out.str());
}

std::shared_ptr<const Spectrum> Experiment::source_spectrum(const SpectrumSourceConfig& source, double needed) {
  if (source.source == Source::discrete) return load_discrete();
  const double lambda_max = *source.lambda_max;
  if (lambda_max < needed) {
    fail(Errc::config_parse, kModule,
         "lambda_max = " + format_double(lambda_max) + " is below the required " + format_double(needed));
  }
  return std::make_shared<const Spectrum>(analytic_spectrum(*config_.domain, lambda_max));
}

std::shared_ptr<const Spectrum> Experiment::load_discrete() {
  if (discrete_) return discrete_;
  if (!config_.solve) fail(Errc::missing_prerequisite, kModule, "discrete source needs a [solve] section");
  const auto spec_path = path("spectrum.txt");
  std::ifstream spec_in(spec_path, std::ios::binary);
  if (!spec_in) fail(Errc::missing_prerequisite, kModule, "no solve output: " + spec_path.string() + " (run solve first)");
  auto values = read_spectrum(spec_in);

  auto grid = std::make_shared<const InteriorGrid>(interior_grid(*config_.domain, config_.solve->h));
  Eigen::MatrixXd coefficients(static_cast<Eigen::Index>(grid->size()), static_cast<Eigen::Index>(values.size()));
  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto p = path("eigenfunction_" + std::to_string(j + 1) + ".txt");
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(Errc::missing_prerequisite, kModule, "no eigenfunction dump " + p.string() + " (set eigenfunctions to K)");
    const auto column = read_eigenfunction(in, *grid);
    for (std::size_t i = 0; i < column.size(); ++i) {
      coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = column[i];
    }
  }
  auto basis = std::make_shared<const GridEigenbasis>(grid, std::move(coefficients));
  discrete_ = std::make_shared<const Spectrum>(
      Spectrum::discrete(*config_.domain, config_.solve->h, std::move(values), std::move(basis)));
  return discrete_;
}

SubcommandResult Experiment::solve() {
  const SolveConfig& c = *config_.solve;
  const Domain& d = *config_.domain;
  SubcommandResult r;
  const Stopwatch clock;
  const GridOperator op = assemble_dirichlet_laplacian(d, c.h);
  EigenOptions opts;
  opts.tol = c.tol;
  opts.seed = c.seed;
  opts.method = c.method;
  auto spectrum = std::make_shared<const Spectrum>(lowest_eigenpairs(op, c.k, opts));
  const double elapsed = clock.seconds();
  discrete_ = spectrum;

  {
    std::ostringstream out;
    write_spectrum(out, spectrum->eigenvalues());
    write_text(path("spectrum.txt"), out.str());
  }
  const std::size_t dumps = std::min(c.eigenfunctions.value_or(c.k), c.k);
  for (std::size_t j = 0; j < dumps; ++j) {
    std::ostringstream out;
    write_eigenfunction(out, *spectrum, j);
    write_text(path("eigenfunction_" + std::to_string(j + 1) + ".txt"), out.str());
  }
  if (c.write_operator) {
    std::ostringstream out;
    op.matrix().write_coordinate(out);
    write_text(path("operator.txt"), out.str());
  }

  constant(r, "domain", d.name());
  constant(r, "h", c.h);
  constant(r, "unknowns", static_cast<double>(op.matrix().size()));
  constant(r, "k", static_cast<double>(c.k));
  constant(r, "lambda_1", spectrum->eigenvalue(0));
  constant(r, "lambda_k", spectrum->eigenvalues().back());
  constant(r, "trusted_cutoff", spectrum->trusted_cutoff());
  constant(r, "max_residual", *std::max_element(spectrum->residuals().begin(), spectrum->residuals().end()));
  constant(r, "solve_seconds", elapsed);

  if (c.expect_oracle_rel_error) {
    double lambda_max = 2.0 * spectrum->eigenvalues().back() + 100.0;
    Spectrum exact = analytic_spectrum(d, lambda_max);
    while (exact.size() < c.k) {
      lambda_max *= 2.0;
      exact = analytic_spectrum(d, lambda_max);
    }
    CsvTable table({"j", "discrete", "exact", "rel_error"});
    double worst = 0.0;
    for (std::size_t j = 0; j < c.k; ++j) {
      const double rel = std::abs(spectrum->eigenvalue(j) - exact.eigenvalue(j)) / exact.eigenvalue(j);
      worst = std::max(worst, rel);
      table.add_row({static_cast<double>(j + 1), spectrum->eigenvalue(j), exact.eigenvalue(j), rel});
    }
    write_csv(r, table, path("solve_vs_oracle.csv"));
    constant(r, "max_oracle_rel_error", worst);
    check_at_most(r, "oracle_rel_error", worst, c.expect_oracle_rel_error, "max |lambda_h/lambda - 1|");
  }
  check_at_most(r, "solve_seconds", elapsed, c.expect_max_seconds, "eigensolve wall time [s]");
  return r;
}

SubcommandResult Experiment::oracle() {
  const OracleConfig& c = *config_.oracle;
  SubcommandResult r;
  const Spectrum s = analytic_spectrum(*config_.domain, c.lambda_max);
  std::ostringstream out;
  write_spectrum(out, s.eigenvalues());
  write_text(path("oracle_spectrum.txt"), out.str());
  constant(r, "domain", config_.domain->name());
  constant(r, "lambda_max", c.lambda_max);
  constant(r, "count", static_cast<double>(s.size()));
  if (c.expect_count) {
    check(r, "count", s.size() == *c.expect_count,
          "N(lambda_max) = " + std::to_string(s.size()) + " vs expected " + std::to_string(*c.expect_count));
  }
  return r;
}

SubcommandResult Experiment::poincare() {
  const PoincareConfig& c = *config_.poincare;
  SubcommandResult r;
  std::ostringstream csv;
  csv << "domain,h,lambda1,diameter,product\n";
  double worst = std::numeric_limits<double>::infinity();
  EigenOptions opts;
  if (config_.solve) opts.seed = config_.solve->seed;
  for (const auto& name : c.domains) {
    const Domain d = named_domain(name);
    const GridOperator op = assemble_dirichlet_laplacian(d, c.h);
    const Spectrum s = lowest_eigenpairs(op, 1, opts);
    const double product = s.eigenvalue(0) * d.diameter() * d.diameter();
    worst = std::min(worst, product);
    csv << name << ',' << format_double(c.h) << ',' << format_double(s.eigenvalue(0)) << ',' << format_double(d.diameter())
        << ',' << format_double(product) << '\n';
    constant(r, "product_" + name, product);
  }
  write_text(path("poincare.csv"), csv.str());
  r.csvs.push_back(path("poincare.csv"));
  constant(r, "min_product", worst);
  if (c.expect_min_product) {
    check(r, "poincare_bound", worst >= *c.expect_min_product,
          "min lambda_1 diam^2 = " + format_double(worst) + " >= " + format_double(*c.expect_min_product));
  }
  return r;
}

SubcommandResult Experiment::free_term_check() {
  const FreeTermConfig& c = *config_.free_term;
  SubcommandResult r;
  std::mt19937_64 rng(c.seed);
  CsvTable table({"x1", "x2", "lambda", "closed_form", "quadrature", "abs_error"});
  double worst = 0.0;
  for (std::size_t i = 0; i < c.pairs; ++i) {
    const Point x{c.x_max * (2.0 * unit_draw(rng) - 1.0), c.x_max * (2.0 * unit_draw(rng) - 1.0), 0.0};
    const double lambda = c.lambda_lo * std::pow(c.lambda_hi / c.lambda_lo, unit_draw(rng));
    const double closed = free_term_offdiag(2, x, lambda);
    const double quad = free_term_offdiag_quadrature(x, lambda);
    const double err = std::abs(closed - quad);
    worst = std::max(worst, err);
    table.add_row({x.x, x.y, lambda, closed, quad, err});
  }
  write_csv(r, table, path("free_term.csv"));
  constant(r, "pairs", static_cast<double>(c.pairs));
  constant(r, "max_abs_error", worst);
  check_at_most(r, "free_term_abs_error", worst, c.expect_abs_error, "max |closed form - quadrature|");
  return r;
}

SubcommandResult Experiment::trace() {
  const TraceConfig& c = *config_.trace;
  SubcommandResult r;
  std::vector<double> lambdas = c.values;
  double needed = 0.0;
  for (double l : lambdas) needed = std::max(needed, l);
  if (lambdas.empty() && c.lambda_hi) needed = *c.lambda_hi;
  const auto s = source_spectrum(c, needed);
  if (lambdas.empty()) {
    const double lo = c.lambda_lo.value_or(s->eigenvalue(0));
    const double hi = c.lambda_hi.value_or(s->trusted_cutoff());
    lambdas = c.lambdas == 1 ? std::vector<double>{hi} : logspace(lo, hi, c.lambdas);
  }
  CsvTable table({"lambda", "trace", "count", "error_estimate"});
  double worst = 0.0;
  for (double l : lambdas) {
    const auto t = trace_counting(*s, *config_.domain, l, c.q);
    const auto n = static_cast<double>(counting(*s, l));
    worst = std::max(worst, std::abs(t.value - n) / std::max(1.0, n));
    table.add_row({l, t.value, n, t.error_estimate});
  }
  write_csv(r, table, path("trace.csv"));
  constant(r, "source", s->tag());
  constant(r, "lambdas", static_cast<double>(lambdas.size()));
  constant(r, "max_rel_error", worst);
  check_at_most(r, "trace_identity", worst, c.expect_rel_error, "max |trace - N| / max(1, N)");
  return r;
}

SubcommandResult Experiment::weyl_fit_sweep() {
  const WeylFitConfig& c = *config_.weyl_fit;
  const Domain& d = *config_.domain;
  SubcommandResult r;
  const Stopwatch clock;
  const auto s = source_spectrum(c, c.lambda_hi);
  const WeylFitReport fit = weyl_fit(*s, d, c.lambda_lo, c.lambda_hi, c.samples);

  auto table_of = [](const WeylFitReport& f) {
    CsvTable t({"lambda", "count", "remainder", "normalized"});
    for (const auto& smp : f.samples) t.add_row({smp.lambda, smp.count, smp.remainder, smp.normalized});
    return t;
  };
  write_csv(r, table_of(fit), path("weyl_fit.csv"));
  const double rel = std::abs(fit.a / fit.target - 1.0);
  constant(r, "source", s->tag());
  constant(r, "A", fit.a);
  constant(r, "B", fit.b);
  constant(r, "A_single", fit.a_single);
  constant(r, "target", fit.target);
  constant(r, "A_rel_error", rel);
  constant(r, "A_single_rel_error", std::abs(fit.a_single / fit.target - 1.0));
  constant(r, "sup_normalized_remainder", fit.sup_normalized);
  check_at_most(r, "weyl_coefficient", rel, c.expect_a_rel_error, "|A / (C_n vol) - 1|");

  std::optional<WeylFitReport> other;
  if (c.drift_lambda_hi) {
    const auto s2 = c.source == Source::analytic
                        ? std::make_shared<const Spectrum>(analytic_spectrum(d, *c.drift_lambda_hi))
                        : s;
    other = weyl_fit(*s2, d, c.lambda_lo, *c.drift_lambda_hi, c.samples);
    write_csv(r, table_of(*other), path("weyl_fit_drift.csv"));
    const double drift = drift_ratio(fit.sup_normalized, other->sup_normalized);
    constant(r, "sup_normalized_remainder_drift_window", other->sup_normalized);
    constant(r, "remainder_drift", drift);
    check_at_most(r, "remainder_drift", drift, c.expect_max_drift, "sup ratio between windows");
  }
  const double elapsed = clock.seconds();
  check_at_most(r, "weyl_fit_seconds", elapsed, c.expect_max_seconds, "wall time [s]");

  if (config_.plots) {
    SvgPlot plot("Normalized Weyl remainder", "lambda", "R / (lambda^((n-1)/2) log lambda)", true, false);
    auto series = [](const WeylFitReport& f) {
      std::vector<double> xs, ys;
      for (const auto& smp : f.samples) {
        xs.push_back(smp.lambda);
        ys.push_back(smp.normalized);
      }
      return std::pair{xs, ys};
    };
    auto [xs, ys] = series(fit);
    plot.add_series("window hi " + format_double(c.lambda_hi), xs, ys);
    if (other) {
      auto [x2, y2] = series(*other);
      plot.add_series("window hi " + format_double(*c.drift_lambda_hi), x2, y2);
    }
    plot.write_file(path("weyl_fit.svg"));
  }
  return r;
}

SubcommandResult Experiment::local_weyl() {
  const LocalWeylConfig& c = *config_.local_weyl;
  const Domain& d = *config_.domain;
  SubcommandResult r;
  const Stopwatch clock;
  const double hi2 = c.lambda_hi * c.drift_factor;
  const auto s = source_spectrum(c, c.lambda_hi);
  const auto points = interior_sample_points(d, c.points_per_axis);
  if (points.empty()) fail(Errc::invalid_argument, kModule, "no sample points inside the domain");
  const auto lambdas = logspace(c.lambda_lo, c.lambda_hi, c.samples);
  const LocalWeylSweep sweep = local_weyl_sweep(*s, d, points, lambdas);
  const double base_seconds = clock.seconds();

  std::shared_ptr<const Spectrum> s2 = s;
  if (c.source == Source::analytic && s->lambda_max() < hi2) {
    s2 = std::make_shared<const Spectrum>(analytic_spectrum(d, hi2));
  }
  const auto lambdas2 = logspace(c.lambda_lo, hi2, c.samples);
  const LocalWeylSweep wide = local_weyl_sweep(*s2, d, points, lambdas2);

  auto table_of = [](const LocalWeylSweep& sw) {
    CsvTable t({"x", "y", "s", "lambda", "e_diag", "e0", "residual_r"});
    for (const auto& row : sw.rows) t.add_row({row.x.x, row.x.y, row.s, row.lambda, row.e_diag, row.e0, row.residual});
    return t;
  };
  write_csv(r, table_of(sweep), path("local_weyl.csv"));
  write_csv(r, table_of(wide), path("local_weyl_extended.csv"));

  const double ratio = sweep.median_residual > 0.0 ? sweep.sup_residual / sweep.median_residual
                                                   : std::numeric_limits<double>::infinity();
  const double drift = drift_ratio(sweep.sup_residual, wide.sup_residual);
  const double diag_drift = std::abs(wide.diagonal_sup / sweep.diagonal_sup - 1.0);
  constant(r, "source", s->tag());
  constant(r, "points", static_cast<double>(points.size()));
  constant(r, "sup_r", sweep.sup_residual);
  constant(r, "median_r", sweep.median_residual);
  constant(r, "sup_over_median", ratio);
  constant(r, "pointwise_sup_ratio", sweep.pointwise_sup_ratio);
  constant(r, "near_boundary_constant", sweep.near_boundary_constant);
  constant(r, "interior_constant", sweep.interior_constant);
  constant(r, "sup_r_extended", wide.sup_residual);
  constant(r, "sup_r_drift", drift);
  constant(r, "near_boundary_constant_extended", wide.near_boundary_constant);
  constant(r, "interior_constant_extended", wide.interior_constant);
  constant(r, "near_boundary_constant_drift", drift_ratio(sweep.near_boundary_constant, wide.near_boundary_constant));
  constant(r, "interior_constant_drift", drift_ratio(sweep.interior_constant, wide.interior_constant));
  constant(r, "diagonal_sup", sweep.diagonal_sup);
  constant(r, "diagonal_sup_extended", wide.diagonal_sup);
  constant(r, "diagonal_sup_drift", diag_drift);
  constant(r, "min_e_diag", std::min(sweep.min_e_diag, wide.min_e_diag));

  check(r, "residual_finite", std::isfinite(sweep.sup_residual), "sup r = " + format_double(sweep.sup_residual));
  check(r, "e_monotone_nonnegative",
        sweep.monotone && wide.monotone && std::min(sweep.min_e_diag, wide.min_e_diag) >= -1e-12,
        "e(x,x;.) nondecreasing and >= 0 on both sweeps");
  check_at_most(r, "sup_over_median", ratio, c.expect_max_sup_median, "sup r / median r");
  check_at_most(r, "sup_r_drift", drift, c.expect_max_drift, "sup r ratio under range extension");
  check_at_most(r, "diagonal_sup_drift", diag_drift, c.expect_max_diag_drift, "|sup2 / sup1 - 1| of e/lambda^{n/2}");
  check_at_most(r, "local_weyl_seconds", base_seconds, c.expect_max_seconds, "base sweep wall time [s]");

  if (config_.plots) {
    SvgPlot plot("Local Weyl residual", "lambda", "r(x, lambda)", true, false);
    std::vector<double> sup(lambdas.size(), 0.0);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) sup[i % lambdas.size()] = std::max(sup[i % lambdas.size()], sweep.rows[i].residual);
    plot.add_series("max over x", lambdas, sup);
    std::vector<double> centre;
    const std::size_t mid = (points.size() / 2) * lambdas.size();
    for (std::size_t l = 0; l < lambdas.size(); ++l) centre.push_back(sweep.rows[mid + l].residual);
    plot.add_series("middle sample point", lambdas, centre);
    plot.write_file(path("local_weyl.svg"));
  }
  return r;
}

SubcommandResult Experiment::tauberian() {
  const TauberianConfig& c = *config_.tauberian;
  const Domain& d = *config_.domain;
  SubcommandResult r;
  const int n = d.dimension();
  const double a = c.a ? *c.a : default_mollifier_scale(d, c.x, c.d0.value_or(d.diameter() / 4.0));
  const double p = c.p.value_or(std::max(n - 3, 0));
  const double c1 = c.c1.value_or(a);
  const double c2 = c.c2.value_or(a);
  const double tau_ext = c.tau_hi * c.extend;
  const double reach = std::max(std::abs(c.tau_lo), tau_ext) + 5.0 / a;
  const auto s = source_spectrum(c, reach * reach);

  const SpectralMeasure f = spectral_measure_at(*s, c.x);
  const SpectralMeasure g = free_measure(n);
  const Mollifier m(a);
  const auto taus = linspace(c.tau_lo, c.tau_hi, c.samples);
  const TauberianReport rep = tauberian_check(f, g, m, p, c1, c2, taus);
  const auto ext_taus = linspace(c.tau_lo, tau_ext, c.samples);
  const ConclusionCheck ext = check_conclusion(f, g, m, rep, ext_taus);

  auto table_of = [](const std::vector<TauberianRow>& rows) {
    CsvTable t({"tau", "f", "g", "conv", "bound_lhs", "bound_rhs"});
    for (const auto& row : rows) t.add_row({row.tau, row.f, row.g, row.conv, row.bound_lhs, row.bound_rhs});
    return t;
  };
  write_csv(r, table_of(rep.rows), path("tauberian.csv"));
  write_csv(r, table_of(ext.rows), path("tauberian_extended.csv"));

  double m2_ext = 0.0;
  for (const auto& row : ext.rows) m2_ext = std::max(m2_ext, std::abs(row.conv) / std::pow(std::abs(row.tau) + c2, p));
  const double m2_drift = drift_ratio(rep.m2, m2_ext);

  constant(r, "source", s->tag());
  constant(r, "x", format_double(c.x.x) + " " + format_double(c.x.y));
  constant(r, "p", p);
  constant(r, "a", a);
  constant(r, "c1", c1);
  constant(r, "c2", c2);
  constant(r, "M1", rep.m1);
  constant(r, "M2", rep.m2);
  constant(r, "C", rep.c);
  constant(r, "M2_extended", m2_ext);
  constant(r, "M2_drift", m2_drift);
  constant(r, "extended_violations", static_cast<double>(ext.violations));
  for (const auto& v : rep.violations) constant(r, "hypothesis_violation", v);

  check(r, "constants_finite", std::isfinite(rep.m1) && std::isfinite(rep.m2) && std::isfinite(rep.c),
        "M1 = " + format_double(rep.m1) + ", M2 = " + format_double(rep.m2) + ", C = " + format_double(rep.c));
  check(r, "hypotheses", rep.violations.empty(),
        rep.violations.empty() ? "all hypotheses hold" : std::to_string(rep.violations.size()) + " violation(s)");
  if (c.expect_zero_violations) {
    check(r, "extended_grid_conclusion", ext.violations == 0,
          std::to_string(ext.violations) + " violation(s) on [" + format_double(c.tau_lo) + ", " + format_double(tau_ext) + "]");
  }
  check_at_most(r, "m2_drift", m2_drift, c.expect_max_m2_drift, "M2 ratio under grid extension");

  if (config_.plots) {
    SvgPlot plot("Tauberian conclusion", "tau", "value", false, false);
    std::vector<double> xs, lhs, rhs;
    for (const auto& row : ext.rows) {
      xs.push_back(row.tau);
      lhs.push_back(row.bound_lhs);
      rhs.push_back(rep.c * row.bound_rhs);
    }
    plot.add_series("|f - g|", xs, lhs);
    plot.add_series("C * bound", xs, rhs);
    plot.write_file(path("tauberian.svg"));
  }
  return r;
}

SubcommandResult Experiment::wave_trace_sweep() {
  const WaveTraceConfig& c = *config_.wave_trace;
  SubcommandResult r;
  const auto s = source_spectrum(c, 4.0 * c.lambda_c);
  const auto ts = linspace(c.t_lo, c.t_hi, c.samples);
  const auto trace = wave_trace(*s, c.lambda_c, ts, c.window);

  CsvTable table({"t", "T"});
  for (std::size_t i = 0; i < ts.size(); ++i) table.add_row({ts[i], trace[i]});
  write_csv(r, table, path("wave_trace.csv"));

  std::vector<double> wt, wa;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] >= c.peak_lo && ts[i] <= c.peak_hi) {
      wt.push_back(ts[i]);
      wa.push_back(std::abs(trace[i]));
    }
  }
  const auto peaks = find_peaks(wt, wa, c.prominence);
  CsvTable peak_table({"t", "height"});
  for (const auto& pk : peaks) peak_table.add_row({pk.t, pk.height});
  write_csv(r, peak_table, path("wave_trace_peaks.csv"));

  constant(r, "source", s->tag());
  constant(r, "window", std::string(c.window == TraceWindow::gaussian ? "gaussian" : "sharp"));
  constant(r, "lambda_c", c.lambda_c);
  constant(r, "T0", trace.empty() ? 0.0 : trace.front());
  constant(r, "peaks", static_cast<double>(peaks.size()));
  const auto best = std::max_element(peaks.begin(), peaks.end(),
                                     [](const Peak& p, const Peak& q) { return p.height < q.height; });
  if (best != peaks.end()) {
    constant(r, "dominant_peak_t", best->t);
    constant(r, "dominant_peak_height", best->height);
  }
  if (c.expect_peak) {
    const bool ok = best != peaks.end() && std::abs(best->t / *c.expect_peak - 1.0) <= c.expect_peak_rel_error;
    check(r, "dominant_peak", ok,
          best == peaks.end() ? "no peak found"
                              : "dominant |T| peak at t = " + format_double(best->t) + ", expected " +
                                    format_double(*c.expect_peak) + " within " + format_double(c.expect_peak_rel_error));
  }

  if (config_.plots) {
    SvgPlot plot("Smoothed wave trace", "t", "T(t)", false, false);
    plot.add_series("T", ts, trace);
    plot.write_file(path("wave_trace.svg"));
  }
  return r;
}

SubcommandResult Experiment::report() {
  const auto summaries = read_summaries(config_.output_dir);
  if (summaries.empty()) fail(Errc::missing_prerequisite, kModule, "no summary files in " + config_.output_dir.string());
  SubcommandResult r;
  r.subcommand = "report";
  std::ostringstream out;
  out << "weyl-lab report\n";
  out << "config = " << config_.name << "\n\n";
  std::size_t passed = 0;
  std::size_t total = 0;
  for (const auto& s : summaries) {
    out << "[" << s.subcommand << "]\n";
    for (const auto& [k, v] : s.constants) out << "  " << k << " = " << v << '\n';
    for (const auto& a : s.assertions) {
      out << "  " << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
      r.assertions.push_back({s.subcommand + "/" + a.name, a.passed, a.detail});
      ++total;
      if (a.passed) ++passed;
    }
    out << '\n';
  }
  out << "assertions passed: " << passed << " / " << total << '\n';
  write_text(path("report.txt"), out.str());
  r.csvs.push_back(path("report.txt"));
  return r;
}

std::vector<SubcommandResult> read_summaries(const std::filesystem::path& dir) {
  std::vector<SubcommandResult> out;
  for (const auto& sub : subcommand_order()) {
    const auto p = dir / ("summary_" + sub + ".txt");
    std::ifstream in(p, std::ios::binary);
    if (!in) continue;
    SubcommandResult r;
    r.subcommand = sub;
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("assert ", 0) == 0) {
        std::istringstream row(line.substr(7));
        Assertion a;
        std::string verdict;
        row >> a.name >> verdict;
        std::getline(row, a.detail);
        if (!a.detail.empty() && a.detail.front() == ' ') a.detail.erase(0, 1);
        a.passed = verdict == "PASS";
        r.assertions.push_back(a);
        continue;
      }
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 3);
      if (key == "subcommand" || key == "config") continue;
      if (key == "csv") {
        r.csvs.push_back(dir / value);
        continue;
      }
      if (key == "seconds") {
        double v = 0.0;
        if (parse_number(value, v)) r.seconds = v;
      }
      r.constants.emplace_back(key, value);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace weyl_lab
