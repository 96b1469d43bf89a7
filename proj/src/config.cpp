#include "weyl_lab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "weyl_lab/error.hpp"
#include "weyl_lab/format.hpp"

namespace weyl_lab {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kModule = "cli";

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  fail(Errc::config_parse, kModule, where + ": " + what);
}

// Typed access to one INI section; remembers which keys were read so that
// leftovers can be rejected as unknown.
class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  bool has(const std::string& key) const { return tree_.get_child_optional(key).has_value(); }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (const auto v = tree_.get_optional<std::string>(key)) return trim(*v);
    return std::nullopt;
  }

  std::optional<double> number(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    double v = 0.0;
    if (!parse_number(*t, v) || !std::isfinite(v)) parse_error(where(key), "not a finite number: '" + *t + "'");
    return v;
  }

  std::optional<double> positive(const std::string& key) {
    const auto v = number(key);
    if (v && !(*v > 0.0)) parse_error(where(key), "must be positive");
    return v;
  }

  std::optional<double> nonnegative(const std::string& key) {
    const auto v = number(key);
    if (v && !(*v >= 0.0)) parse_error(where(key), "must be nonnegative");
    return v;
  }

  std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    std::uint64_t v = 0;
    const bool hex = t->size() > 2 && (*t)[0] == '0' && ((*t)[1] == 'x' || (*t)[1] == 'X');
    const char* first = t->data() + (hex ? 2 : 0);
    const char* last = t->data() + t->size();
    const auto [end, ec] = std::from_chars(first, last, v, hex ? 16 : 10);
    if (ec != std::errc() || end != last) parse_error(where(key), "not a nonnegative integer: '" + *t + "'");
    return v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    const auto v = unsigned_integer(key);
    if (v && *v == 0) parse_error(where(key), "must be at least 1");
    return v ? std::optional<std::size_t>(static_cast<std::size_t>(*v)) : std::nullopt;
  }

  std::optional<bool> flag(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    if (*t == "true" || *t == "yes" || *t == "1") return true;
    if (*t == "false" || *t == "no" || *t == "0") return false;
    parse_error(where(key), "expected true or false, got '" + *t + "'");
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    std::string cleaned = *t;
    for (char& c : cleaned) {
      if (c == ',' || c == ';') c = ' ';
    }
    std::istringstream in(cleaned);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
      double v = 0.0;
      if (!parse_number(tok, v) || !std::isfinite(v)) parse_error(where(key), "not a number: '" + tok + "'");
      out.push_back(v);
    }
    return out;
  }

  std::optional<std::vector<std::string>> words(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    std::string cleaned = *t;
    for (char& c : cleaned) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(cleaned);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
  }

  std::string require_text(const std::string& key) {
    auto v = text(key);
    if (!v) parse_error(where(key), "missing required key");
    return *v;
  }

  double require_positive(const std::string& key) {
    auto v = positive(key);
    if (!v) parse_error(where(key), "missing required key");
    return *v;
  }

  void reject_unknown() const {
    for (const auto& [key, child] : tree_) {
      if (!child.empty()) parse_error("[" + name_ + "]", "nested key '" + key + "'");
      if (!used_.count(key)) parse_error(where(key), "unknown key");
    }
  }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\"");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\"");
    return s.substr(b, e - b + 1);
  }

  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> used_;
};

Domain parse_domain(Section& sec) {
  const std::string shape = sec.require_text("shape");
  auto guarded = [&](auto make) {
    try {
      return make();
    } catch (const Error& e) {
      parse_error(sec.where("shape"), e.what());
    }
  };
  if (shape == "square") return guarded([&] { return Domain::rectangle(sec.positive("side").value_or(1.0), sec.positive("side").value_or(1.0)); });
  if (shape == "rectangle") {
    const double a = sec.require_positive("a");
    const double b = sec.require_positive("b");
    return guarded([&] { return Domain::rectangle(a, b); });
  }
  if (shape == "disk") {
    const double r = sec.positive("r").value_or(1.0);
    return guarded([&] { return Domain::disk(r); });
  }
  if (shape == "annulus") {
    const double r_in = sec.require_positive("r_in");
    const double r_out = sec.require_positive("r_out");
    return guarded([&] { return Domain::annulus(r_in, r_out); });
  }
  if (shape == "l-shape") return Domain::l_shape();
  if (shape == "interval") {
    const double l = sec.positive("length").value_or(1.0);
    return guarded([&] { return Domain::interval(l); });
  }
  if (shape == "box") {
    const auto lengths = sec.numbers("lengths");
    if (!lengths || lengths->empty() || lengths->size() > 3) parse_error(sec.where("lengths"), "expected 1 to 3 lengths");
    return guarded([&] { return Domain::box(*lengths); });
  }
  if (shape == "polygon") {
    const auto flat = sec.numbers("vertices");
    if (!flat || flat->size() % 2 != 0) parse_error(sec.where("vertices"), "expected an even number of coordinates");
    std::vector<Point> vertices;
    for (std::size_t i = 0; i < flat->size(); i += 2) vertices.push_back(Point{(*flat)[i], (*flat)[i + 1], 0.0});
    return guarded([&] { return Domain::polygon(vertices); });
  }
  parse_error(sec.where("shape"), "unknown shape '" + shape + "'");
}

void parse_source(Section& sec, SpectrumSourceConfig& cfg) {
  if (const auto s = sec.text("source")) {
    if (*s == "analytic") {
      cfg.source = Source::analytic;
    } else if (*s == "discrete") {
      cfg.source = Source::discrete;
    } else {
      parse_error(sec.where("source"), "expected analytic or discrete, got '" + *s + "'");
    }
  }
  cfg.lambda_max = sec.positive("lambda_max");
  if (cfg.source == Source::analytic && !cfg.lambda_max) parse_error(sec.where("lambda_max"), "required for analytic sources");
}

void require_window(Section& sec, double lo, double hi, const std::string& what) {
  if (!(lo < hi)) parse_error(sec.where(what), "lower end must be below upper end");
}

}  // namespace

Domain named_domain(const std::string& name) {
  if (name == "square") return Domain::unit_square();
  if (name == "rectangle-2x1") return Domain::rectangle(2.0, 1.0);
  if (name == "disk") return Domain::disk(1.0);
  if (name == "annulus") return Domain::annulus(0.5, 1.0);
  if (name == "l-shape") return Domain::l_shape();
  fail(Errc::config_parse, kModule, "unknown suite domain '" + name + "'");
}

ExperimentConfig parse_config(std::istream& in, const std::string& name) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(Errc::config_parse, kModule, name + ": " + e.what());
  }

  static const std::set<std::string> known{"domain", "solve", "oracle", "poincare", "free-term", "trace",
                                           "weyl-fit", "local-weyl", "tauberian", "wave-trace", "output"};
  for (const auto& [key, child] : tree) {
    if (child.empty()) parse_error(name, "key '" + key + "' outside any section");
    if (!known.count(key)) parse_error(name, "unknown section [" + key + "]");
  }

  ExperimentConfig cfg;
  cfg.name = name;
  auto section = [&](const std::string& s) -> std::optional<pt::ptree> {
    if (const auto c = tree.get_child_optional(pt::ptree::path_type(s, '\0'))) return *c;
    return std::nullopt;
  };

  if (auto t = section("domain")) {
    Section sec("domain", *t);
    cfg.domain = parse_domain(sec);
    sec.reject_unknown();
  }
  if (auto t = section("solve")) {
    Section sec("solve", *t);
    SolveConfig c;
    c.h = sec.require_positive("h");
    c.k = sec.count("k").value_or(c.k);
    c.tol = sec.positive("tol").value_or(c.tol);
    if (c.tol > 1e-4) parse_error(sec.where("tol"), "must lie in (0, 1e-4]");
    c.seed = sec.unsigned_integer("seed").value_or(c.seed);
    if (const auto m = sec.text("method")) {
      if (*m == "auto") {
        c.method = EigenMethod::automatic;
      } else if (*m == "dense") {
        c.method = EigenMethod::dense;
      } else if (*m == "krylov") {
        c.method = EigenMethod::krylov;
      } else {
        parse_error(sec.where("method"), "expected auto, dense or krylov");
      }
    }
    if (const auto e = sec.unsigned_integer("eigenfunctions")) c.eigenfunctions = static_cast<std::size_t>(*e);
    c.write_operator = sec.flag("write_operator").value_or(false);
    c.expect_oracle_rel_error = sec.positive("expect_oracle_rel_error");
    c.expect_max_seconds = sec.positive("expect_max_seconds");
    sec.reject_unknown();
    cfg.solve = c;
  }
  if (auto t = section("oracle")) {
    Section sec("oracle", *t);
    OracleConfig c;
    c.lambda_max = sec.require_positive("lambda_max");
    if (const auto e = sec.unsigned_integer("expect_count")) c.expect_count = static_cast<std::size_t>(*e);
    sec.reject_unknown();
    cfg.oracle = c;
  }
  if (auto t = section("poincare")) {
    Section sec("poincare", *t);
    PoincareConfig c;
    c.h = sec.positive("h").value_or(c.h);
    if (auto d = sec.words("domains")) {
      if (d->empty()) parse_error(sec.where("domains"), "list is empty");
      for (const auto& n : *d) {
        try {
          (void)named_domain(n);
        } catch (const Error& e) {
          parse_error(sec.where("domains"), e.what());
        }
      }
      c.domains = *d;
    }
    c.expect_min_product = sec.positive("expect_min_product");
    sec.reject_unknown();
    cfg.poincare = c;
  }
  if (auto t = section("free-term")) {
    Section sec("free-term", *t);
    FreeTermConfig c;
    if (const auto n = sec.unsigned_integer("n")) {
      if (*n != 2) parse_error(sec.where("n"), "the quadrature cross-check supports n = 2 only");
    }
    c.pairs = sec.count("pairs").value_or(c.pairs);
    c.seed = sec.unsigned_integer("seed").value_or(c.seed);
    c.lambda_lo = sec.positive("lambda_lo").value_or(c.lambda_lo);
    c.lambda_hi = sec.positive("lambda_hi").value_or(c.lambda_hi);
    require_window(sec, c.lambda_lo, c.lambda_hi, "lambda_lo");
    c.x_max = sec.positive("x_max").value_or(c.x_max);
    c.expect_abs_error = sec.positive("expect_abs_error");
    sec.reject_unknown();
    cfg.free_term = c;
  }
  if (auto t = section("trace")) {
    Section sec("trace", *t);
    TraceConfig c;
    parse_source(sec, c);
    c.lambda_lo = sec.positive("lambda_lo");
    c.lambda_hi = sec.positive("lambda_hi");
    if (c.lambda_lo && c.lambda_hi) require_window(sec, *c.lambda_lo, *c.lambda_hi, "lambda_lo");
    c.lambdas = sec.count("lambdas").value_or(c.lambdas);
    if (auto v = sec.numbers("values")) {
      for (double l : *v) {
        if (!(l > 0.0)) parse_error(sec.where("values"), "lambdas must be positive");
      }
      c.values = *v;
    }
    c.q = sec.count("q").value_or(c.q);
    c.expect_rel_error = sec.positive("expect_rel_error");
    sec.reject_unknown();
    cfg.trace = c;
  }
  if (auto t = section("weyl-fit")) {
    Section sec("weyl-fit", *t);
    WeylFitConfig c;
    parse_source(sec, c);
    c.lambda_lo = sec.positive("lambda_lo").value_or(c.lambda_lo);
    c.lambda_hi = sec.positive("lambda_hi").value_or(c.lambda_hi);
    require_window(sec, c.lambda_lo, c.lambda_hi, "lambda_lo");
    c.samples = sec.count("samples").value_or(c.samples);
    c.drift_lambda_hi = sec.positive("drift_lambda_hi");
    if (c.drift_lambda_hi) require_window(sec, c.lambda_lo, *c.drift_lambda_hi, "drift_lambda_hi");
    c.expect_a_rel_error = sec.positive("expect_a_rel_error");
    c.expect_max_drift = sec.positive("expect_max_drift");
    c.expect_max_seconds = sec.positive("expect_max_seconds");
    sec.reject_unknown();
    cfg.weyl_fit = c;
  }
  if (auto t = section("local-weyl")) {
    Section sec("local-weyl", *t);
    LocalWeylConfig c;
    parse_source(sec, c);
    c.points_per_axis = sec.count("points_per_axis").value_or(c.points_per_axis);
    c.lambda_lo = sec.positive("lambda_lo").value_or(c.lambda_lo);
    c.lambda_hi = sec.positive("lambda_hi").value_or(c.lambda_hi);
    require_window(sec, c.lambda_lo, c.lambda_hi, "lambda_lo");
    c.samples = sec.count("samples").value_or(c.samples);
    c.drift_factor = sec.positive("drift_factor").value_or(c.drift_factor);
    if (!(c.drift_factor > 1.0)) parse_error(sec.where("drift_factor"), "must exceed 1");
    c.expect_max_sup_median = sec.positive("expect_max_sup_median");
    c.expect_max_drift = sec.positive("expect_max_drift");
    c.expect_max_diag_drift = sec.positive("expect_max_diag_drift");
    c.expect_max_seconds = sec.positive("expect_max_seconds");
    sec.reject_unknown();
    cfg.local_weyl = c;
  }
  if (auto t = section("tauberian")) {
    Section sec("tauberian", *t);
    TauberianConfig c;
    parse_source(sec, c);
    if (const auto x = sec.numbers("x")) {
      if (x->empty() || x->size() > 3) parse_error(sec.where("x"), "expected 1 to 3 coordinates");
      c.x = Point{};
      for (std::size_t i = 0; i < x->size(); ++i) c.x[static_cast<int>(i)] = (*x)[i];
    }
    c.a = sec.positive("a");
    c.d0 = sec.positive("d0");
    c.p = sec.nonnegative("p");
    c.c1 = sec.positive("c1");
    c.c2 = sec.positive("c2");
    c.tau_lo = sec.number("tau_lo").value_or(c.tau_lo);
    c.tau_hi = sec.number("tau_hi").value_or(c.tau_hi);
    require_window(sec, c.tau_lo, c.tau_hi, "tau_lo");
    c.samples = sec.count("samples").value_or(c.samples);
    c.extend = sec.positive("extend").value_or(c.extend);
    if (!(c.extend >= 1.0)) parse_error(sec.where("extend"), "must be at least 1");
    c.expect_zero_violations = sec.flag("expect_zero_violations").value_or(false);
    c.expect_max_m2_drift = sec.positive("expect_max_m2_drift");
    sec.reject_unknown();
    cfg.tauberian = c;
  }
  if (auto t = section("wave-trace")) {
    Section sec("wave-trace", *t);
    WaveTraceConfig c;
    parse_source(sec, c);
    c.lambda_c = sec.positive("lambda_c").value_or(c.lambda_c);
    if (const auto w = sec.text("window")) {
      if (*w == "gaussian") {
        c.window = TraceWindow::gaussian;
      } else if (*w == "sharp") {
        c.window = TraceWindow::sharp;
      } else {
        parse_error(sec.where("window"), "expected gaussian or sharp");
      }
    }
    c.t_lo = sec.number("t_lo").value_or(c.t_lo);
    c.t_hi = sec.number("t_hi").value_or(c.t_hi);
    require_window(sec, c.t_lo, c.t_hi, "t_lo");
    c.samples = sec.count("samples").value_or(c.samples);
    if (c.samples < 3) parse_error(sec.where("samples"), "need at least 3 samples");
    c.peak_lo = sec.number("peak_lo").value_or(c.peak_lo);
    c.peak_hi = sec.number("peak_hi").value_or(c.peak_hi);
    require_window(sec, c.peak_lo, c.peak_hi, "peak_lo");
    c.prominence = sec.nonnegative("prominence").value_or(c.prominence);
    c.expect_peak = sec.positive("expect_peak");
    c.expect_peak_rel_error = sec.positive("expect_peak_rel_error").value_or(c.expect_peak_rel_error);
    sec.reject_unknown();
    cfg.wave_trace = c;
  }
  if (auto t = section("output")) {
    Section sec("output", *t);
    if (const auto d = sec.text("dir")) cfg.output_dir = *d;
    cfg.plots = sec.flag("plots").value_or(false);
    sec.reject_unknown();
  }

  const bool needs_domain = cfg.solve || cfg.oracle || cfg.trace || cfg.weyl_fit || cfg.local_weyl || cfg.tauberian ||
                            cfg.wave_trace;
  if (needs_domain && !cfg.domain) parse_error(name, "missing [domain] section");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, kModule, "cannot open config " + path.string());
  return parse_config(in, path.string());
}

}  // namespace weyl_lab
