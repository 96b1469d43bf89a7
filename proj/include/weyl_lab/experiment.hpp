#pragma once

// Config-driven experiment runner behind the weyl-lab executable.
//
// Every subcommand writes its CSV tables plus summary_<subcommand>.txt into
// the output directory; "report" folds the summaries into report.txt.
// Summary lines are "key = value" or "assert <name> PASS|FAIL <detail>".

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weyl_lab/config.hpp"
#include "weyl_lab/spectrum.hpp"

namespace weyl_lab {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SubcommandResult {
  std::string subcommand;
  std::vector<std::filesystem::path> csvs;
  std::vector<std::pair<std::string, std::string>> constants;
  std::vector<Assertion> assertions;
  double seconds = 0.0;

  bool passed() const;
};

struct ExperimentReport {
  std::vector<SubcommandResult> results;

  bool passed() const;
  /// 0 when every assertion passed, 2 otherwise.
  int exit_code() const;
};

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  bool plots = false;
};

/// Subcommands in dependency order, as executed by run_all().
const std::vector<std::string>& subcommand_order();

class Experiment {
 public:
  Experiment(ExperimentConfig config, const RunOptions& options);
  ~Experiment();
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  const ExperimentConfig& config() const noexcept { return config_; }
  const std::filesystem::path& output_dir() const noexcept { return config_.output_dir; }

  /// Runs one subcommand. Throws Error(config_parse) when its section is
  /// absent and Error(missing_prerequisite) when a discrete source has no
  /// solve output yet.
  SubcommandResult run(std::string_view subcommand);

  /// Every configured section in dependency order, then "report".
  ExperimentReport run_all();

 private:
  SubcommandResult solve();
  SubcommandResult oracle();
  SubcommandResult poincare();
  SubcommandResult free_term_check();
  SubcommandResult trace();
  SubcommandResult weyl_fit_sweep();
  SubcommandResult local_weyl();
  SubcommandResult tauberian();
  SubcommandResult wave_trace_sweep();
  SubcommandResult report();

  /// Spectrum for a section: the analytic oracle at lambda_max, or the
  /// discrete spectrum from solve (kept in memory or reloaded from disk).
  std::shared_ptr<const Spectrum> source_spectrum(const SpectrumSourceConfig& source, double needed);
  std::shared_ptr<const Spectrum> load_discrete();
  void write_summary(const SubcommandResult& r) const;
  std::filesystem::path path(const std::string& file) const { return config_.output_dir / file; }

  ExperimentConfig config_;
  std::shared_ptr<const Spectrum> discrete_;
};

/// Parses `summary_<subcommand>.txt` files under dir into results (only
/// assertions and constants are recovered).
std::vector<SubcommandResult> read_summaries(const std::filesystem::path& dir);

}  // namespace weyl_lab
