#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "weyl_lab/config.hpp"
#include "weyl_lab/experiment.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool plots = false;
};

void print(const weyl_lab::SubcommandResult& r) {
  std::cout << r.subcommand << ":\n";
  for (const auto& [k, v] : r.constants) std::cout << "  " << k << " = " << v << '\n';
  for (const auto& a : r.assertions) std::cout << "  " << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl-law experiments for the Dirichlet Laplacian"};
  app.require_subcommand(1, 1);
  Args args;

  const char* names[][2] = {
      {"solve", "finite-difference eigenpairs and eigenfunction dumps"},
      {"oracle", "closed-form spectrum up to lambda_max"},
      {"poincare", "lambda_1 * diam^2 across domains"},
      {"free-term", "free-space spectral function: closed form vs quadrature"},
      {"trace", "integral of e(x,x,lambda) against N(lambda)"},
      {"weyl-fit", "fit of N(lambda) to A lambda^{n/2} + B lambda^{(n-1)/2}"},
      {"local-weyl", "local Weyl residual sweep"},
      {"tauberian", "Tauberian comparison at a point"},
      {"wave-trace", "smoothed wave trace and its peaks"},
      {"report", "fold subcommand summaries into report.txt"},
      {"run", "every configured section, then report"},
  };
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "experiment INI file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory (overrides [output] dir)");
    sub->add_option("--seed", args.seed, "RNG seed for solve and free-term");
    sub->add_flag("--plots", args.plots, "also write SVG plots");
  }

  CLI11_PARSE(app, argc, argv);
  const CLI::App* chosen = app.get_subcommands().front();

  try {
    weyl_lab::RunOptions options;
    if (!args.out.empty()) options.output_dir = args.out;
    if (chosen->count("--seed") > 0) options.seed = args.seed;
    options.plots = args.plots;
    weyl_lab::Experiment experiment(weyl_lab::load_config(args.config), options);

    if (chosen->get_name() == "run") {
      const auto report = experiment.run_all();
      for (const auto& r : report.results) print(r);
      std::cout << "report: " << (experiment.output_dir() / "report.txt").string() << '\n';
      return report.exit_code();
    }
    const auto result = experiment.run(chosen->get_name());
    print(result);
    return result.passed() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
