// chainsim: service-chain deployment simulator CLI.
//
//   chainsim run --config <path> [--out <dir>] [--plots] [--seeds N]
//                [--timings] [--print-defaults]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainsim/chainsim.hpp"

int main(int argc, char** argv) {
  CLI::App app{"load-balanced service chain deployment simulator"};
  app.require_subcommand(0, 1);

  auto* run = app.add_subcommand("run", "run a configured experiment sweep");
  std::string config_path;
  std::string out_dir;
  int seeds_n = 0;
  bool plots = false;
  bool timings = false;
  bool show_defaults = false;
  auto* opt_config = run->add_option("--config", config_path, "experiment configuration file");
  auto* opt_out = run->add_option("--out", out_dir, "output directory (overrides run.out_dir)");
  auto* opt_plots = run->add_flag("--plots", plots, "emit SVG charts (overrides run.plots)");
  auto* opt_seeds =
      run->add_option("--seeds", seeds_n, "use seeds 1..N (overrides configured seeds)");
  auto* opt_timings =
      run->add_flag("--timings", timings, "record wall-clock times (overrides run.timings)");
  run->add_flag("--print-defaults", show_defaults,
                "print the default configuration with documentation and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!run->parsed()) {
    std::cerr << app.help();
    return 1;
  }
  if (show_defaults) {
    std::cout << chainsim::print_defaults();
    return 0;
  }
  if (opt_config->count() == 0) {
    std::cerr << "error: run requires --config <path> (or --print-defaults)\n";
    return 1;
  }

  chainsim::ExperimentConfig cfg;
  try {
    cfg = chainsim::parse_config(config_path);
    if (opt_out->count() > 0) cfg.run.out_dir = out_dir;
    if (opt_plots->count() > 0) cfg.run.plots = plots;
    if (opt_timings->count() > 0) cfg.run.timings = timings;
    if (opt_seeds->count() > 0) {
      if (seeds_n < 1) throw chainsim::ConfigError("--seeds: must be >= 1");
      cfg.run.seeds.clear();
      cfg.run.seed_count = seeds_n;
    }
  } catch (const chainsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto results = chainsim::sweep(cfg.topology, cfg.scenario, cfg.run.algorithms,
                                         cfg.effective_seeds(), cfg.placement);
    chainsim::emit_csv(results, cfg.run.out_dir, cfg.run.timings);
    std::cout << "wrote " << cfg.run.out_dir << "/results.csv\n";
    std::cout << "wrote " << cfg.run.out_dir << "/summary.csv\n";
    if (cfg.run.plots) {
      chainsim::emit_plots(results, cfg.run.out_dir);
      std::cout << "wrote " << cfg.run.out_dir
                << "/fig_acceptance.svg fig_utilization.svg fig_stddev.svg fig_lbi.svg\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
