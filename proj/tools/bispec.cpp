// bispec: batch verification suites for biharmonic spectral-stability
// estimates. See README.md for the configuration format.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bispec/runner.hpp"

int main(int argc, char** argv) {
  // Single-threaded BLAS keeps reports byte-identical across runs and makes
  // runtimes predictable; our own worker pool handles the fan-out.
  setenv("OPENBLAS_NUM_THREADS", "1", 0);

  CLI::App app{"biharmonic spectral-stability verification suites"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 0;
  long long seed = -1;

  const char* const commands[] = {"constants",       "smallness",
                                  "spectrum",        "resolvent-sweep",
                                  "identities",      "full-report"};
  std::vector<CLI::App*> subs;
  for (const char* name : commands) {
    CLI::App* sub = app.add_subcommand(
        name, std::string("run the ") + name + " suite");
    sub->add_option("--config", config_path, "configuration file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--jobs", jobs, "worker pool size (default: cores, max 4)");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    if (!in) throw bispec::IoError("cannot open config: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();

    bispec::RunConfig cfg = bispec::parse_config(ss.str());

    // the subcommand must match the config's command
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed() &&
          bispec::command_name(cfg.command) != commands[i])
        throw bispec::ConfigError(
            std::string("subcommand '") + commands[i] +
            "' does not match config command '" +
            bispec::command_name(cfg.command) + "'");
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);

    const bispec::RunOutcome outcome = bispec::run(cfg, jobs);
    for (const std::string& f : outcome.files_written)
      std::cout << "wrote " << f << "\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
