#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "spikelab/harness.hpp"

using namespace spikelab;

namespace {

// accept prints a line per criterion with its timing; the timings stay out of acceptance.json
int run_accept(const ExperimentConfig& cfg, std::string* message) {
  return guarded(
      [&] {
        omp_set_num_threads(cfg.threads);
        auto results = run_acceptance(acceptance_options(cfg));
        for (const auto& r : results)
          std::printf("%s criterion %d: %s (%.1f s, budget %.0f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                      r.seconds, r.budget_seconds);
        write_artifacts(cfg.out, {acceptance_artifact(cfg, results)});
        *message = cfg.out + "/acceptance.json\n";
      },
      message);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spikelab: experiments on shrinking targets and bad grids"};
  std::string kind;
  CliOverrides cli;
  std::string config_file, out;
  int threads = 0;
  app.add_option("kind", kind, "experiment kind")->required()->check(CLI::IsMember(experiment_kinds()));
  app.add_option("--config", config_file, "JSON config file");
  app.add_option("--set", cli.sets, "override one parameter, key=value")->take_all();
  app.add_option("--threads", threads, "worker threads (default: SPIKELAB_THREADS, then all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!config_file.empty()) cli.config_file = config_file;
  if (!out.empty()) cli.out = out;
  if (threads > 0) cli.threads = threads;

  ExperimentConfig cfg;
  std::string message;
  int code = guarded([&] { cfg = resolve_config(kind, cli); }, &message);
  if (code == 0) code = kind == "accept" ? run_accept(cfg, &message) : run(cfg, &message);
  if (code == 0)
    std::cout << message;
  else
    std::cerr << "spikelab: " << message << "\n";
  return code;
}
