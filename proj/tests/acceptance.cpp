// Runs every acceptance criterion and prints one line per criterion; exit status 1 on any failure.
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "spikelab/harness.hpp"

using namespace spikelab;

int main(int argc, char** argv) {
  AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  auto results = run_acceptance(opts);
  bool all = true;
  std::ofstream timing("acceptance_timing.txt");
  for (const auto& r : results) {
    std::printf("%s criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
    std::printf("    %s\n", r.metrics.dump().c_str());
    std::printf("    %.2f s (budget %.0f s)\n", r.seconds, r.budget_seconds);
    timing << r.id << " " << r.seconds << " " << r.budget_seconds << "\n";
    all = all && r.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
