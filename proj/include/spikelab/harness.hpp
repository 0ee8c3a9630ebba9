#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/serialize.hpp"

namespace spikelab {

const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
  std::string kind;
  Json params;  // kind-specific, fully resolved
  std::uint64_t seed = 1;
  // execution settings; not part of the config echo, so artifacts do not depend on them
  int threads = 1;
  std::string out = "out";

  // what artifacts embed
  Json echo() const;
};

Json default_params(const std::string& kind);

struct CliOverrides {
  std::optional<std::string> config_file;
  std::vector<std::string> sets;  // key=value
  std::optional<int> threads;
  std::optional<std::string> out;
};

// defaults, then the config file, then --set; unknown keys and type mismatches raise ConfigError
ExperimentConfig resolve_config(const std::string& kind, const CliOverrides& cli);

struct Artifact {
  std::string name;
  std::string content;
};

// pure: computes the artifacts of one experiment without touching the file system
std::vector<Artifact> run_experiment(const ExperimentConfig& cfg);

// temp file plus rename per artifact
void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts);

// 0 ok, 1 config or input error, 2 budget exceeded
int guarded(const std::function<void()>& body, std::string* message = nullptr);
int run(const ExperimentConfig& cfg, std::string* message = nullptr);

std::string sha256_hex(const std::string& data);
// a JSON number rounded to 12 significant digits; non-finite values become strings
Json json_number(double x);

// lattice spec: "golden", "cf:a1,a2,...", "geometric:B:N", "ones:N", "rational:p/q"
Rational parse_lattice_parameter(const std::string& spec, double t_max);
// quotient spec: "geometric:B", "ones", "cf:a1,..." expanded to count entries
std::vector<BigInt> parse_quotients(const std::string& spec, int count);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double budget_seconds = 0.0;
  double seconds = 0.0;
  Json metrics;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  std::vector<int> only;  // empty: all criteria
  int determinism_threads = 8;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);
// deterministic part of the report (no timings)
Json acceptance_json(const std::vector<CriterionResult>& results);
// acceptance.json with the config echo and content hash
Artifact acceptance_artifact(const ExperimentConfig& cfg, const std::vector<CriterionResult>& results);
AcceptanceOptions acceptance_options(const ExperimentConfig& cfg);

}  // namespace spikelab
