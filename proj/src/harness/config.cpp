#include <omp.h>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "spikelab/harness.hpp"

namespace spikelab {

namespace fs = std::filesystem;

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"scan-bad",       "dim-estimate", "heaviness", "fractal", "orbit",
                                              "correspondence", "minkowski",    "covering",  "accept"};
  return kinds;
}

Json default_params(const std::string& kind) {
  if (kind == "scan-bad")
    return {{"v", Json::array({0.6180339887498949})}, {"eps", 0.05}, {"K", 10000}, {"R", 14}, {"weights", nullptr}};
  if (kind == "dim-estimate")
    return {{"c", Json::array({1.0, 0.5, -1.5})}, {"R", Json::array({9, 5})}, {"metric", "quasi"}, {"m_lo", 3}, {"m_hi", 8}};
  if (kind == "heaviness")
    return {{"v", "golden"}, {"T", Json::array({1000, 10000})}, {"eta", Json::array({0.5, 0.25, 0.125})}};
  if (kind == "fractal")
    return {{"n_seq", "geometric:10"}, {"depth", 5},  {"claim_depth", 4}, {"gamma_samples", 100},
            {"t_samples", 20},         {"eps", 0.3}, {"radii", 21},      {"max_intervals", 1000}};
  if (kind == "orbit") return {{"v", "golden"}, {"t_max", 20.0}, {"step", 0.05}, {"threshold", 0.1}};
  if (kind == "correspondence") return {{"instances", 1000}, {"n_max", 2}, {"eps", 0.1}, {"K", 1000}};
  if (kind == "minkowski") return {{"lines", 100}, {"planes", 100}, {"bound", 1000.0}};
  if (kind == "covering")
    return {{"v", "golden"}, {"offset", Json::array({"0", "0"})}, {"threshold", 0.3}, {"r", 0.1}, {"T", 20}};
  if (kind == "accept") return {{"criteria", Json::array()}, {"determinism_threads", 8}};
  throw ConfigError("unknown experiment kind '" + kind + "'");
}

Json ExperimentConfig::echo() const { return {{"kind", kind}, {"seed", seed}, {"params", params}}; }

namespace {

bool same_shape(const Json& want, const Json& got) {
  if (want.is_null()) return got.is_null() || got.is_array();
  if (want.is_number()) return got.is_number();
  if (want.is_array()) return got.is_array();
  return want.type() == got.type();
}

void apply(ExperimentConfig& cfg, const Json& defaults, const std::string& key, const Json& value) {
  if (key == "seed") {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
      throw ConfigError("seed must be a nonnegative integer");
    cfg.seed = value.get<std::uint64_t>();
    return;
  }
  if (!defaults.contains(key)) throw ConfigError("unknown field '" + key + "' for " + cfg.kind);
  if (!same_shape(defaults.at(key), value)) throw ConfigError("field '" + key + "' has the wrong type");
  // integers stay integers
  if (defaults.at(key).is_number_integer() && !value.is_number_integer())
    throw ConfigError("field '" + key + "' must be an integer");
  cfg.params[key] = value;
}

}  // namespace

ExperimentConfig resolve_config(const std::string& kind, const CliOverrides& cli) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  Json defaults = default_params(kind);
  cfg.params = defaults;
  if (cli.config_file) {
    std::ifstream in(*cli.config_file);
    if (!in) throw ConfigError("cannot read config file " + *cli.config_file);
    Json file;
    try {
      file = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!file.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      if (it.key() == "kind") {
        if (it.value() != kind) throw ConfigError("config kind does not match the command");
        continue;
      }
      apply(cfg, defaults, it.key(), it.value());
    }
  }
  for (const auto& s : cli.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
    std::string key = s.substr(0, eq), raw = s.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    apply(cfg, defaults, key, value);
  }
  if (cli.threads) {
    cfg.threads = *cli.threads;
  } else if (const char* env = std::getenv("SPIKELAB_THREADS")) {
    try {
      cfg.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("SPIKELAB_THREADS is not an integer");
    }
  } else {
    cfg.threads = omp_get_max_threads();
  }
  if (cfg.threads < 1) throw ConfigError("thread count must be >= 1");
  if (cli.out) cfg.out = *cli.out;
  return cfg;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

Json json_number(double x) {
  if (!std::isfinite(x)) return fmt12(x);
  return std::strtod(fmt12(x).c_str(), nullptr);
}

void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  for (const auto& a : artifacts) {
    fs::path final_path = fs::path(dir) / a.name;
    fs::path tmp = final_path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    out << a.content;
    out.close();
    if (!out) {
      for (auto& [t, f] : staged) fs::remove(t, ec);
      fs::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
    staged.push_back({tmp, final_path});
  }
  for (auto& [tmp, final_path] : staged) {
    fs::rename(tmp, final_path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string());
  }
}

int guarded(const std::function<void()>& body, std::string* message) {
  auto fail = [&](int code, const char* what) {
    if (message) *message = what;
    return code;
  };
  try {
    body();
    return 0;
  } catch (const BudgetExceeded& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
}

int run(const ExperimentConfig& cfg, std::string* message) {
  std::string listing;
  int code = guarded(
      [&] {
        omp_set_num_threads(cfg.threads);
        std::vector<Artifact> artifacts = run_experiment(cfg);
        write_artifacts(cfg.out, artifacts);
        for (const auto& a : artifacts) listing += cfg.out + "/" + a.name + "\n";
      },
      message);
  if (code == 0 && message) *message = listing;
  return code;
}

}  // namespace spikelab
