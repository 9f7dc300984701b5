#pragma once

// Declarative experiment configs and the batch commands behind the CLI.

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agpotts/coupling.hpp"
#include "agpotts/samplers.hpp"
#include "agpotts/tempering.hpp"

namespace agpotts {

struct ModelConfig {
  std::string family = "curie_weiss";  // coupling family name, or "file"
  int n = 0;  // ignored by lattice2d, which uses side
  int side = 0;
  double p = 0.5;
  int d = 1;
  std::string path;                          // family "file"
  std::vector<std::vector<double>> matrix;   // family "custom"
  DiagonalConvention diagonal = DiagonalConvention::Zeroed;
  LatticeScale lattice_scale = LatticeScale::None;
  /// Seed of the coupling generator; defaults to the experiment seed.
  std::optional<std::uint64_t> seed;
  int q = 2;
  std::vector<double> betas{1.0};
};

struct SamplerConfig {
  SamplerKind kind = SamplerKind::AGGibbs;
  std::vector<SamplerKind> kinds;  // benchmark sweep; defaults to {kind}
  long m = 10000;
  long burn_in = 1000;
  std::size_t chains = 4;
  double epsilon = kDefaultEpsilon;
  double jitter = kDefaultJitter;
  BondConvention bond = BondConvention::Indicator;
  InitKind init = InitKind::Random;

  SamplerOptions options() const { return {jitter, epsilon, bond}; }
};

struct TemperingConfig {
  std::vector<double> ladder;
  long n_ex = 40;
  long n_mc = 1000;
  double burn_in_fraction = 0.1;
};

struct OracleConfig {
  bool want_pmf = false;
  std::optional<double> epsilon;
};

struct OutputConfig {
  std::string dir = "out";
  bool write_traces = true;
  bool all_replicas = false;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  ModelConfig model;
  SamplerConfig sampler;
  std::optional<TemperingConfig> tempering;
  OracleConfig oracle;
  OutputConfig output;
};

/// Validates every field before returning; ConfigError messages name the
/// offending field path (e.g. "sampler.burn_in").
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Every field, defaults included; parsing it reproduces the same config.
nlohmann::json resolved_config_json(const ExperimentConfig& config);

CouplingMatrix build_coupling(const ExperimentConfig& config);

/// Exit codes of the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitCompatibility = 3,
  kExitOracleSize = 4,
};

/// Map an in-flight exception to its exit code.
int exit_code_for(const std::exception& error);

int cmd_generate(const ExperimentConfig& config, std::ostream& log);
int cmd_sample(const ExperimentConfig& config, std::ostream& log);
int cmd_temper(const ExperimentConfig& config, std::ostream& log);
int cmd_oracle(const ExperimentConfig& config, std::ostream& log);
int cmd_benchmark(const ExperimentConfig& config, std::ostream& log);

}  // namespace agpotts
