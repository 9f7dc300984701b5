#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "agpotts/errors.hpp"
#include "agpotts/experiment.hpp"

using namespace agpotts;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("agpotts_experiment_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentConfig config_from(const std::string& text, const fs::path& dir) {
  json doc = json::parse(text);
  doc["output"]["dir"] = dir.string();
  return parse_config(doc);
}

std::string error_of(const std::string& text) {
  try {
    parse_config(json::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json without_clock(json j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end();) {
      const std::string key = it.key();
      if (key.find("seconds") != std::string::npos || key.find("per_sec") != std::string::npos) {
        it = j.erase(it);
      } else {
        *it = without_clock(*it);
        ++it;
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) v = without_clock(v);
  }
  return j;
}

}  // namespace

TEST_CASE("defaults and resolved config round trip") {
  const ExperimentConfig c = parse_config(json::parse(R"({"model": {"family": "sk", "n": 12}})"));
  CHECK(c.seed == 1);
  CHECK(c.model.q == 2);
  CHECK(c.sampler.m == 10000);
  CHECK(c.sampler.burn_in == 1000);
  CHECK(c.sampler.chains == 4);
  CHECK(c.sampler.kinds.size() == 1);
  CHECK(c.sampler.bond == BondConvention::Indicator);
  const json resolved = resolved_config_json(c);
  CHECK(resolved["model"]["seed"] == 1);
  CHECK(resolved["sampler"]["epsilon"] == kDefaultEpsilon);
  CHECK(resolved_config_json(parse_config(resolved)) == resolved);

  const ExperimentConfig t = parse_config(json::parse(
      R"({"seed": 9, "model": {"family": "custom", "matrix": [[0, 1], [1, 0]]},
          "tempering": {"ladder": [0.5, 1.0]}, "oracle": {"epsilon": 0.1}})"));
  const json rt = resolved_config_json(t);
  CHECK(rt["tempering"]["n_ex"] == 40);
  CHECK(rt["tempering"]["burn_in_fraction"] == 0.1);
  CHECK(resolved_config_json(parse_config(rt)) == rt);
}

TEST_CASE("validation names the offending field") {
  CHECK(error_of(R"({})").rfind("model:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk"}})").rfind("model.n:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "torus", "n": 3}})").rfind("model.family:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4, "betas": [1, -1]}})")
            .rfind("model.betas[1]:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4}, "sampler": {"m": 10, "burn_in": 10}})")
            .rfind("sampler.burn_in:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4}, "sampler": {"kind": "gibbs"}})")
            .rfind("sampler.kind:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4}, "sampler": {"chains": "4"}})")
            .rfind("sampler.chains:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4}, "tempering": {"ladder": [1, 0.5]}})")
            .rfind("tempering.ladder:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4, "sides": 3}})").rfind("model.sides:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "custom", "matrix": [[0, 1]]}})")
            .rfind("model.matrix[0]:", 0) == 0);
  CHECK(error_of(R"({"model": {"family": "sk", "n": 4}, "seed": -3})").rfind("seed:", 0) == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(NegativeCoupling("x")) == kExitCompatibility);
  CHECK(exit_code_for(WrongStateCount("x")) == kExitCompatibility);
  CHECK(exit_code_for(TooLarge("x")) == kExitOracleSize);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitFailure);
}

TEST_CASE("generate writes a reproducible coupling file") {
  const fs::path dir = scratch("generate");
  std::ostringstream log;
  const auto cw = config_from(R"({"model": {"family": "curie_weiss", "n": 8}})", dir / "cw");
  CHECK(cmd_generate(cw, log) == kExitOk);
  const CouplingMatrix loaded = load_coupling((dir / "cw" / "coupling.csv").string());
  CHECK(loaded.entries(0, 1) == 0.125);
  CHECK(loaded.entries(3, 3) == 0.0);
  CHECK(fs::exists(dir / "cw" / "resolved_config.json"));
  CHECK(log.str().find("lambda_max") != std::string::npos);

  const std::string hop = R"({"model": {"family": "hopfield", "n": 256, "d": 5, "seed": 7}})";
  CHECK(cmd_generate(config_from(hop, dir / "a"), log) == kExitOk);
  CHECK(cmd_generate(config_from(hop, dir / "b"), log) == kExitOk);
  CHECK(slurp(dir / "a" / "coupling.csv") == slurp(dir / "b" / "coupling.csv"));

  const auto sk = config_from(R"({"model": {"family": "sk", "n": 128}})", dir / "sk");
  CHECK(cmd_generate(sk, log) == kExitOk);
  const json summary = json::parse(slurp(dir / "sk" / "spectral_summary.json"));
  MESSAGE("SK n=128 lambda_max = ", summary["lambda_max"].get<double>());

  // a file-backed model reads the same matrix back
  json file_model = {{"model", {{"family", "file"}, {"path", (dir / "cw" / "coupling.csv").string()}}}};
  CHECK(build_coupling(parse_config(file_model)).entries == loaded.entries);
}

TEST_CASE("sample writes traces, diagnostics and one row per beta") {
  const fs::path dir = scratch("sample");
  const std::string text = R"({"seed": 5,
      "model": {"family": "lattice2d", "side": 3, "betas": [0.3, 0.44]},
      "sampler": {"kind": "ag_gibbs", "m": 10, "burn_in": 1, "chains": 2}})";
  std::ostringstream log;
  CHECK(cmd_sample(config_from(text, dir / "a"), log) == kExitOk);
  const auto table = lines_of(dir / "a" / "benchmark.csv");
  REQUIRE(table.size() == 3);
  CHECK(table[0].find("ess_per_sec_incl_precompute,status") != std::string::npos);
  CHECK(table[1].rfind("ag_gibbs,lattice2d,0.3,2,9,", 0) == 0);
  for (int b = 0; b < 2; ++b) {
    for (int c = 0; c < 2; ++c) {
      const fs::path stem = dir / "a" / "traces" /
                            ("beta" + std::to_string(b) + "_chain" + std::to_string(c));
      const auto rows = lines_of(stem.string() + ".csv");
      REQUIRE(rows.size() == 10);
      CHECK(rows[0] == "iter,phi,x_1,x_2,x_3,x_4,x_5,x_6,x_7,x_8,x_9");
      CHECK(rows[1].rfind("2,", 0) == 0);
      const json sidecar = json::parse(slurp(stem.string() + ".json"));
      CHECK(sidecar["kept"] == 9);
      CHECK(sidecar["master_seed"] == 5);
    }
  }
  const json diag = json::parse(slurp(dir / "a" / "diagnostics.json"));
  CHECK(diag["runs"].size() == 2);

  CHECK(cmd_sample(config_from(text, dir / "b"), log) == kExitOk);
  for (const auto& entry : fs::directory_iterator(dir / "a" / "traces")) {
    if (entry.path().extension() == ".csv") {
      CHECK(slurp(entry.path()) == slurp(dir / "b" / "traces" / entry.path().filename()));
    }
  }
  CHECK(without_clock(diag) == without_clock(json::parse(slurp(dir / "b" / "diagnostics.json"))));
}

TEST_CASE("incompatible samplers fail before any output") {
  const fs::path dir = scratch("compat");
  std::ostringstream log;
  const auto wolff = config_from(
      R"({"model": {"family": "sk", "n": 6}, "sampler": {"kind": "wolff", "m": 10, "burn_in": 0}})",
      dir / "w");
  CHECK_THROWS_AS(cmd_sample(wolff, log), NegativeCoupling);
  CHECK_FALSE(fs::exists(dir / "w"));
  const auto ising = config_from(
      R"({"model": {"family": "curie_weiss", "n": 6, "q": 3},
          "sampler": {"kinds": ["ag_gibbs", "ising_ag"], "m": 10, "burn_in": 0}})",
      dir / "i");
  CHECK_THROWS_AS(cmd_benchmark(ising, log), WrongStateCount);
  CHECK_FALSE(fs::exists(dir / "i"));
}

TEST_CASE("oracle results") {
  const fs::path dir = scratch("oracle");
  std::ostringstream log;
  json zero = {{"model", {{"family", "custom"}, {"q", 3}, {"betas", {1.3}},
                          {"matrix", std::vector<std::vector<double>>(5, std::vector<double>(5, 0.0))}}}};
  zero["output"]["dir"] = (dir / "zero").string();
  CHECK(cmd_oracle(parse_config(zero), log) == kExitOk);
  json out = json::parse(slurp(dir / "zero" / "oracle.json"));
  CHECK(out["results"][0]["exact"]["log_partition"].get<double>() ==
        doctest::Approx(5 * std::log(3.0)));

  const auto edge = config_from(
      R"({"model": {"family": "custom", "matrix": [[0, 1], [1, 0]], "betas": [0.6]},
          "oracle": {"want_pmf": true}})",
      dir / "edge");
  CHECK(cmd_oracle(edge, log) == kExitOk);
  out = json::parse(slurp(dir / "edge" / "oracle.json"));
  CHECK(out["results"][0]["exact"]["log_partition"].get<double>() ==
        doctest::Approx(std::log(2 * std::exp(0.6) + 2)));
  CHECK(out["results"][0]["exact"]["pmf"].size() == 4);

  const auto hop = config_from(
      R"({"seed": 3, "model": {"family": "hopfield", "n": 8, "d": 2, "q": 3},
          "oracle": {"epsilon": 0.05}})",
      dir / "hop");
  CHECK(cmd_oracle(hop, log) == kExitOk);
  out = json::parse(slurp(dir / "hop" / "oracle.json"));
  const json cert = out["results"][0]["certificate"];
  CHECK(cert["pass_log_partition"] == true);
  CHECK(cert["pass_kl"] == true);

  const auto big = config_from(R"({"model": {"family": "sk", "n": 40}})", dir / "big");
  CHECK_THROWS_AS(cmd_oracle(big, log), TooLarge);
}

TEST_CASE("temper writes exchange statistics and cold traces") {
  const fs::path dir = scratch("temper");
  std::ostringstream log;
  const auto c = config_from(
      R"({"model": {"family": "sk", "n": 8},
          "sampler": {"kind": "heat_bath", "chains": 2},
          "tempering": {"ladder": [1.0, 1.000000001], "n_ex": 100, "n_mc": 2}})",
      dir);
  CHECK(cmd_temper(c, log) == kExitOk);
  const json stats = json::parse(slurp(dir / "exchange_stats.json"));
  CHECK(stats["pairs"][0]["attempts"] == 200);
  CHECK(stats["pairs"][0]["rate"].get<double>() >= 0.99);
  CHECK(stats["sets"].size() == 2);
  CHECK(fs::exists(dir / "traces" / "set0_replica1.csv"));
  CHECK(fs::exists(dir / "traces" / "set1_replica1.csv"));
  CHECK_FALSE(fs::exists(dir / "traces" / "set0_replica0.csv"));
  CHECK(lines_of(dir / "traces" / "set0_replica1.csv").size() == 1 + 200 - 20);
  const auto table = lines_of(dir / "benchmark.csv");
  CHECK(table.size() == 2);
  CHECK(table[1].rfind("tempered_heat_bath,sk,", 0) == 0);

  const auto missing = config_from(R"({"model": {"family": "sk", "n": 8}})", dir / "none");
  CHECK_THROWS_AS(cmd_temper(missing, log), ConfigError);
}

TEST_CASE("benchmark covers the sampler by beta grid in sorted order") {
  const fs::path dir = scratch("benchmark");
  std::ostringstream log;
  const auto c = config_from(
      R"({"model": {"family": "lattice2d", "side": 4, "betas": [0.5, 0.3, 0.44]},
          "sampler": {"kinds": ["wolff", "heat_bath", "ag_gibbs"], "m": 200, "burn_in": 20,
                      "chains": 2}})",
      dir);
  CHECK(cmd_benchmark(c, log) == kExitOk);
  const auto table = lines_of(dir / "benchmark.csv");
  REQUIRE(table.size() == 10);
  const std::vector<std::string> prefixes = {
      "ag_gibbs,lattice2d,0.3,",  "ag_gibbs,lattice2d,0.44,",  "ag_gibbs,lattice2d,0.5,",
      "heat_bath,lattice2d,0.3,", "heat_bath,lattice2d,0.44,", "heat_bath,lattice2d,0.5,",
      "wolff,lattice2d,0.3,",     "wolff,lattice2d,0.44,",     "wolff,lattice2d,0.5,"};
  for (std::size_t i = 0; i < prefixes.size(); ++i) CHECK(table[i + 1].rfind(prefixes[i], 0) == 0);
}
