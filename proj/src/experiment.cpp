#include "agpotts/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "agpotts/diagnostics.hpp"
#include "agpotts/errors.hpp"
#include "agpotts/io.hpp"
#include "agpotts/model.hpp"

namespace agpotts {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Field access with path-qualified errors and rejection of unknown keys.
class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_.empty() ? "config" : path_, "must be an object");
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const json& at(const std::string& key) const {
    seen_.insert(key);
    return node_.at(key);
  }

  template <class T>
  void read(const std::string& key, T& target) const {
    if (!has(key)) return;
    target = convert<T>(at(key), field(key));
  }

  void reject_unknown() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown field");
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

  template <class T>
  static T convert(const json& value, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) fail(path, "expected a boolean");
      return value.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) fail(path, "expected a string");
      return value.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) fail(path, "expected a number");
      return value.get<T>();
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!value.is_number_unsigned()) fail(path, "expected a non-negative integer");
      return value.get<T>();
    } else {
      if (!value.is_number_integer()) fail(path, "expected an integer");
      const auto wide = value.get<long long>();
      if (wide < std::numeric_limits<T>::min() || wide > std::numeric_limits<T>::max()) {
        fail(path, "out of range");
      }
      return static_cast<T>(wide);
    }
  }

 private:
  const json& node_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

std::vector<double> read_doubles(const json& value, const std::string& path) {
  if (!value.is_array()) Block::fail(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(Block::convert<double>(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class F>
auto parse_enum(const json& value, const std::string& path, F from_string) {
  const auto name = Block::convert<std::string>(value, path);
  try {
    return from_string(name);
  } catch (const Error&) {
    Block::fail(path, "unknown value \"" + name + "\"");
  }
}

InitKind init_from_string(std::string_view name) {
  if (name == "random") return InitKind::Random;
  if (name == "all_zero") return InitKind::AllZero;
  throw ConfigError("unknown init");
}

std::string_view to_string(InitKind init) {
  return init == InitKind::Random ? "random" : "all_zero";
}

const std::set<std::string> kFamilies = {"lattice2d", "curie_weiss", "erdos_renyi", "sk",
                                         "hopfield",  "custom",      "file"};

void parse_model(const Block& b, ModelConfig& m) {
  b.read("family", m.family);
  if (!kFamilies.count(m.family)) b.fail(b.field("family"), "unknown family \"" + m.family + "\"");
  b.read("n", m.n);
  b.read("side", m.side);
  b.read("p", m.p);
  b.read("d", m.d);
  b.read("path", m.path);
  if (b.has("matrix")) {
    const json& rows = b.at("matrix");
    if (!rows.is_array()) b.fail(b.field("matrix"), "expected a list of rows");
    m.matrix.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      m.matrix.push_back(read_doubles(rows[i], b.field("matrix") + "[" + std::to_string(i) + "]"));
    }
  }
  if (b.has("diagonal")) m.diagonal = parse_enum(b.at("diagonal"), b.field("diagonal"), diagonal_from_string);
  if (b.has("lattice_scale")) {
    m.lattice_scale =
        parse_enum(b.at("lattice_scale"), b.field("lattice_scale"), lattice_scale_from_string);
  }
  if (b.has("seed")) m.seed = Block::convert<std::uint64_t>(b.at("seed"), b.field("seed"));
  b.read("q", m.q);
  if (b.has("betas")) m.betas = read_doubles(b.at("betas"), b.field("betas"));
  b.reject_unknown();

  const bool sized = m.family == "curie_weiss" || m.family == "erdos_renyi" || m.family == "sk" ||
                     m.family == "hopfield";
  if (sized && m.n < 1) b.fail(b.field("n"), "must be >= 1");
  if (m.family == "lattice2d" && m.side < 1) b.fail(b.field("side"), "must be >= 1");
  if (m.family == "erdos_renyi" && !(m.p > 0.0 && m.p <= 1.0)) b.fail(b.field("p"), "must lie in (0, 1]");
  if (m.family == "hopfield" && m.d < 1) b.fail(b.field("d"), "must be >= 1");
  if (m.family == "file" && m.path.empty()) b.fail(b.field("path"), "required for family \"file\"");
  if (m.family == "custom") {
    if (m.matrix.empty()) b.fail(b.field("matrix"), "required for family \"custom\"");
    for (std::size_t i = 0; i < m.matrix.size(); ++i) {
      if (m.matrix[i].size() != m.matrix.size()) {
        b.fail(b.field("matrix") + "[" + std::to_string(i) + "]", "matrix must be square");
      }
    }
  }
  if (m.q < 2) b.fail(b.field("q"), "must be >= 2");
  if (m.betas.empty()) b.fail(b.field("betas"), "must list at least one value");
  for (std::size_t i = 0; i < m.betas.size(); ++i) {
    if (!(std::isfinite(m.betas[i]) && m.betas[i] > 0.0)) {
      b.fail(b.field("betas") + "[" + std::to_string(i) + "]", "must be finite and positive");
    }
  }
}

void parse_sampler(const Block& b, SamplerConfig& s) {
  if (b.has("kind")) s.kind = parse_enum(b.at("kind"), b.field("kind"), sampler_kind_from_string);
  if (b.has("kinds")) {
    const json& list = b.at("kinds");
    if (!list.is_array() || list.empty()) b.fail(b.field("kinds"), "expected a non-empty list");
    s.kinds.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      s.kinds.push_back(parse_enum(list[i], b.field("kinds") + "[" + std::to_string(i) + "]",
                                   sampler_kind_from_string));
    }
  }
  b.read("m", s.m);
  b.read("burn_in", s.burn_in);
  b.read("chains", s.chains);
  b.read("epsilon", s.epsilon);
  b.read("jitter", s.jitter);
  if (b.has("bond_convention")) {
    s.bond = parse_enum(b.at("bond_convention"), b.field("bond_convention"),
                        bond_convention_from_string);
  }
  if (b.has("init")) s.init = parse_enum(b.at("init"), b.field("init"), init_from_string);
  b.reject_unknown();

  if (s.kinds.empty()) s.kinds = {s.kind};
  if (s.m < 1) b.fail(b.field("m"), "must be >= 1");
  if (s.burn_in < 0 || s.burn_in >= s.m) b.fail(b.field("burn_in"), "must satisfy 0 <= burn_in < m");
  if (s.chains < 1) b.fail(b.field("chains"), "must be >= 1");
  if (!(s.epsilon > 0.0)) b.fail(b.field("epsilon"), "must be positive");
  if (!(s.jitter > 0.0)) b.fail(b.field("jitter"), "must be positive");
}

void parse_tempering(const Block& b, TemperingConfig& t) {
  if (b.has("ladder")) t.ladder = read_doubles(b.at("ladder"), b.field("ladder"));
  b.read("n_ex", t.n_ex);
  b.read("n_mc", t.n_mc);
  b.read("burn_in_fraction", t.burn_in_fraction);
  b.reject_unknown();
  try {
    make_ladder(t.ladder);
  } catch (const ConfigError& e) {
    b.fail(b.field("ladder"), e.what());
  }
  if (t.n_ex < 1) b.fail(b.field("n_ex"), "must be >= 1");
  if (t.n_mc < 1) b.fail(b.field("n_mc"), "must be >= 1");
  if (!(t.burn_in_fraction >= 0.0 && t.burn_in_fraction < 1.0)) {
    b.fail(b.field("burn_in_fraction"), "must lie in [0, 1)");
  }
}

long tempering_burn_in(const TemperingConfig& t) {
  return static_cast<long>(std::floor(t.burn_in_fraction * static_cast<double>(t.n_ex * t.n_mc)));
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig config;
  const Block root(doc, "");
  if (root.has("seed")) config.seed = Block::convert<std::uint64_t>(root.at("seed"), "seed");
  if (!root.has("model")) root.fail("model", "required");
  parse_model(Block(root.at("model"), "model"), config.model);
  if (root.has("sampler")) parse_sampler(Block(root.at("sampler"), "sampler"), config.sampler);
  else parse_sampler(Block(json::object(), "sampler"), config.sampler);
  if (root.has("tempering")) {
    config.tempering.emplace();
    parse_tempering(Block(root.at("tempering"), "tempering"), *config.tempering);
  }
  if (root.has("oracle")) {
    const Block b(root.at("oracle"), "oracle");
    b.read("want_pmf", config.oracle.want_pmf);
    if (b.has("epsilon")) {
      config.oracle.epsilon = Block::convert<double>(b.at("epsilon"), "oracle.epsilon");
      if (!(*config.oracle.epsilon > 0.0)) b.fail("oracle.epsilon", "must be positive");
    }
    b.reject_unknown();
  }
  if (root.has("output")) {
    const Block b(root.at("output"), "output");
    b.read("dir", config.output.dir);
    b.read("write_traces", config.output.write_traces);
    b.read("all_replicas", config.output.all_replicas);
    b.reject_unknown();
    if (config.output.dir.empty()) b.fail("output.dir", "must not be empty");
  }
  root.reject_unknown();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

json resolved_config_json(const ExperimentConfig& c) {
  json model = {
      {"family", c.model.family},
      {"n", c.model.n},
      {"side", c.model.side},
      {"p", c.model.p},
      {"d", c.model.d},
      {"diagonal", std::string(to_string(c.model.diagonal))},
      {"lattice_scale", std::string(to_string(c.model.lattice_scale))},
      {"seed", c.model.seed.value_or(c.seed)},
      {"q", c.model.q},
      {"betas", c.model.betas},
  };
  if (c.model.family == "file") model["path"] = c.model.path;
  if (c.model.family == "custom") model["matrix"] = c.model.matrix;

  json kinds = json::array();
  for (auto k : c.sampler.kinds) kinds.push_back(std::string(to_string(k)));
  json out = {
      {"seed", c.seed},
      {"model", model},
      {"sampler",
       {
           {"kind", std::string(to_string(c.sampler.kind))},
           {"kinds", kinds},
           {"m", c.sampler.m},
           {"burn_in", c.sampler.burn_in},
           {"chains", c.sampler.chains},
           {"epsilon", c.sampler.epsilon},
           {"jitter", c.sampler.jitter},
           {"bond_convention", std::string(to_string(c.sampler.bond))},
           {"init", std::string(to_string(c.sampler.init))},
       }},
      {"oracle", {{"want_pmf", c.oracle.want_pmf}}},
      {"output",
       {
           {"dir", c.output.dir},
           {"write_traces", c.output.write_traces},
           {"all_replicas", c.output.all_replicas},
       }},
  };
  if (c.oracle.epsilon) out["oracle"]["epsilon"] = *c.oracle.epsilon;
  if (c.tempering) {
    out["tempering"] = {
        {"ladder", c.tempering->ladder},
        {"n_ex", c.tempering->n_ex},
        {"n_mc", c.tempering->n_mc},
        {"burn_in_fraction", c.tempering->burn_in_fraction},
    };
  }
  return out;
}

CouplingMatrix build_coupling(const ExperimentConfig& config) {
  const ModelConfig& m = config.model;
  RngStream stream(m.seed.value_or(config.seed), 0);
  if (m.family == "lattice2d") return lattice_2d(m.side, m.lattice_scale);
  if (m.family == "curie_weiss") return curie_weiss(m.n);
  if (m.family == "erdos_renyi") return erdos_renyi(m.n, m.p, stream);
  if (m.family == "sk") return sk(m.n, stream);
  if (m.family == "hopfield") return hopfield(m.n, m.d, stream);
  if (m.family == "file") {
    try {
      return load_coupling(m.path);
    } catch (const Error& e) {
      throw ConfigError("model.path: " + std::string(e.what()));
    }
  }
  const auto size = static_cast<Eigen::Index>(m.matrix.size());
  Eigen::MatrixXd entries(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) entries(i, j) = m.matrix[i][j];
  }
  try {
    return make_custom(entries, m.diagonal);
  } catch (const DimensionMismatch& e) {
    throw ConfigError("model.matrix: " + std::string(e.what()));
  }
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
  if (dynamic_cast<const NegativeCoupling*>(&error) ||
      dynamic_cast<const WrongStateCount*>(&error)) {
    return kExitCompatibility;
  }
  if (dynamic_cast<const TooLarge*>(&error)) return kExitOracleSize;
  return kExitFailure;
}

namespace {

void write_json(const fs::path& path, const json& value) {
  std::ofstream out(path);
  out << std::setw(2) << value << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

fs::path prepare_output(const ExperimentConfig& config) {
  const fs::path dir(config.output.dir);
  fs::create_directories(dir);
  write_json(dir / "resolved_config.json", resolved_config_json(config));
  return dir;
}

void write_trace_files(const fs::path& stem, const ChainTrace& trace) {
  {
    std::ofstream out(stem.string() + ".csv");
    write_trace_csv(out, trace);
    if (!out) throw Error("cannot write " + stem.string() + ".csv");
  }
  write_json(stem.string() + ".json", trace_sidecar_json(trace));
}

std::string status_of(const DiagnosticsReport& report) {
  if (!report.rhat) return "rhat_undefined";
  if (*report.rhat > kRhatFailure) return "rhat_gt_1.2";
  return "ok";
}

std::string table_header() { return report_csv_header() + ",status"; }

std::string model_label(const CouplingMatrix& coupling) {
  return std::string(to_string(coupling.family));
}

void check_all(const std::vector<SamplerKind>& kinds, const CouplingMatrix& coupling,
               const ModelConfig& m) {
  for (auto kind : kinds) {
    for (double beta : m.betas) check_compatibility(kind, make_model(coupling, beta, m.q));
  }
}

void write_table(const fs::path& path, const std::vector<std::string>& rows) {
  std::ofstream out(path);
  out << table_header() << '\n';
  for (const auto& row : rows) out << row << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

std::string beta_tag(std::size_t index) { return "beta" + std::to_string(index); }

}  // namespace

int cmd_generate(const ExperimentConfig& config, std::ostream& log) {
  const CouplingMatrix coupling = build_coupling(config);
  const fs::path dir = prepare_output(config);
  save_coupling((dir / "coupling.csv").string(), coupling);

  json betas = json::array();
  log << "family " << to_string(coupling.family) << ", n = " << coupling.n() << '\n';
  for (double beta : config.model.betas) {
    const SpectralSummary s = spectral_summary(coupling, beta, config.sampler.epsilon);
    betas.push_back({{"beta", beta}, {"rank_at_epsilon", s.rank_at_epsilon}});
    log << "beta " << format_number(beta, kDiagnosticsDigits) << ": lambda_max "
        << format_number(s.lambda_max, kDiagnosticsDigits) << ", lambda_min "
        << format_number(s.lambda_min, kDiagnosticsDigits) << ", k "
        << s.rank_at_epsilon << " at epsilon " << config.sampler.epsilon << '\n';
  }
  const SpectralSummary s = spectral_summary(coupling, config.model.betas.front(),
                                             config.sampler.epsilon);
  write_json(dir / "spectral_summary.json", {
                                                {"n", coupling.n()},
                                                {"lambda_max", s.lambda_max},
                                                {"lambda_min", s.lambda_min},
                                                {"epsilon", config.sampler.epsilon},
                                                {"ranks", betas},
                                            });
  return kExitOk;
}

int cmd_sample(const ExperimentConfig& config, std::ostream& log) {
  const CouplingMatrix coupling = build_coupling(config);
  const SamplerConfig& s = config.sampler;
  check_all({s.kind}, coupling, config.model);
  const fs::path dir = prepare_output(config);
  if (config.output.write_traces) fs::create_directories(dir / "traces");

  json runs = json::array();
  std::vector<std::string> rows;
  log << table_header() << '\n';
  for (std::size_t b = 0; b < config.model.betas.size(); ++b) {
    const double beta = config.model.betas[b];
    const PottsModel model = make_model(coupling, beta, config.model.q);
    const auto traces = run_chains(s.kind, model, s.init, s.m, s.burn_in, s.chains, config.seed,
                                   s.options(), config.output.write_traces);
    if (config.output.write_traces) {
      for (std::size_t c = 0; c < traces.size(); ++c) {
        write_trace_files(dir / "traces" / (beta_tag(b) + "_chain" + std::to_string(c)),
                          traces[c]);
      }
    }
    const DiagnosticsReport report = diagnose(traces);
    runs.push_back({{"beta", beta}, {"report", report_json(report)}});
    const RunLabel label{std::string(to_string(s.kind)), model_label(coupling), beta,
                         config.model.q, static_cast<long>(coupling.n())};
    rows.push_back(report_csv_row(label, report) + "," + status_of(report));
    log << rows.back() << (report.mixing_failure() ? "  <- not mixing" : "") << '\n';
  }
  write_json(dir / "diagnostics.json", {{"sampler", std::string(to_string(s.kind))}, {"runs", runs}});
  write_table(dir / "benchmark.csv", rows);
  return kExitOk;
}

int cmd_temper(const ExperimentConfig& config, std::ostream& log) {
  if (!config.tempering) throw ConfigError("tempering: block required by temper");
  const TemperingConfig& tc = *config.tempering;
  const SamplerConfig& s = config.sampler;
  const CouplingMatrix coupling = build_coupling(config);
  const TemperingLadder ladder = make_ladder(tc.ladder);
  {
    ModelConfig ladder_model = config.model;
    ladder_model.betas = ladder.betas;
    check_all({s.kind}, coupling, ladder_model);
  }
  const fs::path dir = prepare_output(config);
  if (config.output.write_traces) fs::create_directories(dir / "traces");

  const TemperingSchedule schedule{tc.n_ex, tc.n_mc, tempering_burn_in(tc)};
  std::vector<ChainTrace> cold;
  json sets = json::array();
  ExchangeStats total;
  total.attempts.assign(ladder.size() - 1, 0);
  total.accepts.assign(ladder.size() - 1, 0);
  double seconds_sampling = 0.0;
  double seconds_precompute = 0.0;
  for (std::size_t set = 0; set < s.chains; ++set) {
    TemperedRun run = tempered_run(s.kind, coupling, config.model.q, ladder, schedule,
                                   config.seed, set, s.init, s.options(),
                                   config.output.write_traces);
    for (std::size_t t = 0; t + 1 < ladder.size(); ++t) {
      total.attempts[t] += run.exchanges.attempts[t];
      total.accepts[t] += run.exchanges.accepts[t];
    }
    for (const auto& r : run.replicas) seconds_sampling += r.wall_seconds_sampling;
    seconds_precompute += run.wall_seconds_precompute;
    if (config.output.write_traces) {
      const std::size_t first = config.output.all_replicas ? 0 : ladder.size() - 1;
      for (std::size_t t = first; t < ladder.size(); ++t) {
        write_trace_files(
            dir / "traces" / ("set" + std::to_string(set) + "_replica" + std::to_string(t)),
            run.replicas[t]);
      }
    }
    json stats = exchange_stats_json(ladder, run.exchanges);
    stats["set"] = set;
    sets.push_back(stats);
    cold.push_back(std::move(run.replicas.back()));
  }

  json exchanges = exchange_stats_json(ladder, total);
  exchanges["sets"] = sets;
  write_json(dir / "exchange_stats.json", exchanges);
  for (std::size_t t = 0; t + 1 < ladder.size(); ++t) {
    log << "exchange " << format_number(ladder.betas[t], kDiagnosticsDigits) << " <-> "
        << format_number(ladder.betas[t + 1], kDiagnosticsDigits) << ": rate "
        << format_number(total.rate(t), kDiagnosticsDigits) << '\n';
  }

  DiagnosticsReport report = diagnose(cold);
  report.seconds_sampling = seconds_sampling;
  report.seconds_precompute = seconds_precompute;
  if (report.ess && seconds_sampling > 0.0) {
    report.ess_per_second = ess_per_second(*report.ess, seconds_sampling, seconds_precompute, false);
    report.ess_per_second_incl_precompute =
        ess_per_second(*report.ess, seconds_sampling, seconds_precompute, true);
  }
  const std::string sampler = "tempered_" + std::string(to_string(s.kind));
  write_json(dir / "diagnostics.json", {{"sampler", sampler},
                                        {"beta", ladder.betas.back()},
                                        {"report", report_json(report)}});
  const RunLabel label{sampler, model_label(coupling), ladder.betas.back(), config.model.q,
                       static_cast<long>(coupling.n())};
  const std::string row = report_csv_row(label, report) + "," + status_of(report);
  write_table(dir / "benchmark.csv", {row});
  log << table_header() << '\n' << row << (report.mixing_failure() ? "  <- not mixing" : "") << '\n';
  return kExitOk;
}

int cmd_oracle(const ExperimentConfig& config, std::ostream& log) {
  const CouplingMatrix coupling = build_coupling(config);
  const std::int64_t states = state_count(coupling.n(), config.model.q);
  if (states < 0 || states > kMaxEnumeratedStates) {
    throw TooLarge("oracle: q^n exceeds " + std::to_string(kMaxEnumeratedStates) + " states");
  }
  const fs::path dir = prepare_output(config);
  json results = json::array();
  for (double beta : config.model.betas) {
    const PottsModel model = make_model(coupling, beta, config.model.q);
    json entry = {{"beta", beta},
                  {"exact", exact_summary_json(exact_summary(model, config.oracle.want_pmf))}};
    log << "beta " << format_number(beta, kDiagnosticsDigits) << ": log Z "
        << format_number(entry["exact"]["log_partition"].get<double>(), kMatrixDigits)
        << ", E[phi] "
        << format_number(entry["exact"]["mean_phi"].get<double>(), kMatrixDigits) << '\n';
    if (config.oracle.epsilon) {
      const Lemma1Certificate cert = lemma1_certificate(model, *config.oracle.epsilon);
      entry["certificate"] = certificate_json(cert);
      log << "  certificate at epsilon " << *config.oracle.epsilon << ": log Z "
          << (cert.pass_log_partition ? "pass" : "FAIL") << ", KL "
          << (cert.pass_kl ? "pass" : "FAIL") << '\n';
    }
    results.push_back(entry);
  }
  write_json(dir / "oracle.json", {{"n", coupling.n()}, {"q", config.model.q}, {"results", results}});
  return kExitOk;
}

int cmd_benchmark(const ExperimentConfig& config, std::ostream& log) {
  const CouplingMatrix coupling = build_coupling(config);
  const SamplerConfig& s = config.sampler;
  check_all(s.kinds, coupling, config.model);
  const fs::path dir = prepare_output(config);

  struct Row {
    std::string sampler;
    double beta;
    std::string text;
  };
  std::vector<Row> rows;
  for (auto kind : s.kinds) {
    for (double beta : config.model.betas) {
      const RunLabel label{std::string(to_string(kind)), model_label(coupling), beta,
                           config.model.q, static_cast<long>(coupling.n())};
      std::string text;
      try {
        const PottsModel model = make_model(coupling, beta, config.model.q);
        const auto traces =
            run_chains(kind, model, s.init, s.m, s.burn_in, s.chains, config.seed, s.options(), false);
        const DiagnosticsReport report = diagnose(traces);
        text = report_csv_row(label, report) + "," + status_of(report);
      } catch (const Error& e) {
        std::string message = e.what();
        std::replace(message.begin(), message.end(), ',', ';');
        std::replace(message.begin(), message.end(), '\n', ' ');
        text = report_csv_row(label, DiagnosticsReport{}) + ",error: " + message;
      }
      log << text << '\n';
      rows.push_back({label.sampler, beta, std::move(text)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.sampler != b.sampler ? a.sampler < b.sampler : a.beta < b.beta;
  });
  std::vector<std::string> lines;
  for (auto& r : rows) lines.push_back(std::move(r.text));
  write_table(dir / "benchmark.csv", lines);
  return kExitOk;
}

}  // namespace agpotts
