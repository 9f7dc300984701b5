#include <chrono>
#include <string>

#include "agpotts/parallel.hpp"
#include "agpotts/samplers.hpp"

namespace agpotts {

namespace {

constexpr std::pair<SamplerKind, std::string_view> kSamplerNames[] = {
    {SamplerKind::HeatBath, "heat_bath"},
    {SamplerKind::AGGibbs, "ag_gibbs"},
    {SamplerKind::LowRankAGGibbs, "lowrank_ag_gibbs"},
    {SamplerKind::IsingAG, "ising_ag"},
    {SamplerKind::IsingLowRankAG, "ising_lowrank_ag"},
    {SamplerKind::SwendsenWang, "swendsen_wang"},
    {SamplerKind::Wolff, "wolff"},
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class HeatBathKernel final : public Kernel {
 public:
  explicit HeatBathKernel(const PottsModel& model) : Kernel(model) {}
  SamplerKind kind() const override { return SamplerKind::HeatBath; }
  void step(Spins& x, RngStream& stream) const override { heat_bath_sweep(model(), x, stream); }
};

class AGKernel final : public Kernel {
 public:
  AGKernel(const PottsModel& model, SamplerKind kind, double jitter)
      : Kernel(model), kind_(kind), precomp_(precompute_ag(model.coupling, model.beta, jitter)) {}
  SamplerKind kind() const override { return kind_; }
  void step(Spins& x, RngStream& stream) const override {
    if (kind_ == SamplerKind::IsingAG) {
      ising_ag_step(precomp_, model().q, x, stream);
    } else {
      ag_gibbs_step(precomp_, model().q, x, stream);
    }
  }

 private:
  SamplerKind kind_;
  AGPrecomp precomp_;
};

class LowRankKernel final : public Kernel {
 public:
  LowRankKernel(const PottsModel& model, SamplerKind kind, double epsilon)
      : Kernel(model),
        kind_(kind),
        precomp_(precompute_lowrank(model.coupling, model.beta, epsilon)) {}
  SamplerKind kind() const override { return kind_; }
  void step(Spins& x, RngStream& stream) const override {
    if (kind_ == SamplerKind::IsingLowRankAG) {
      ising_lowrank_ag_step(precomp_, model().q, x, stream);
    } else {
      lowrank_ag_step(precomp_, model().q, x, stream);
    }
  }

 private:
  SamplerKind kind_;
  LowRankPrecomp precomp_;
};

class ClusterKernel final : public Kernel {
 public:
  ClusterKernel(const PottsModel& model, SamplerKind kind, BondConvention convention)
      : Kernel(model), kind_(kind), graph_(make_cluster_graph(model, convention)) {}
  SamplerKind kind() const override { return kind_; }
  void step(Spins& x, RngStream& stream) const override {
    if (kind_ == SamplerKind::Wolff) {
      wolff_step(graph_, x, stream);
    } else {
      swendsen_wang_step(graph_, x, stream);
    }
  }

 private:
  SamplerKind kind_;
  ClusterGraph graph_;
};

}  // namespace

std::string_view to_string(SamplerKind kind) {
  for (const auto& [k, name] : kSamplerNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SamplerKind sampler_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kSamplerNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown sampler kind '" + std::string(name) + "'");
}

std::string_view to_string(BondConvention convention) {
  return convention == BondConvention::Indicator ? "indicator" : "doubled_ising";
}

BondConvention bond_convention_from_string(std::string_view name) {
  if (name == "indicator") return BondConvention::Indicator;
  if (name == "doubled_ising") return BondConvention::DoubledIsing;
  throw ConfigError("unknown bond convention '" + std::string(name) + "'");
}

void check_compatibility(SamplerKind kind, const PottsModel& model) {
  switch (kind) {
    case SamplerKind::IsingAG:
    case SamplerKind::IsingLowRankAG:
      if (model.q != 2) {
        throw WrongStateCount(std::string(to_string(kind)) + " requires q = 2, got q = " +
                              std::to_string(model.q));
      }
      break;
    case SamplerKind::SwendsenWang:
    case SamplerKind::Wolff:
      if (model.coupling.has_negative_entries()) {
        throw NegativeCoupling(std::string(to_string(kind)) +
                               " requires a coupling matrix without negative entries");
      }
      break;
    default:
      break;
  }
}

std::shared_ptr<const Kernel> make_kernel(SamplerKind kind, const PottsModel& model,
                                          const SamplerOptions& options) {
  check_compatibility(kind, model);
  switch (kind) {
    case SamplerKind::HeatBath:
      return std::make_shared<HeatBathKernel>(model);
    case SamplerKind::AGGibbs:
    case SamplerKind::IsingAG:
      return std::make_shared<AGKernel>(model, kind, options.jitter);
    case SamplerKind::LowRankAGGibbs:
    case SamplerKind::IsingLowRankAG:
      return std::make_shared<LowRankKernel>(model, kind, options.epsilon);
    case SamplerKind::SwendsenWang:
    case SamplerKind::Wolff:
      return std::make_shared<ClusterKernel>(model, kind, options.bond);
  }
  throw ConfigError("unknown sampler kind");
}

Spins initial_state(const ChainInit& init, Eigen::Index n, int q, RngStream& stream) {
  if (const auto* given = std::get_if<Spins>(&init)) {
    if (given->size() != n || !valid_spins(*given, q)) {
      throw DimensionMismatch("initial state has wrong size or out-of-range states");
    }
    return *given;
  }
  if (std::get<InitKind>(init) == InitKind::AllZero) return Spins::Zero(n);
  Spins x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = static_cast<int>(stream.uniform_index(q));
  return x;
}

ChainTrace run_chain(const Kernel& kernel, const ChainInit& init, long m, long burn_in,
                     RngStream& stream, bool record_draws) {
  if (m < 1) throw ConfigError("run_chain: m must be positive");
  if (burn_in < 0 || burn_in >= m) throw ConfigError("run_chain: need 0 <= burn_in < m");
  const PottsModel& model = kernel.model();
  const Eigen::Index n = model.n();

  ChainTrace trace;
  trace.kind = kernel.kind();
  trace.master_seed = stream.master_seed();
  trace.stream_id = stream.stream_id();
  trace.iterations = m;
  trace.burn_in = burn_in;
  trace.phi_series.resize(m - burn_in);
  trace.warmup_phi.resize(burn_in);
  if (record_draws) trace.draws.resize(m - burn_in, n);

  Spins x = initial_state(init, n, model.q, stream);
  Clock::duration sampling{};
  for (long t = 0; t < m; ++t) {
    const auto start = Clock::now();
    kernel.step(x, stream);
    sampling += Clock::now() - start;
    const double phi = summary_phi(model, x);
    if (t < burn_in) {
      trace.warmup_phi(t) = phi;
    } else {
      trace.phi_series(t - burn_in) = phi;
      if (record_draws) trace.draws.row(t - burn_in) = x.transpose();
    }
  }
  trace.wall_seconds_sampling = std::chrono::duration<double>(sampling).count();
  trace.final_state = std::move(x);
  return trace;
}

ChainTrace run_chain(SamplerKind kind, const PottsModel& model, const ChainInit& init, long m,
                     long burn_in, RngStream& stream, const SamplerOptions& options,
                     bool record_draws) {
  const auto start = Clock::now();
  const auto kernel = make_kernel(kind, model, options);
  const double precompute = seconds_since(start);
  ChainTrace trace = run_chain(*kernel, init, m, burn_in, stream, record_draws);
  trace.wall_seconds_precompute = precompute;
  return trace;
}

std::vector<ChainTrace> run_chains(SamplerKind kind, const PottsModel& model,
                                   const ChainInit& init, long m, long burn_in,
                                   std::size_t chains, std::uint64_t master_seed,
                                   const SamplerOptions& options, bool record_draws) {
  if (chains < 1) throw ConfigError("run_chains: need at least one chain");
  const auto start = Clock::now();
  const auto kernel = make_kernel(kind, model, options);
  const double precompute = seconds_since(start);
  std::vector<ChainTrace> traces(chains);
  parallel_for(chains, [&](std::size_t c) {
    RngStream stream(master_seed, chain_stream_id(c));
    traces[c] = run_chain(*kernel, init, m, burn_in, stream, record_draws);
    traces[c].wall_seconds_precompute = precompute;
  });
  return traces;
}

}  // namespace agpotts
