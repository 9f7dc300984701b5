#include "agpotts/tempering.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>

#include "agpotts/parallel.hpp"

namespace agpotts {

TemperingLadder make_ladder(std::vector<double> betas) {
  if (betas.size() < 2) throw ConfigError("tempering ladder needs at least two betas");
  if (!(betas.front() > 0.0)) throw ConfigError("tempering ladder betas must be positive");
  for (std::size_t t = 1; t < betas.size(); ++t) {
    if (!(betas[t] > betas[t - 1])) {
      throw ConfigError("tempering ladder betas must be strictly increasing");
    }
  }
  return TemperingLadder{std::move(betas)};
}

TemperingLadder linear_ladder(double lo, double hi, std::size_t count) {
  if (count < 2) throw ConfigError("tempering ladder needs at least two betas");
  std::vector<double> betas(count);
  for (std::size_t t = 0; t < count; ++t) {
    betas[t] = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(count - 1);
  }
  return make_ladder(std::move(betas));
}

double partial_hamiltonian(const CouplingMatrix& coupling, const Spins& x) {
  if (x.size() != coupling.n()) throw DimensionMismatch("partial_hamiltonian: size mismatch");
  return -0.5 * equal_state_sum(coupling.entries, x);
}

double exchange_probability(double beta_t, double beta_t1, double h_t, double h_t1) {
  const double exponent = (beta_t1 - beta_t) * (h_t1 - h_t);
  return exponent >= 0.0 ? 1.0 : std::exp(exponent);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Replica {
  std::shared_ptr<const Kernel> kernel;
  RngStream stream;
  Spins x;
  std::optional<double> energy;  // cached partial Hamiltonian of x
  ChainTrace trace;
  Clock::duration sampling{};
};

}  // namespace

TemperedRun tempered_run(SamplerKind kind, const CouplingMatrix& coupling, int q,
                         const TemperingLadder& ladder, const TemperingSchedule& schedule,
                         std::uint64_t master_seed, std::size_t set, const ChainInit& init,
                         const SamplerOptions& options, bool record_draws) {
  make_ladder(ladder.betas);
  if (schedule.n_ex < 1 || schedule.n_mc < 1) {
    throw ConfigError("tempering: n_ex and n_mc must be positive");
  }
  const long total = schedule.n_ex * schedule.n_mc;
  if (schedule.burn_in < 0 || schedule.burn_in >= total) {
    throw ConfigError("tempering: need 0 <= burn_in < n_ex * n_mc");
  }
  const std::size_t replicas_count = ladder.size();
  const Eigen::Index n = coupling.n();

  TemperedRun run;
  run.ladder = ladder;
  run.exchanges.attempts.assign(replicas_count - 1, 0);
  run.exchanges.accepts.assign(replicas_count - 1, 0);

  const auto precompute_start = Clock::now();
  std::vector<Replica> replicas;
  replicas.reserve(replicas_count);
  for (std::size_t t = 0; t < replicas_count; ++t) {
    const PottsModel model = make_model(coupling, ladder.betas[t], q);
    replicas.push_back(Replica{make_kernel(kind, model, options),
                               RngStream(master_seed, replica_stream_id(set, t)), Spins(),
                               std::nullopt, ChainTrace(), {}});
  }
  run.wall_seconds_precompute =
      std::chrono::duration<double>(Clock::now() - precompute_start).count();

  const long kept = total - schedule.burn_in;
  for (auto& r : replicas) {
    r.x = initial_state(init, n, q, r.stream);
    r.trace.kind = kind;
    r.trace.master_seed = master_seed;
    r.trace.stream_id = r.stream.stream_id();
    r.trace.iterations = total;
    r.trace.burn_in = schedule.burn_in;
    r.trace.phi_series.resize(kept);
    r.trace.warmup_phi.resize(schedule.burn_in);
    if (record_draws) r.trace.draws.resize(kept, n);
  }
  RngStream coordinator(master_seed, replica_stream_id(set, replicas_count));

  for (long ex = 0; ex < schedule.n_ex; ++ex) {
    parallel_for(replicas_count, [&](std::size_t t) {
      Replica& r = replicas[t];
      const PottsModel& model = r.kernel->model();
      for (long s = 0; s < schedule.n_mc; ++s) {
        const long iter = ex * schedule.n_mc + s;
        const auto start = Clock::now();
        r.kernel->step(r.x, r.stream);
        r.sampling += Clock::now() - start;
        const double phi = summary_phi(model, r.x);
        if (iter < schedule.burn_in) {
          r.trace.warmup_phi(iter) = phi;
        } else {
          r.trace.phi_series(iter - schedule.burn_in) = phi;
          if (record_draws) r.trace.draws.row(iter - schedule.burn_in) = r.x.transpose();
        }
      }
      r.energy.reset();
    });

    for (std::size_t t = 0; t + 1 < replicas_count; ++t) {
      Replica& lo = replicas[t];
      Replica& hi = replicas[t + 1];
      if (!lo.energy) lo.energy = partial_hamiltonian(coupling, lo.x);
      if (!hi.energy) hi.energy = partial_hamiltonian(coupling, hi.x);
      const double delta = (ladder.betas[t + 1] - ladder.betas[t]) * (*hi.energy - *lo.energy);
      ++run.exchanges.attempts[t];
      if (coordinator.uniform() <= std::exp(delta)) {
        ++run.exchanges.accepts[t];
        std::swap(lo.x, hi.x);
        std::swap(lo.energy, hi.energy);
      }
    }
  }

  run.replicas.reserve(replicas_count);
  for (auto& r : replicas) {
    r.trace.wall_seconds_sampling = std::chrono::duration<double>(r.sampling).count();
    r.trace.wall_seconds_precompute = run.wall_seconds_precompute;
    r.trace.final_state = r.x;
    run.replicas.push_back(std::move(r.trace));
  }
  return run;
}

}  // namespace agpotts
