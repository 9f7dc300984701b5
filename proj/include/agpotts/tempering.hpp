#pragma once

// Replica exchange over a ladder of inverse temperatures. Replica t always
// owns beta_t; accepted exchanges swap configurations between neighbours.

#include <cstdint>
#include <vector>

#include "agpotts/samplers.hpp"

namespace agpotts {

struct TemperingLadder {
  std::vector<double> betas;  // strictly increasing, all positive, size >= 2

  std::size_t size() const { return betas.size(); }
};

/// Throws ConfigError unless betas has at least two strictly increasing
/// positive entries.
TemperingLadder make_ladder(std::vector<double> betas);

/// Evenly spaced ladder from lo to hi inclusive.
TemperingLadder linear_ladder(double lo, double hi, std::size_t count);

/// -1/2 sum_{i,j} A(i,j) 1{x_i = x_j}, evaluated by direct summation.
double partial_hamiltonian(const CouplingMatrix& coupling, const Spins& x);

/// min(1, exp((beta_t1 - beta_t) (h_t1 - h_t))) for beta_t < beta_t1.
double exchange_probability(double beta_t, double beta_t1, double h_t, double h_t1);

struct ExchangeStats {
  std::vector<long> attempts;  // per adjacent pair (t, t+1)
  std::vector<long> accepts;

  double rate(std::size_t pair) const {
    return attempts[pair] == 0 ? 0.0
                               : static_cast<double>(accepts[pair]) / attempts[pair];
  }
};

struct TemperedRun {
  TemperingLadder ladder;
  /// One trace per replica, index t at beta_t; phi uses that replica's beta.
  std::vector<ChainTrace> replicas;
  ExchangeStats exchanges;
  double wall_seconds_precompute = 0.0;

  const ChainTrace& cold() const { return replicas.back(); }
};

/// Stream id of replica t (t = ladder size gives the exchange coordinator)
/// within replica set `set`.
inline std::uint64_t replica_stream_id(std::size_t set, std::size_t replica) {
  return 100000 + 1000 * set + replica;
}

struct TemperingSchedule {
  long n_ex = 40;
  long n_mc = 1000;
  /// Leading iterations dropped from every replica's trace.
  long burn_in = 0;
};

/// Alternate n_mc kernel steps on every replica (concurrently) with one
/// ascending sweep of exchange attempts over adjacent pairs, n_ex times.
/// Each replica starts from `init` drawn on its own stream.
TemperedRun tempered_run(SamplerKind kind, const CouplingMatrix& coupling, int q,
                         const TemperingLadder& ladder, const TemperingSchedule& schedule,
                         std::uint64_t master_seed, std::size_t set = 0,
                         const ChainInit& init = InitKind::Random,
                         const SamplerOptions& options = {}, bool record_draws = true);

}  // namespace agpotts
