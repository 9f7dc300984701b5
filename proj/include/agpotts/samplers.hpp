#pragma once

// Single-temperature MCMC kernels for the Potts model: Heat Bath, the
// auxiliary-Gaussian block Gibbs family (regular, low-rank, and their q = 2
// specializations), Swendsen-Wang and Wolff; plus the chain runner.

#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "agpotts/coupling.hpp"
#include "agpotts/model.hpp"
#include "agpotts/numerics.hpp"

namespace agpotts {

enum class SamplerKind {
  HeatBath,
  AGGibbs,
  LowRankAGGibbs,
  IsingAG,
  IsingLowRankAG,
  SwendsenWang,
  Wolff
};

std::string_view to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(std::string_view name);

/// Bond-opening probability for the cluster samplers.
///
/// Indicator:    1 - exp(-beta A(i,j)), detailed-balance correct for the
///               indicator Hamiltonian (beta/2) sum A 1{x_i = x_j}.
/// DoubledIsing: 1 - exp(-2 beta A(i,j)), the +-1 spin convention.
enum class BondConvention { Indicator, DoubledIsing };

std::string_view to_string(BondConvention convention);
BondConvention bond_convention_from_string(std::string_view name);

double bond_probability(double beta, double coupling, BondConvention convention);

struct SamplerOptions {
  double jitter = kDefaultJitter;
  double epsilon = kDefaultEpsilon;
  BondConvention bond = BondConvention::Indicator;
};

/// Throws WrongStateCount (Ising kernels with q != 2) or NegativeCoupling
/// (cluster kernels with any negative entry).
void check_compatibility(SamplerKind kind, const PottsModel& model);

// ---------------------------------------------------------------------------
// Conditionals of x given the auxiliary Gaussian.

/// n x q logits B z; row i gives the unnormalized log-probabilities of site i.
Eigen::MatrixXd ag_conditional_logits(const AGPrecomp& precomp, const Eigen::MatrixXd& z);

/// n x q logits P diag(mu) z for a k x q auxiliary matrix.
Eigen::MatrixXd lowrank_conditional_logits(const LowRankPrecomp& lr, const Eigen::MatrixXd& z);

/// Per-site probability of state 0 given w = z_0 - z_1, i.e. the two-point
/// softmax of +-(1/2)(B w)_i.
Eigen::VectorXd ising_conditional_prob(const AGPrecomp& precomp, const Eigen::VectorXd& w);
Eigen::VectorXd ising_lowrank_conditional_prob(const LowRankPrecomp& lr,
                                               const Eigen::VectorXd& w);

/// Row-wise softmax of a logit matrix.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

// ---------------------------------------------------------------------------
// Kernels. Each advances x in place and returns the auxiliary state it drew.

/// One sweep of single-site Gibbs updates in ascending site order.
void heat_bath_sweep(const PottsModel& model, Spins& x, RngStream& stream);

/// Block Gibbs step: z_l ~ N(y_l, B^{-1}) for each state, then every site
/// from its categorical conditional. Returns z as an n x q matrix.
Eigen::MatrixXd ag_gibbs_step(const AGPrecomp& precomp, int q, Spins& x, RngStream& stream);

/// Low-rank block Gibbs: z_l(j) ~ N(p_j' y_l, 1/mu_j). Returns z (k x q).
/// With k = 0 the sites are resampled uniformly.
Eigen::MatrixXd lowrank_ag_step(const LowRankPrecomp& lr, int q, Spins& x, RngStream& stream);

/// q = 2 block Gibbs on w ~ N(y_0 - y_1, 2 B^{-1}). Returns w.
Eigen::VectorXd ising_ag_step(const AGPrecomp& precomp, int q, Spins& x, RngStream& stream);

/// q = 2 low-rank block Gibbs on w_j ~ N(p_j'(y_0 - y_1), 2/mu_j). Returns w.
Eigen::VectorXd ising_lowrank_ag_step(const LowRankPrecomp& lr, int q, Spins& x,
                                      RngStream& stream);

/// Positive-coupling adjacency with per-edge bond probabilities.
struct ClusterGraph {
  struct Edge {
    int to;
    double p_bond;
  };
  std::vector<std::vector<Edge>> neighbors;
  int q = 2;
};

ClusterGraph make_cluster_graph(const PottsModel& model, BondConvention convention);

void swendsen_wang_step(const ClusterGraph& graph, Spins& x, RngStream& stream);
void swendsen_wang_step(const PottsModel& model, Spins& x, RngStream& stream,
                        BondConvention convention = BondConvention::Indicator);

/// Grow one cluster from a uniform seed site. For q = 2 the cluster flips;
/// otherwise it moves to a uniform choice among the other q - 1 states.
/// Returns the cluster size.
std::size_t wolff_step(const ClusterGraph& graph, Spins& x, RngStream& stream);
std::size_t wolff_step(const PottsModel& model, Spins& x, RngStream& stream,
                       BondConvention convention = BondConvention::Indicator);

// ---------------------------------------------------------------------------
// Marginal density of the auxiliary Gaussian.

struct LogDensityGradient {
  double value = 0.0;
  Eigen::MatrixXd gradient;
};

/// log density (up to a constant) of Z (n x q) and its gradient:
/// -1/2 sum_l z_l' B z_l + sum_i logsumexp_l (B z)(i, l).
LogDensityGradient marginal_z_logdensity(const AGPrecomp& precomp, const Eigen::MatrixXd& z);

/// Low-rank form over Z (k x q):
/// -1/2 sum_{l,j} mu_j z_l(j)^2 + sum_i logsumexp_l (P diag(mu) z)(i, l).
LogDensityGradient marginal_z_logdensity(const LowRankPrecomp& lr, const Eigen::MatrixXd& z);

// ---------------------------------------------------------------------------
// Kernel objects: precomputation done once, immutable afterwards so that one
// instance can serve several chains concurrently.

class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual SamplerKind kind() const = 0;
  virtual void step(Spins& x, RngStream& stream) const = 0;
  const PottsModel& model() const { return model_; }

 protected:
  explicit Kernel(PottsModel model) : model_(std::move(model)) {}

 private:
  PottsModel model_;
};

std::shared_ptr<const Kernel> make_kernel(SamplerKind kind, const PottsModel& model,
                                          const SamplerOptions& options = {});

// ---------------------------------------------------------------------------
// Chains.

enum class InitKind { AllZero, Random };
using ChainInit = std::variant<InitKind, Spins>;

using DrawMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ChainTrace {
  SamplerKind kind = SamplerKind::HeatBath;
  /// Kept draws, one row per post-burn-in iteration (empty when not recorded).
  DrawMatrix draws;
  /// phi of each kept draw.
  Eigen::VectorXd phi_series;
  /// phi during burn-in.
  Eigen::VectorXd warmup_phi;
  double wall_seconds_sampling = 0.0;
  double wall_seconds_precompute = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  long iterations = 0;
  long burn_in = 0;
  Spins final_state;

  long kept() const { return static_cast<long>(phi_series.size()); }
};

Spins initial_state(const ChainInit& init, Eigen::Index n, int q, RngStream& stream);

/// m kernel steps from `init`; phi recorded every iteration, the first
/// burn_in rows moved to warmup_phi. Sampling time covers kernel steps only.
ChainTrace run_chain(const Kernel& kernel, const ChainInit& init, long m, long burn_in,
                     RngStream& stream, bool record_draws = true);

/// Builds the kernel (timed as precompute) and runs one chain.
ChainTrace run_chain(SamplerKind kind, const PottsModel& model, const ChainInit& init, long m,
                     long burn_in, RngStream& stream, const SamplerOptions& options = {},
                     bool record_draws = true);

/// Stream id used for chain c of a multi-chain run.
inline std::uint64_t chain_stream_id(std::size_t chain) { return 1000 + chain; }

/// `chains` independent chains sharing one precomputation; chain c draws from
/// RngStream(master_seed, chain_stream_id(c)). Results do not depend on the
/// worker-thread count.
std::vector<ChainTrace> run_chains(SamplerKind kind, const PottsModel& model,
                                   const ChainInit& init, long m, long burn_in,
                                   std::size_t chains, std::uint64_t master_seed,
                                   const SamplerOptions& options = {}, bool record_draws = true);

}  // namespace agpotts
