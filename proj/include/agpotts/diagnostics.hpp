#pragma once

// Multi-chain convergence and efficiency metrics. A series matrix holds one
// chain per column (draws x chains).

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "agpotts/samplers.hpp"

namespace agpotts {

/// R-hat threshold above which chains are reported as not mixing.
inline constexpr double kRhatFailure = 1.2;
/// ESS is capped at this multiple of the total draw count.
inline constexpr double kEssCapFactor = 1.5;
/// ...and floored at this multiple.
inline constexpr double kEssFloorFactor = 1e-4;

/// Halve every chain (dropping the middle draw when the length is odd),
/// giving 2C half-chains side by side.
Eigen::MatrixXd split_chains(const Eigen::MatrixXd& series);

/// Pool all values, rank them (ties get the average rank) and map rank r to
/// the normal quantile of (r - 3/8) / (S + 1/4), S the total count.
Eigen::MatrixXd rank_normalize(const Eigen::MatrixXd& series);

/// Biased autocovariance (1/N normalization) at lags 0..N-1, via FFT.
Eigen::VectorXd autocovariance(const Eigen::VectorXd& chain);

/// sqrt(Var+/W) on the columns as given, no splitting or ranking.
double classic_rhat(const Eigen::MatrixXd& chains);

/// Multi-chain ESS on the columns as given: autocorrelations combined
/// through the between/within variance decomposition, summed in lag pairs
/// up to the first non-positive pair with monotone non-increase enforced,
/// then capped at 1.5 CM and floored at 1e-4 CM.
double ess_from_chains(const Eigen::MatrixXd& chains);

/// Bulk rank-normalized split R-hat. Needs C >= 2 chains and M >= 4 draws.
/// Throws ZeroVariance when every value is identical; returns +inf when the
/// within-chain variance alone vanishes.
double split_rank_normalized_rhat(const Eigen::MatrixXd& series);

/// Bulk ESS: ess_from_chains on rank-normalized split chains. Needs M >= 8.
double ess(const Eigen::MatrixXd& series);

double ess_per_second(double ess, double seconds_sampling, double seconds_precompute,
                      bool include_precompute);

struct DiagnosticsReport {
  std::optional<double> rhat;  // empty when undefined
  std::optional<double> ess;
  double ess_per_second = 0.0;
  double ess_per_second_incl_precompute = 0.0;
  double pooled_mean_phi = 0.0;
  /// sample sd of pooled phi divided by sqrt(ess); 0 when ess is undefined.
  double pooled_se_phi = 0.0;
  std::size_t chains = 0;
  long draws_per_chain = 0;
  double seconds_sampling = 0.0;    // summed over chains
  double seconds_precompute = 0.0;  // shared setup, counted once

  bool mixing_failure() const { return !rhat || *rhat > kRhatFailure; }
};

/// Stack the phi series of several traces as columns. All must be equally long.
Eigen::MatrixXd phi_matrix(const std::vector<ChainTrace>& traces);

DiagnosticsReport diagnose(const std::vector<ChainTrace>& traces);

}  // namespace agpotts
