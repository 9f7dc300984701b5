#pragma once

// The Potts target, its summary statistic, one-hot encodings, and an exact
// enumeration oracle for small systems.

#include <cstdint>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "agpotts/coupling.hpp"

namespace agpotts {

/// Configuration in {0, ..., q-1}^n. Files and reports render states 1-based.
using Spins = Eigen::VectorXi;

struct PottsModel {
  CouplingMatrix coupling;
  double beta = 1.0;
  int q = 2;

  Eigen::Index n() const { return coupling.n(); }
};

/// Validates q >= 2 and beta > 0.
PottsModel make_model(CouplingMatrix coupling, double beta, int q);

bool valid_spins(const Spins& x, int q);

/// Indicator vector of sites in `state`.
Eigen::VectorXd one_hot(const Spins& x, int state);

/// n x q matrix whose column l is one_hot(x, l).
Eigen::MatrixXd one_hot_matrix(const Spins& x, int q);

/// sum_{i,j} W(i,j) 1{x_i = x_j} over ordered pairs, diagonal included.
double equal_state_sum(const Eigen::MatrixXd& weights, const Spins& x);

/// phi(x) = beta * sum_{i,j} A(i,j) 1{x_i = x_j}, evaluated as
/// beta * sum_l y_l' A y_l. Twice the Hamiltonian.
double summary_phi(const PottsModel& model, const Spins& x);

/// H(x) = (beta/2) * sum_{i,j} A(i,j) 1{x_i = x_j}; the log-weight of x.
double hamiltonian(const PottsModel& model, const Spins& x);

/// Largest q^n the oracle will enumerate.
inline constexpr std::int64_t kMaxEnumeratedStates = std::int64_t{1} << 24;

std::int64_t state_count(Eigen::Index n, int q);

/// Mixed-radix index with site 0 as the least significant digit.
std::int64_t config_index(const Spins& x, int q);
Spins config_from_index(std::int64_t index, Eigen::Index n, int q);

struct ExactSummary {
  double log_partition = 0.0;
  double mean_phi = 0.0;
  /// beta * trace(A): the configuration-independent part of phi contributed
  /// by a retained diagonal.
  double phi_diagonal_offset = 0.0;
  std::int64_t states = 0;
  /// Probabilities indexed by config_index, when requested.
  std::optional<Eigen::VectorXd> pmf;
};

/// Exact log Z, E[phi] and optionally the p.m.f. of the model.
ExactSummary exact_summary(const PottsModel& model, bool want_pmf = false);

/// Enumeration over an arbitrary symmetric log-weight matrix W, with
/// log-weight (1/2) sum W(i,j) 1{x_i = x_j}, reporting E[phi] for the model's
/// own phi. Used for the shifted and truncated targets.
ExactSummary exact_summary_for_weights(const PottsModel& model,
                                       const Eigen::MatrixXd& log_weight_matrix,
                                       bool want_pmf = false);

/// Exact summary of the truncated target whose log-weight matrix is the
/// retained spectral part of beta (A + |lambda_min| I).
ExactSummary truncated_exact_summary(const PottsModel& model, double epsilon,
                                     bool want_pmf = false);

/// KL(p | q) between two p.m.f. tables over the same index set.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// (KL(P|Q), KL(Q|P)) from exact tables. Models must share n and q.
std::pair<double, double> kl_between(const PottsModel& model_p, const PottsModel& model_q);

/// Exact comparison between the shifted model and its spectral truncation at
/// epsilon. Two bound families are reported: n*eps/2 and n*eps (eps applied
/// to the shifted matrix, which already carries beta), and the beta-scaled
/// variants n*beta*eps/2 and n*beta*eps.
struct Lemma1Certificate {
  double epsilon = 0.0;
  Eigen::Index retained_rank = 0;
  double delta_log_partition = 0.0;
  double kl_pq = 0.0;
  double kl_qp = 0.0;
  double bound_log_partition = 0.0;
  double bound_kl = 0.0;
  double stated_bound_log_partition = 0.0;
  double stated_bound_kl = 0.0;
  bool pass_log_partition = false;
  bool pass_kl = false;
  bool pass_stated_log_partition = false;
  bool pass_stated_kl = false;
};

/// Arithmetic slack allowed on top of each bound.
inline constexpr double kCertificateSlack = 1e-10;

Lemma1Certificate lemma1_certificate(const PottsModel& model, double epsilon);

}  // namespace agpotts
