#pragma once

// Coupling-matrix generators and the one-time preprocessing (diagonal shift,
// Cholesky factor of the inverse, spectral truncation) consumed by the
// auxiliary-Gaussian samplers.

#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "agpotts/numerics.hpp"

namespace agpotts {

enum class Family { Lattice2D, CurieWeiss, ErdosRenyi, SK, Hopfield, Custom };
enum class DiagonalConvention { Zeroed, Retained };
enum class LatticeScale { None, AverageDegree };

std::string_view to_string(Family family);
std::string_view to_string(DiagonalConvention convention);
std::string_view to_string(LatticeScale scale);
Family family_from_string(std::string_view name);
DiagonalConvention diagonal_from_string(std::string_view name);
LatticeScale lattice_scale_from_string(std::string_view name);

/// Symmetric n x n interaction matrix together with how it was produced.
struct CouplingMatrix {
  Eigen::MatrixXd entries;
  Family family = Family::Custom;
  DiagonalConvention diagonal = DiagonalConvention::Zeroed;

  Eigen::Index n() const { return entries.rows(); }
  bool has_negative_entries() const { return (entries.array() < 0.0).any(); }
};

/// Wrap a user matrix. Throws DimensionMismatch unless square and exactly
/// symmetric; with DiagonalConvention::Zeroed the diagonal must be zero.
CouplingMatrix make_custom(Eigen::MatrixXd entries,
                           DiagonalConvention diagonal = DiagonalConvention::Zeroed);

/// Adjacency of a side x side grid without wraparound (n = side^2). Edges get
/// weight 1, or 1/(average degree) with LatticeScale::AverageDegree.
CouplingMatrix lattice_2d(int side, LatticeScale scale = LatticeScale::None);

/// Complete graph with off-diagonal entries 1/n.
CouplingMatrix curie_weiss(int n);

/// G(n, p) adjacency scaled by its realized average degree.
CouplingMatrix erdos_renyi(int n, double p, RngStream& stream);

/// Sherrington-Kirkpatrick: upper triangle i.i.d. Normal(0, 1/n), mirrored.
CouplingMatrix sk(int n, RngStream& stream);

/// eta' eta / max(n, d) for a d x n Rademacher matrix eta; diagonal retained.
CouplingMatrix hopfield(int n, int d, RngStream& stream);

/// Shifted matrix B = beta (A + lambda I) and the Cholesky factor of its inverse.
struct AGPrecomp {
  Eigen::MatrixXd B;
  double lambda = 0.0;
  Eigen::MatrixXd chol_Binv;  // lower triangular, L L' = B^{-1}
  double beta = 0.0;
  double jitter = 0.0;        // jitter actually used after any escalation

  Eigen::Index n() const { return B.rows(); }
};

inline constexpr double kDefaultJitter = 1e-8;
inline constexpr double kDefaultEpsilon = 1e-10;

/// lambda = |lambda_min(A)| + jitter * max(1, |lambda_min(A)|). On a failed
/// factorization the jitter is raised tenfold, at most twice, before
/// NotPositiveDefinite is rethrown.
AGPrecomp precompute_ag(const CouplingMatrix& coupling, double beta,
                        double jitter = kDefaultJitter);

/// Spectral truncation of B = beta (A + |lambda_min(A)| I): components with
/// eigenvalue > epsilon are kept. k = 0 is legal.
struct LowRankPrecomp {
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  Eigen::VectorXd mu;  // k retained eigenvalues, descending
  Eigen::MatrixXd P;   // n x k eigenvectors
  double epsilon = 0.0;
  double beta = 0.0;
  double shift = 0.0;  // |lambda_min(A)|
  /// Every eigenvalue of B, descending, including the discarded ones.
  Eigen::VectorXd all_eigenvalues;

  /// Reassembled truncated matrix sum_j mu_j p_j p_j'.
  Eigen::MatrixXd truncated() const { return P * mu.asDiagonal() * P.transpose(); }
};

LowRankPrecomp precompute_lowrank(const CouplingMatrix& coupling, double beta,
                                  double epsilon = kDefaultEpsilon);

struct SpectralSummary {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  Eigen::Index rank_at_epsilon = 0;
};

SpectralSummary spectral_summary(const CouplingMatrix& coupling, double beta,
                                 double epsilon);

/// Dense text format: a header row "n,family,diagonal_convention", one value
/// row, then n rows of n comma-separated values at 17 significant digits.
void write_coupling(std::ostream& out, const CouplingMatrix& coupling);
CouplingMatrix read_coupling(std::istream& in);

void save_coupling(const std::string& path, const CouplingMatrix& coupling);
CouplingMatrix load_coupling(const std::string& path);

}  // namespace agpotts
