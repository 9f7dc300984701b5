#pragma once

// Seeded random streams and the dense linear-algebra primitives the samplers
// are built on. Factorizations are delegated to Eigen; the contracts
// (ordering, orthonormality, pivot failure) are enforced here.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "agpotts/errors.hpp"

namespace agpotts {

/// Numerical tolerances shared across the library.
namespace tol {
inline constexpr double kSymmetry = 1e-12;
inline constexpr double kCholeskyResidual = 1e-9;
inline constexpr double kOrthonormality = 1e-10;
inline constexpr double kEigenReconstruction = 1e-8;
inline constexpr double kPrecompInverse = 1e-7;
inline constexpr double kProbabilitySum = 1e-12;
}  // namespace tol

/// A reproducible random stream identified by (master_seed, stream_id).
///
/// The engine seed is derived by hashing both identifiers through splitmix64,
/// so streams that share a master seed but differ in id start from unrelated
/// engine states. A stream is single-owner state: it may move between threads
/// but must never be used by two threads at once.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() { return normal_(engine_); }

  /// Uniform integer on {0, ..., count - 1}.
  std::size_t uniform_index(std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(engine_);
  }

  /// Derive a child stream; the child depends only on this stream's identity,
  /// not on how many draws have been consumed.
  RngStream child(std::uint64_t sub_id) const;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// splitmix64 finalizer, exposed for seed derivation.
std::uint64_t mix_seed(std::uint64_t value);

Eigen::VectorXd standard_normal_vec(RngStream& stream, Eigen::Index n);

/// rows x cols matrix of i.i.d. standard normals, filled column by column.
Eigen::MatrixXd standard_normal_matrix(RngStream& stream, Eigen::Index rows,
                                       Eigen::Index cols);

/// Draw an index with probability proportional to exp(logw[a]).
///
/// The maximum is subtracted before exponentiation, so log-weights of any
/// magnitude are safe. Throws InvalidWeight on a non-finite entry.
template <typename Derived>
Eigen::Index categorical_from_logweights(RngStream& stream,
                                         const Eigen::DenseBase<Derived>& logw) {
  const Eigen::Index q = logw.size();
  if (q < 1) throw InvalidWeight("categorical: empty weight vector");
  double max_w = -std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < q; ++a) {
    const double w = static_cast<double>(logw(a));
    if (!std::isfinite(w)) throw InvalidWeight("categorical: non-finite log-weight");
    max_w = std::max(max_w, w);
  }
  if (q == 1) return 0;
  // Small q is the common case; avoid a heap allocation.
  constexpr Eigen::Index kStack = 16;
  double stack_buf[kStack];
  Eigen::VectorXd heap_buf;
  double* cumulative = stack_buf;
  if (q > kStack) {
    heap_buf.resize(q);
    cumulative = heap_buf.data();
  }
  double total = 0.0;
  for (Eigen::Index a = 0; a < q; ++a) {
    total += std::exp(static_cast<double>(logw(a)) - max_w);
    cumulative[a] = total;
  }
  const double u = stream.uniform() * total;
  for (Eigen::Index a = 0; a < q - 1; ++a) {
    if (u < cumulative[a]) return a;
  }
  return q - 1;
}

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
template <typename Scalar>
struct SpectralDecomposition {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  double tolerance = tol::kSymmetry) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tolerance;
}

/// Lower-triangular L with L L' = M. Throws NotPositiveDefinite when a pivot
/// is not strictly positive.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
cholesky_spd(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatch("cholesky_spd: matrix must be square and non-empty");
  }
  if (!is_symmetric(m)) throw DimensionMismatch("cholesky_spd: matrix is not symmetric");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("cholesky_spd: non-positive pivot");
  }
  Matrix lower = llt.matrixL();
  if ((lower.diagonal().array() <= 0).any()) {
    throw NotPositiveDefinite("cholesky_spd: non-positive pivot");
  }
  return lower;
}

/// Symmetric eigendecomposition with eigenvalues in descending order.
template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> sym_eigen(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols()) throw DimensionMismatch("sym_eigen: matrix must be square");
  if (!is_symmetric(m)) throw DimensionMismatch("sym_eigen: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("sym_eigen: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  SpectralDecomposition<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Inverse of a symmetric positive-definite matrix through its Cholesky factor.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
spd_inverse(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_inverse: non-positive pivot");
  }
  Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  // Symmetrize away round-off so the result passes the symmetry precondition
  // of cholesky_spd.
  return (inv + inv.transpose()) / 2;
}

/// log(sum(exp(v))) with max subtraction.
template <typename Derived>
double log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  const double max_v = v.maxCoeff();
  if (!std::isfinite(max_v)) return max_v;
  return max_v + std::log((v.derived().array() - max_v).exp().sum());
}

}  // namespace agpotts
