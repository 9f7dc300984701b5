// Auxiliary-Gaussian block Gibbs kernels and the marginal density of the
// auxiliary variable.

#include <cmath>

#include "agpotts/samplers.hpp"

namespace agpotts {

namespace {

void require_size(const Spins& x, Eigen::Index n, const char* where) {
  if (x.size() != n) throw DimensionMismatch(std::string(where) + ": configuration size mismatch");
}

void require_ising(int q, const char* where) {
  if (q != 2) throw WrongStateCount(std::string(where) + ": requires q = 2");
}

void sample_sites(const Eigen::MatrixXd& logits, Spins& x, RngStream& stream) {
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    x(i) = static_cast<int>(categorical_from_logweights(stream, logits.row(i)));
  }
}

// Logistic function without overflow for large |s|.
double logistic(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

void sample_ising_sites(const Eigen::VectorXd& p_state0, Spins& x, RngStream& stream) {
  for (Eigen::Index i = 0; i < p_state0.size(); ++i) {
    x(i) = stream.uniform() < p_state0(i) ? 0 : 1;
  }
}

// Row-wise log-sum-exp of a logit matrix.
Eigen::VectorXd row_log_sum_exp(const Eigen::MatrixXd& logits) {
  Eigen::VectorXd out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) out(i) = log_sum_exp(logits.row(i));
  return out;
}

}  // namespace

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  const Eigen::VectorXd lse = row_log_sum_exp(logits);
  return (logits.colwise() - lse).array().exp().matrix();
}

Eigen::MatrixXd ag_conditional_logits(const AGPrecomp& precomp, const Eigen::MatrixXd& z) {
  if (z.rows() != precomp.n()) throw DimensionMismatch("ag_conditional_logits: z has wrong rows");
  Eigen::MatrixXd logits(z.rows(), z.cols());
  logits.noalias() = precomp.B * z;
  return logits;
}

Eigen::MatrixXd lowrank_conditional_logits(const LowRankPrecomp& lr, const Eigen::MatrixXd& z) {
  if (z.rows() != lr.k) throw DimensionMismatch("lowrank_conditional_logits: z has wrong rows");
  if (lr.k == 0) return Eigen::MatrixXd::Zero(lr.n, z.cols());
  Eigen::MatrixXd logits(lr.n, z.cols());
  logits.noalias() = lr.P * (lr.mu.asDiagonal() * z);
  return logits;
}

Eigen::VectorXd ising_conditional_prob(const AGPrecomp& precomp, const Eigen::VectorXd& w) {
  if (w.size() != precomp.n()) throw DimensionMismatch("ising_conditional_prob: w has wrong size");
  const Eigen::VectorXd s = precomp.B * w;
  return s.unaryExpr([](double v) { return logistic(v); });
}

Eigen::VectorXd ising_lowrank_conditional_prob(const LowRankPrecomp& lr,
                                               const Eigen::VectorXd& w) {
  if (w.size() != lr.k) {
    throw DimensionMismatch("ising_lowrank_conditional_prob: w has wrong size");
  }
  if (lr.k == 0) return Eigen::VectorXd::Constant(lr.n, 0.5);
  const Eigen::VectorXd s = lr.P * lr.mu.cwiseProduct(w);
  return s.unaryExpr([](double v) { return logistic(v); });
}

Eigen::MatrixXd ag_gibbs_step(const AGPrecomp& precomp, int q, Spins& x, RngStream& stream) {
  const Eigen::Index n = precomp.n();
  require_size(x, n, "ag_gibbs_step");
  // z_l = L xi_l + y_l, one standard-normal column per state.
  Eigen::MatrixXd z = one_hot_matrix(x, q);
  const Eigen::MatrixXd xi = standard_normal_matrix(stream, n, q);
  z.noalias() += precomp.chol_Binv.triangularView<Eigen::Lower>() * xi;
  sample_sites(ag_conditional_logits(precomp, z), x, stream);
  return z;
}

Eigen::MatrixXd lowrank_ag_step(const LowRankPrecomp& lr, int q, Spins& x, RngStream& stream) {
  require_size(x, lr.n, "lowrank_ag_step");
  if (lr.k == 0) {
    for (Eigen::Index i = 0; i < lr.n; ++i) x(i) = static_cast<int>(stream.uniform_index(q));
    return Eigen::MatrixXd(0, q);
  }
  Eigen::MatrixXd z(lr.k, q);
  z.noalias() = lr.P.transpose() * one_hot_matrix(x, q);
  const Eigen::MatrixXd xi = standard_normal_matrix(stream, lr.k, q);
  z.noalias() += lr.mu.cwiseSqrt().cwiseInverse().asDiagonal() * xi;
  sample_sites(lowrank_conditional_logits(lr, z), x, stream);
  return z;
}

Eigen::VectorXd ising_ag_step(const AGPrecomp& precomp, int q, Spins& x, RngStream& stream) {
  require_ising(q, "ising_ag_step");
  const Eigen::Index n = precomp.n();
  require_size(x, n, "ising_ag_step");
  // w = (y_0 - y_1) + sqrt(2) L xi.
  Eigen::VectorXd w = (x.array() == 0).select(Eigen::VectorXd::Ones(n), -1.0);
  const Eigen::VectorXd xi = standard_normal_vec(stream, n);
  const Eigen::VectorXd noise = precomp.chol_Binv.triangularView<Eigen::Lower>() * xi;
  w += std::sqrt(2.0) * noise;
  sample_ising_sites(ising_conditional_prob(precomp, w), x, stream);
  return w;
}

Eigen::VectorXd ising_lowrank_ag_step(const LowRankPrecomp& lr, int q, Spins& x,
                                      RngStream& stream) {
  require_ising(q, "ising_lowrank_ag_step");
  require_size(x, lr.n, "ising_lowrank_ag_step");
  if (lr.k == 0) {
    for (Eigen::Index i = 0; i < lr.n; ++i) x(i) = stream.uniform() < 0.5 ? 0 : 1;
    return Eigen::VectorXd(0);
  }
  const Eigen::VectorXd diff = (x.array() == 0).select(Eigen::VectorXd::Ones(lr.n), -1.0);
  Eigen::VectorXd w = lr.P.transpose() * diff;
  const Eigen::VectorXd xi = standard_normal_vec(stream, lr.k);
  w += (2.0 / lr.mu.array()).sqrt().matrix().cwiseProduct(xi);
  sample_ising_sites(ising_lowrank_conditional_prob(lr, w), x, stream);
  return w;
}

LogDensityGradient marginal_z_logdensity(const AGPrecomp& precomp, const Eigen::MatrixXd& z) {
  if (z.rows() != precomp.n() || z.cols() < 1) {
    throw DimensionMismatch("marginal_z_logdensity: z must be n x q");
  }
  const Eigen::MatrixXd bz = precomp.B * z;
  LogDensityGradient out;
  out.value = -0.5 * z.cwiseProduct(bz).sum() + row_log_sum_exp(bz).sum();
  // d/dz [-1/2 z'Bz] = -Bz; d/dz sum_i lse = B' softmax = B softmax.
  out.gradient = precomp.B * (softmax_rows(bz) - z);
  return out;
}

LogDensityGradient marginal_z_logdensity(const LowRankPrecomp& lr, const Eigen::MatrixXd& z) {
  if (z.rows() != lr.k || z.cols() < 1) {
    throw DimensionMismatch("marginal_z_logdensity: z must be k x q");
  }
  const Eigen::MatrixXd scaled = lr.mu.asDiagonal() * z;
  const Eigen::MatrixXd logits = lowrank_conditional_logits(lr, z);
  LogDensityGradient out;
  out.value = -0.5 * z.cwiseProduct(scaled).sum() + row_log_sum_exp(logits).sum();
  out.gradient = lr.mu.asDiagonal() * (lr.P.transpose() * softmax_rows(logits)) - scaled;
  return out;
}

}  // namespace agpotts
