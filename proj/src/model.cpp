#include "agpotts/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace agpotts {

PottsModel make_model(CouplingMatrix coupling, double beta, int q) {
  if (q < 2) throw ConfigError("model: q must be at least 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("model: beta must be positive");
  if (coupling.n() < 1) throw ConfigError("model: empty coupling matrix");
  return PottsModel{std::move(coupling), beta, q};
}

bool valid_spins(const Spins& x, int q) {
  return x.size() == 0 || (x.minCoeff() >= 0 && x.maxCoeff() < q);
}

Eigen::VectorXd one_hot(const Spins& x, int state) {
  return (x.array() == state).cast<double>().matrix();
}

Eigen::MatrixXd one_hot_matrix(const Spins& x, int q) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(x.size(), q);
  for (Eigen::Index i = 0; i < x.size(); ++i) y(i, x(i)) = 1.0;
  return y;
}

double equal_state_sum(const Eigen::MatrixXd& weights, const Spins& x) {
  const Eigen::Index n = x.size();
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x(i) == x(j)) total += weights(i, j);
    }
  }
  return total;
}

double summary_phi(const PottsModel& model, const Spins& x) {
  if (x.size() != model.n()) throw DimensionMismatch("summary_phi: size mismatch");
  const Eigen::MatrixXd y = one_hot_matrix(x, model.q);
  return model.beta * (y.transpose() * model.coupling.entries * y).trace();
}

double hamiltonian(const PottsModel& model, const Spins& x) {
  return 0.5 * summary_phi(model, x);
}

std::int64_t state_count(Eigen::Index n, int q) {
  std::int64_t count = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (count > kMaxEnumeratedStates) return count * q;
    count *= q;
  }
  return count;
}

std::int64_t config_index(const Spins& x, int q) {
  std::int64_t index = 0;
  for (Eigen::Index i = x.size(); i-- > 0;) index = index * q + x(i);
  return index;
}

Spins config_from_index(std::int64_t index, Eigen::Index n, int q) {
  Spins x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = static_cast<int>(index % q);
    index /= q;
  }
  return x;
}

namespace {

// Running log-sum-exp accumulator with a weighted mean of phi.
class LogSumAccumulator {
 public:
  void add(double log_weight, double phi) {
    if (log_weight > max_) {
      const double rescale = std::exp(max_ - log_weight);
      sum_ *= rescale;
      phi_sum_ *= rescale;
      max_ = log_weight;
    }
    const double w = std::exp(log_weight - max_);
    sum_ += w;
    phi_sum_ += w * phi;
  }
  double log_total() const { return max_ + std::log(sum_); }
  double mean_phi() const { return phi_sum_ / sum_; }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double phi_sum_ = 0.0;
};

// Change in sum_{i,j} W(i,j) 1{x_i = x_j} when site i moves from `from` to `to`.
double site_change(const Eigen::MatrixXd& w, const Spins& x, Eigen::Index i, int from, int to) {
  double delta = 0.0;
  const Eigen::Index n = x.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) continue;
    if (x(j) == to) delta += w(i, j);
    if (x(j) == from) delta -= w(i, j);
  }
  return 2.0 * delta;
}

}  // namespace

ExactSummary exact_summary_for_weights(const PottsModel& model,
                                       const Eigen::MatrixXd& log_weight_matrix,
                                       bool want_pmf) {
  const Eigen::Index n = model.n();
  const int q = model.q;
  if (log_weight_matrix.rows() != n || log_weight_matrix.cols() != n) {
    throw DimensionMismatch("exact_summary: weight matrix size mismatch");
  }
  const std::int64_t states = state_count(n, q);
  if (states > kMaxEnumeratedStates) {
    throw TooLarge("exact_summary: q^n = " + std::to_string(states) +
                   " exceeds the enumeration guard");
  }
  const Eigen::MatrixXd phi_matrix = model.beta * model.coupling.entries;

  ExactSummary out;
  out.states = states;
  out.phi_diagonal_offset = phi_matrix.trace();
  Eigen::VectorXd log_weights;
  if (want_pmf) log_weights.resize(states);

  // Incremental updates drift; refresh from scratch periodically.
  constexpr std::int64_t kRefreshPeriod = 4096;
  Spins x = Spins::Zero(n);
  double w_sum = log_weight_matrix.sum();
  double phi = phi_matrix.sum();
  LogSumAccumulator acc;
  for (std::int64_t index = 0; index < states; ++index) {
    if (index % kRefreshPeriod == 0) {
      w_sum = equal_state_sum(log_weight_matrix, x);
      phi = equal_state_sum(phi_matrix, x);
    }
    const double log_weight = 0.5 * w_sum;
    acc.add(log_weight, phi);
    if (want_pmf) log_weights(index) = log_weight;

    // Odometer increment, site 0 fastest.
    for (Eigen::Index i = 0; i < n; ++i) {
      const int from = x(i);
      const int to = (from + 1) % q;
      w_sum += site_change(log_weight_matrix, x, i, from, to);
      phi += site_change(phi_matrix, x, i, from, to);
      x(i) = to;
      if (to != 0) break;
    }
  }
  out.log_partition = acc.log_total();
  out.mean_phi = acc.mean_phi();
  if (want_pmf) out.pmf = (log_weights.array() - out.log_partition).exp().matrix();
  return out;
}

ExactSummary exact_summary(const PottsModel& model, bool want_pmf) {
  return exact_summary_for_weights(model, model.beta * model.coupling.entries, want_pmf);
}

ExactSummary truncated_exact_summary(const PottsModel& model, double epsilon, bool want_pmf) {
  const auto lr = precompute_lowrank(model.coupling, model.beta, epsilon);
  return exact_summary_for_weights(model, lr.truncated(), want_pmf);
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw DimensionMismatch("kl_divergence: size mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) total += p(i) * (std::log(p(i)) - std::log(q(i)));
  }
  return std::max(total, 0.0);
}

std::pair<double, double> kl_between(const PottsModel& model_p, const PottsModel& model_q) {
  if (model_p.n() != model_q.n() || model_p.q != model_q.q) {
    throw DimensionMismatch("kl_between: models differ in n or q");
  }
  const auto p = exact_summary(model_p, true);
  const auto q = exact_summary(model_q, true);
  return {kl_divergence(*p.pmf, *q.pmf), kl_divergence(*q.pmf, *p.pmf)};
}

Lemma1Certificate lemma1_certificate(const PottsModel& model, double epsilon) {
  const auto lr = precompute_lowrank(model.coupling, model.beta, epsilon);
  Eigen::MatrixXd shifted = model.beta * model.coupling.entries;
  shifted.diagonal().array() += model.beta * lr.shift;

  const auto p = exact_summary_for_weights(model, shifted, true);
  const auto q = exact_summary_for_weights(model, lr.truncated(), true);

  const double n = static_cast<double>(model.n());
  Lemma1Certificate out;
  out.epsilon = epsilon;
  out.retained_rank = lr.k;
  out.delta_log_partition = std::abs(p.log_partition - q.log_partition);
  out.kl_pq = kl_divergence(*p.pmf, *q.pmf);
  out.kl_qp = kl_divergence(*q.pmf, *p.pmf);
  out.bound_log_partition = 0.5 * n * epsilon;
  out.bound_kl = n * epsilon;
  out.stated_bound_log_partition = 0.5 * n * model.beta * epsilon;
  out.stated_bound_kl = n * model.beta * epsilon;
  const double kl_max = std::max(out.kl_pq, out.kl_qp);
  out.pass_log_partition = out.delta_log_partition <= out.bound_log_partition + kCertificateSlack;
  out.pass_kl = kl_max <= out.bound_kl + kCertificateSlack;
  out.pass_stated_log_partition =
      out.delta_log_partition <= out.stated_bound_log_partition + kCertificateSlack;
  out.pass_stated_kl = kl_max <= out.stated_bound_kl + kCertificateSlack;
  return out;
}

}  // namespace agpotts
