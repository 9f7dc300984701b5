#pragma once

// Statistical helpers shared by the test binaries and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "agpotts/diagnostics.hpp"
#include "agpotts/model.hpp"
#include "agpotts/samplers.hpp"

namespace agpotts::testing {

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
inline double kolmogorov_survival(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// Two-sample KS statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

/// p-value of the two-sample KS test (asymptotic, with the Stephens correction).
inline double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
  const double d = ks_statistic(a, b);
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double root = std::sqrt(ne);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

/// Empirical p.m.f. over config_index of every `thin`-th draw of the traces.
inline Eigen::VectorXd empirical_pmf(const std::vector<ChainTrace>& traces, int q, long thin = 1) {
  const Eigen::Index n = traces.front().draws.cols();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(state_count(n, q));
  double total = 0.0;
  for (const auto& t : traces) {
    for (Eigen::Index r = 0; r < t.draws.rows(); r += thin) {
      const Spins x = t.draws.row(r).transpose();
      counts(config_index(x, q)) += 1.0;
      total += 1.0;
    }
  }
  return counts / total;
}

inline double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

struct OracleAgreement {
  double estimate = 0.0;
  double se = 0.0;
  double exact = 0.0;
  double z() const { return se > 0.0 ? std::abs(estimate - exact) / se : INFINITY; }
};

inline OracleAgreement compare_mean(const std::vector<ChainTrace>& traces, double exact) {
  const DiagnosticsReport report = diagnose(traces);
  return {report.pooled_mean_phi, report.pooled_se_phi, exact};
}

/// Pooled phi values of every `thin`-th kept draw.
inline std::vector<double> thinned_phi(const std::vector<ChainTrace>& traces, long thin) {
  std::vector<double> out;
  for (const auto& t : traces) {
    for (Eigen::Index r = 0; r < t.phi_series.size(); r += thin) out.push_back(t.phi_series(r));
  }
  return out;
}

/// Single-edge graph on two nodes with unit coupling.
inline CouplingMatrix two_node_edge() {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  return make_custom(a);
}

}  // namespace agpotts::testing
