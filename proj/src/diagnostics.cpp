#include "agpotts/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/SpecialFunctions>

namespace agpotts {

namespace {

void require_shape(const Eigen::MatrixXd& series, Eigen::Index min_chains,
                   Eigen::Index min_draws, const char* where) {
  if (series.cols() < min_chains || series.rows() < min_draws) {
    throw DimensionMismatch(std::string(where) + ": need at least " +
                            std::to_string(min_chains) + " chains of " +
                            std::to_string(min_draws) + " draws");
  }
  if (!series.allFinite()) throw DimensionMismatch(std::string(where) + ": non-finite draws");
}

void require_variation(const Eigen::MatrixXd& series, const char* where) {
  if (series.maxCoeff() == series.minCoeff()) {
    throw ZeroVariance(std::string(where) + ": all values are identical");
  }
}

}  // namespace

Eigen::MatrixXd split_chains(const Eigen::MatrixXd& series) {
  const Eigen::Index half = series.rows() / 2;
  const Eigen::Index offset = series.rows() - half;  // skips the middle draw when odd
  Eigen::MatrixXd out(half, 2 * series.cols());
  for (Eigen::Index c = 0; c < series.cols(); ++c) {
    out.col(2 * c) = series.col(c).head(half);
    out.col(2 * c + 1) = series.col(c).segment(offset, half);
  }
  return out;
}

Eigen::MatrixXd rank_normalize(const Eigen::MatrixXd& series) {
  const Eigen::Index total = series.size();
  std::vector<Eigen::Index> order(total);
  std::iota(order.begin(), order.end(), 0);
  const double* data = series.data();
  std::stable_sort(order.begin(), order.end(),
                   [data](Eigen::Index a, Eigen::Index b) { return data[a] < data[b]; });
  Eigen::MatrixXd out(series.rows(), series.cols());
  double* ranked = out.data();
  const double denom = static_cast<double>(total) + 0.25;
  for (Eigen::Index start = 0; start < total;) {
    Eigen::Index end = start + 1;
    while (end < total && data[order[end]] == data[order[start]]) ++end;
    // 1-based ranks start+1 .. end share their average.
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    const double z = Eigen::numext::ndtri((rank - 0.375) / denom);
    for (Eigen::Index i = start; i < end; ++i) ranked[order[i]] = z;
    start = end;
  }
  return out;
}

Eigen::VectorXd autocovariance(const Eigen::VectorXd& chain) {
  const Eigen::Index n = chain.size();
  std::size_t padded = 1;
  while (padded < static_cast<std::size_t>(2 * n)) padded <<= 1;
  std::vector<double> centered(padded, 0.0);
  const double mean = chain.mean();
  for (Eigen::Index i = 0; i < n; ++i) centered[i] = chain(i) - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, centered);
  for (auto& f : freq) f = std::norm(f);
  std::vector<double> lagged;
  fft.inv(lagged, freq);

  Eigen::VectorXd out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(k) = lagged[k] / static_cast<double>(n);
  return out;
}

double classic_rhat(const Eigen::MatrixXd& chains) {
  const double n = static_cast<double>(chains.rows());
  const Eigen::VectorXd means = chains.colwise().mean().transpose();
  const Eigen::VectorXd vars =
      ((chains.rowwise() - means.transpose()).array().square().colwise().sum() / (n - 1.0))
          .transpose();
  const double within = vars.mean();
  const double between =
      n * (means.array() - means.mean()).square().sum() / static_cast<double>(chains.cols() - 1);
  const double var_plus = (n - 1.0) / n * within + between / n;
  if (within <= 0.0) {
    if (var_plus <= 0.0) throw ZeroVariance("rhat: all values are identical");
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(var_plus / within);
}

double ess_from_chains(const Eigen::MatrixXd& chains) {
  const Eigen::Index draws = chains.rows();
  const Eigen::Index count = chains.cols();
  const double m = static_cast<double>(draws);
  const double total = m * static_cast<double>(count);

  Eigen::MatrixXd acov(draws, count);
  Eigen::VectorXd means(count);
  for (Eigen::Index c = 0; c < count; ++c) {
    acov.col(c) = autocovariance(chains.col(c));
    means(c) = chains.col(c).mean();
  }
  const double within = acov.row(0).mean() * m / (m - 1.0);
  double var_plus = within * (m - 1.0) / m;
  if (count > 1) {
    var_plus += (means.array() - means.mean()).square().sum() / static_cast<double>(count - 1);
  }
  if (var_plus <= 0.0) throw ZeroVariance("ess: all values are identical");

  auto rho = [&](Eigen::Index lag) {
    return 1.0 - (within - acov.row(lag).mean()) / var_plus;
  };

  // Geyer: the first pair always counts; later pairs until the first
  // non-positive one, each clipped to its predecessor.
  double previous = rho(0) + (draws > 1 ? rho(1) : 0.0);
  double pair_sum = previous;
  for (Eigen::Index lag = 2; lag + 1 < draws; lag += 2) {
    double pair = rho(lag) + rho(lag + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, previous);
    pair_sum += pair;
    previous = pair;
  }
  const double tau = -1.0 + 2.0 * pair_sum;
  const double cap = kEssCapFactor * total;
  double out = tau > 0.0 ? total / tau : cap;
  out = std::min(out, cap);
  return std::max(out, kEssFloorFactor * total);
}

double split_rank_normalized_rhat(const Eigen::MatrixXd& series) {
  require_shape(series, 2, 4, "rhat");
  require_variation(series, "rhat");
  return classic_rhat(rank_normalize(split_chains(series)));
}

double ess(const Eigen::MatrixXd& series) {
  require_shape(series, 1, 8, "ess");
  require_variation(series, "ess");
  return ess_from_chains(rank_normalize(split_chains(series)));
}

double ess_per_second(double ess_value, double seconds_sampling, double seconds_precompute,
                      bool include_precompute) {
  const double seconds = seconds_sampling + (include_precompute ? seconds_precompute : 0.0);
  if (!(seconds > 0.0)) throw DimensionMismatch("ess_per_second: wall seconds must be positive");
  return ess_value / seconds;
}

Eigen::MatrixXd phi_matrix(const std::vector<ChainTrace>& traces) {
  if (traces.empty()) throw DimensionMismatch("phi_matrix: no traces");
  const Eigen::Index draws = traces.front().phi_series.size();
  Eigen::MatrixXd out(draws, static_cast<Eigen::Index>(traces.size()));
  for (std::size_t c = 0; c < traces.size(); ++c) {
    if (traces[c].phi_series.size() != draws) {
      throw DimensionMismatch("phi_matrix: traces differ in length");
    }
    out.col(static_cast<Eigen::Index>(c)) = traces[c].phi_series;
  }
  return out;
}

DiagnosticsReport diagnose(const std::vector<ChainTrace>& traces) {
  const Eigen::MatrixXd series = phi_matrix(traces);
  DiagnosticsReport report;
  report.chains = traces.size();
  report.draws_per_chain = static_cast<long>(series.rows());
  report.pooled_mean_phi = series.mean();
  for (const auto& t : traces) {
    report.seconds_sampling += t.wall_seconds_sampling;
    report.seconds_precompute = std::max(report.seconds_precompute, t.wall_seconds_precompute);
  }
  if (series.cols() >= 2 && series.rows() >= 4) {
    try {
      report.rhat = split_rank_normalized_rhat(series);
    } catch (const ZeroVariance&) {
    }
  }
  if (series.rows() >= 8) {
    try {
      report.ess = ess(series);
    } catch (const ZeroVariance&) {
    }
  }
  if (report.ess) {
    const double count = static_cast<double>(series.size());
    const double sd = std::sqrt((series.array() - report.pooled_mean_phi).square().sum() /
                                (count - 1.0));
    report.pooled_se_phi = sd / std::sqrt(*report.ess);
    if (report.seconds_sampling > 0.0) {
      report.ess_per_second =
          ess_per_second(*report.ess, report.seconds_sampling, report.seconds_precompute, false);
      report.ess_per_second_incl_precompute =
          ess_per_second(*report.ess, report.seconds_sampling, report.seconds_precompute, true);
    }
  }
  return report;
}

}  // namespace agpotts
