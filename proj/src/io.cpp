#include "agpotts/io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace agpotts {

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(digits);
  out << value;
  return out.str();
}

void write_trace_csv(std::ostream& out, const ChainTrace& trace) {
  const Eigen::Index kept = trace.phi_series.size();
  if (trace.draws.rows() != kept) {
    throw DimensionMismatch("write_trace_csv: trace was run without recorded draws");
  }
  const Eigen::Index n = trace.draws.cols();
  out << "iter,phi";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << (i + 1);
  out << '\n';
  for (Eigen::Index t = 0; t < kept; ++t) {
    out << (trace.burn_in + t + 1) << ',' << format_number(trace.phi_series(t), kMatrixDigits);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << (trace.draws(t, i) + 1);
    out << '\n';
  }
}

nlohmann::json trace_sidecar_json(const ChainTrace& trace) {
  return {
      {"sampler", std::string(to_string(trace.kind))},
      {"master_seed", trace.master_seed},
      {"stream_id", trace.stream_id},
      {"iterations", trace.iterations},
      {"burn_in", trace.burn_in},
      {"kept", trace.kept()},
      {"wall_seconds_sampling", trace.wall_seconds_sampling},
      {"wall_seconds_precompute", trace.wall_seconds_precompute},
  };
}

namespace {

nlohmann::json optional_number(const std::optional<double>& value) {
  if (!value || !std::isfinite(*value)) {
    return value ? nlohmann::json(format_number(*value, kDiagnosticsDigits)) : nlohmann::json();
  }
  return *value;
}

}  // namespace

nlohmann::json report_json(const DiagnosticsReport& report) {
  return {
      {"rhat", optional_number(report.rhat)},
      {"ess", optional_number(report.ess)},
      {"ess_per_second", report.ess_per_second},
      {"ess_per_second_incl_precompute", report.ess_per_second_incl_precompute},
      {"pooled_mean_phi", report.pooled_mean_phi},
      {"pooled_se_phi", report.pooled_se_phi},
      {"chains", report.chains},
      {"draws_per_chain", report.draws_per_chain},
      {"seconds_sampling", report.seconds_sampling},
      {"seconds_precompute", report.seconds_precompute},
      {"mixing_failure", report.mixing_failure()},
  };
}

std::string report_csv_header() {
  return "sampler,model,beta,q,n,ess,rhat,seconds_sampling,seconds_precompute,ess_per_sec,"
         "ess_per_sec_incl_precompute";
}

std::string report_csv_row(const RunLabel& label, const DiagnosticsReport& report) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v, kDiagnosticsDigits) : std::string("NA");
  };
  std::ostringstream row;
  row << label.sampler << ',' << label.model << ','
      << format_number(label.beta, kDiagnosticsDigits) << ',' << label.q << ',' << label.n << ','
      << opt(report.ess) << ',' << opt(report.rhat) << ','
      << format_number(report.seconds_sampling, kDiagnosticsDigits) << ','
      << format_number(report.seconds_precompute, kDiagnosticsDigits) << ','
      << format_number(report.ess_per_second, kDiagnosticsDigits) << ','
      << format_number(report.ess_per_second_incl_precompute, kDiagnosticsDigits);
  return row.str();
}

nlohmann::json exact_summary_json(const ExactSummary& summary) {
  nlohmann::json out = {
      {"log_partition", summary.log_partition},
      {"mean_phi", summary.mean_phi},
      {"phi_diagonal_offset", summary.phi_diagonal_offset},
      {"states", summary.states},
  };
  if (summary.pmf) {
    out["pmf"] = std::vector<double>(summary.pmf->data(), summary.pmf->data() + summary.pmf->size());
  }
  return out;
}

nlohmann::json certificate_json(const Lemma1Certificate& c) {
  return {
      {"epsilon", c.epsilon},
      {"retained_rank", c.retained_rank},
      {"delta_log_partition", c.delta_log_partition},
      {"kl_pq", c.kl_pq},
      {"kl_qp", c.kl_qp},
      {"bound_log_partition", c.bound_log_partition},
      {"bound_kl", c.bound_kl},
      {"stated_bound_log_partition", c.stated_bound_log_partition},
      {"stated_bound_kl", c.stated_bound_kl},
      {"pass_log_partition", c.pass_log_partition},
      {"pass_kl", c.pass_kl},
      {"pass_stated_log_partition", c.pass_stated_log_partition},
      {"pass_stated_kl", c.pass_stated_kl},
  };
}

nlohmann::json exchange_stats_json(const TemperingLadder& ladder, const ExchangeStats& stats) {
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t t = 0; t < stats.attempts.size(); ++t) {
    pairs.push_back({
        {"beta_low", ladder.betas[t]},
        {"beta_high", ladder.betas[t + 1]},
        {"attempts", stats.attempts[t]},
        {"accepts", stats.accepts[t]},
        {"rate", stats.rate(t)},
    });
  }
  return {{"pairs", pairs}};
}

}  // namespace agpotts
