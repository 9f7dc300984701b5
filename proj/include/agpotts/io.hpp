#pragma once

// CSV and JSON renderings of traces, reports and oracle results.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "agpotts/diagnostics.hpp"
#include "agpotts/model.hpp"
#include "agpotts/samplers.hpp"
#include "agpotts/tempering.hpp"

namespace agpotts {

/// Significant digits used for matrix and trace values.
inline constexpr int kMatrixDigits = 17;
/// Significant digits used for diagnostics tables.
inline constexpr int kDiagnosticsDigits = 9;

/// Columns "iter,phi,x_1..x_n"; iter counts from 1 across burn-in, states are
/// written 1-based. Requires recorded draws.
void write_trace_csv(std::ostream& out, const ChainTrace& trace);

/// Timings, iteration counts and seed lineage of a trace.
nlohmann::json trace_sidecar_json(const ChainTrace& trace);

nlohmann::json report_json(const DiagnosticsReport& report);

/// Identifies the run a benchmark row belongs to.
struct RunLabel {
  std::string sampler;
  std::string model;
  double beta = 0.0;
  int q = 2;
  long n = 0;
};

/// Header of the benchmark table (no trailing newline).
std::string report_csv_header();
std::string report_csv_row(const RunLabel& label, const DiagnosticsReport& report);

nlohmann::json exact_summary_json(const ExactSummary& summary);
nlohmann::json certificate_json(const Lemma1Certificate& certificate);
nlohmann::json exchange_stats_json(const TemperingLadder& ladder, const ExchangeStats& stats);

/// Fixed-precision decimal rendering.
std::string format_number(double value, int digits);

}  // namespace agpotts
