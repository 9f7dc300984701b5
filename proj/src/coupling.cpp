#include "agpotts/coupling.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace agpotts {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Lattice2D: return "lattice2d";
    case Family::CurieWeiss: return "curie_weiss";
    case Family::ErdosRenyi: return "erdos_renyi";
    case Family::SK: return "sk";
    case Family::Hopfield: return "hopfield";
    case Family::Custom: return "custom";
  }
  return "custom";
}

std::string_view to_string(DiagonalConvention convention) {
  return convention == DiagonalConvention::Zeroed ? "zeroed" : "retained";
}

std::string_view to_string(LatticeScale scale) {
  return scale == LatticeScale::None ? "none" : "average_degree";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::Lattice2D, Family::CurieWeiss, Family::ErdosRenyi, Family::SK,
                   Family::Hopfield, Family::Custom}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown coupling family '" + std::string(name) + "'");
}

DiagonalConvention diagonal_from_string(std::string_view name) {
  if (name == "zeroed") return DiagonalConvention::Zeroed;
  if (name == "retained") return DiagonalConvention::Retained;
  throw ConfigError("unknown diagonal convention '" + std::string(name) + "'");
}

LatticeScale lattice_scale_from_string(std::string_view name) {
  if (name == "none") return LatticeScale::None;
  if (name == "average_degree") return LatticeScale::AverageDegree;
  throw ConfigError("unknown lattice scale '" + std::string(name) + "'");
}

CouplingMatrix make_custom(Eigen::MatrixXd entries, DiagonalConvention diagonal) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    throw DimensionMismatch("coupling matrix must be square and non-empty");
  }
  if (entries != entries.transpose()) {
    throw DimensionMismatch("coupling matrix must be exactly symmetric");
  }
  if (!entries.allFinite()) throw DimensionMismatch("coupling matrix has non-finite entries");
  if (diagonal == DiagonalConvention::Zeroed && !entries.diagonal().isZero(0.0)) {
    throw DimensionMismatch("zeroed diagonal convention requires a zero diagonal");
  }
  return CouplingMatrix{std::move(entries), Family::Custom, diagonal};
}

CouplingMatrix lattice_2d(int side, LatticeScale scale) {
  if (side < 2) throw ConfigError("lattice_2d: side must be at least 2");
  const int n = side * side;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  auto index = [side](int r, int c) { return r * side + c; };
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) a(index(r, c), index(r, c + 1)) = a(index(r, c + 1), index(r, c)) = 1.0;
      if (r + 1 < side) a(index(r, c), index(r + 1, c)) = a(index(r + 1, c), index(r, c)) = 1.0;
    }
  }
  if (scale == LatticeScale::AverageDegree) {
    const double average_degree = a.sum() / n;
    a /= average_degree;
  }
  return CouplingMatrix{std::move(a), Family::Lattice2D, DiagonalConvention::Zeroed};
}

CouplingMatrix curie_weiss(int n) {
  if (n < 2) throw ConfigError("curie_weiss: n must be at least 2");
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  a.diagonal().setZero();
  return CouplingMatrix{std::move(a), Family::CurieWeiss, DiagonalConvention::Zeroed};
}

CouplingMatrix erdos_renyi(int n, double p, RngStream& stream) {
  if (n < 2) throw ConfigError("erdos_renyi: n must be at least 2");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("erdos_renyi: p must lie in (0, 1]");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  long edges = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (stream.uniform() < p) {
        a(i, j) = a(j, i) = 1.0;
        ++edges;
      }
    }
  }
  if (edges == 0) throw DegenerateGraph("erdos_renyi: realized graph has no edges");
  const double average_degree = 2.0 * static_cast<double>(edges) / n;
  a /= average_degree;
  return CouplingMatrix{std::move(a), Family::ErdosRenyi, DiagonalConvention::Zeroed};
}

CouplingMatrix sk(int n, RngStream& stream) {
  if (n < 2) throw ConfigError("sk: n must be at least 2");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = scale * stream.normal();
  }
  return CouplingMatrix{std::move(a), Family::SK, DiagonalConvention::Zeroed};
}

CouplingMatrix hopfield(int n, int d, RngStream& stream) {
  if (n < 2) throw ConfigError("hopfield: n must be at least 2");
  if (d < 1) throw ConfigError("hopfield: d must be at least 1");
  Eigen::MatrixXd eta(d, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) eta(i, j) = stream.uniform() < 0.5 ? 1.0 : -1.0;
  }
  Eigen::MatrixXd a = eta.transpose() * eta / static_cast<double>(std::max(n, d));
  // The product is symmetric in exact arithmetic; make it bitwise so.
  a = a.triangularView<Eigen::Upper>().toDenseMatrix().selfadjointView<Eigen::Upper>();
  return CouplingMatrix{std::move(a), Family::Hopfield, DiagonalConvention::Retained};
}

AGPrecomp precompute_ag(const CouplingMatrix& coupling, double beta, double jitter) {
  if (!(beta > 0.0)) throw ConfigError("precompute_ag: beta must be positive");
  if (!(jitter > 0.0)) throw ConfigError("precompute_ag: jitter must be positive");
  const Eigen::Index n = coupling.n();
  const auto spectrum = sym_eigen(coupling.entries);
  const double abs_min = std::abs(spectrum.eigenvalues(n - 1));

  constexpr int kEscalations = 2;
  for (int attempt = 0;; ++attempt) {
    try {
      AGPrecomp out;
      out.beta = beta;
      out.jitter = jitter;
      out.lambda = abs_min + jitter * std::max(1.0, abs_min);
      out.B = beta * coupling.entries;
      out.B.diagonal().array() += beta * out.lambda;
      out.chol_Binv = cholesky_spd(spd_inverse(out.B));
      return out;
    } catch (const NotPositiveDefinite&) {
      if (attempt == kEscalations) throw;
      jitter *= 10.0;
    }
  }
}

LowRankPrecomp precompute_lowrank(const CouplingMatrix& coupling, double beta,
                                  double epsilon) {
  if (!(beta > 0.0)) throw ConfigError("precompute_lowrank: beta must be positive");
  if (!(epsilon >= 0.0)) throw ConfigError("precompute_lowrank: epsilon must be non-negative");
  const Eigen::Index n = coupling.n();
  // B and A share eigenvectors; B's eigenvalues are beta (lambda_i + |lambda_min|).
  const auto spectrum = sym_eigen(coupling.entries);
  const double shift = std::abs(spectrum.eigenvalues(n - 1));

  LowRankPrecomp out;
  out.n = n;
  out.epsilon = epsilon;
  out.beta = beta;
  out.shift = shift;
  out.all_eigenvalues = beta * (spectrum.eigenvalues.array() + shift);
  Eigen::Index k = 0;
  while (k < n && out.all_eigenvalues(k) > epsilon) ++k;
  out.k = k;
  out.mu = out.all_eigenvalues.head(k);
  out.P = spectrum.eigenvectors.leftCols(k);
  return out;
}

SpectralSummary spectral_summary(const CouplingMatrix& coupling, double beta,
                                 double epsilon) {
  const auto lr = precompute_lowrank(coupling, beta, epsilon);
  SpectralSummary out;
  out.lambda_max = lr.all_eigenvalues(0) / beta - lr.shift;
  out.lambda_min = lr.all_eigenvalues(lr.n - 1) / beta - lr.shift;
  out.rank_at_epsilon = lr.k;
  return out;
}

void write_coupling(std::ostream& out, const CouplingMatrix& coupling) {
  const Eigen::Index n = coupling.n();
  out << "n,family,diagonal_convention\n";
  out << n << ',' << to_string(coupling.family) << ',' << to_string(coupling.diagonal) << '\n';
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << coupling.entries(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

CouplingMatrix read_coupling(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,family,diagonal_convention") {
    throw ConfigError("coupling file: missing header row");
  }
  if (!std::getline(in, line)) throw ConfigError("coupling file: missing value row");
  const auto header = split_csv(line);
  if (header.size() != 3) throw ConfigError("coupling file: malformed value row");
  long n = 0;
  try {
    n = std::stol(header[0]);
  } catch (const std::exception&) {
    throw ConfigError("coupling file: n is not an integer");
  }
  if (n < 1) throw ConfigError("coupling file: n must be positive");
  CouplingMatrix out;
  out.family = family_from_string(header[1]);
  out.diagonal = diagonal_from_string(header[2]);
  out.entries.resize(n, n);
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ConfigError("coupling file: too few rows");
    const auto fields = split_csv(line);
    if (static_cast<long>(fields.size()) != n) {
      throw ConfigError("coupling file: row " + std::to_string(i + 1) + " has wrong length");
    }
    for (long j = 0; j < n; ++j) {
      try {
        out.entries(i, j) = std::stod(fields[j]);
      } catch (const std::exception&) {
        throw ConfigError("coupling file: unparsable value in row " + std::to_string(i + 1));
      }
    }
  }
  if (out.entries != out.entries.transpose()) {
    throw ConfigError("coupling file: matrix is not symmetric");
  }
  return out;
}

void save_coupling(const std::string& path, const CouplingMatrix& coupling) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  write_coupling(out, coupling);
}

CouplingMatrix load_coupling(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coupling file '" + path + "'");
  return read_coupling(in);
}

}  // namespace agpotts
