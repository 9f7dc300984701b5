#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "agpotts/coupling.hpp"
#include "agpotts/errors.hpp"
#include "agpotts/model.hpp"
#include "agpotts/tempering.hpp"
#include "support.hpp"

using namespace agpotts;

namespace {

double direct_partial_hamiltonian(const Eigen::MatrixXd& a, const Spins& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x(i) == x(j)) sum += a(i, j);
    }
  }
  return -0.5 * sum;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * (i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace

TEST_CASE("ladder validation") {
  CHECK_NOTHROW(make_ladder({0.5, 1.0}));
  CHECK_THROWS_AS(make_ladder({1.0}), ConfigError);
  CHECK_THROWS_AS(make_ladder({1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(make_ladder({2.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(make_ladder({0.0, 1.0}), ConfigError);
  const TemperingLadder standard = linear_ladder(0.5, 3.0, 11);
  CHECK(standard.size() == 11);
  CHECK(standard.betas[1] == doctest::Approx(0.75));
  CHECK(standard.betas.back() == 3.0);
}

TEST_CASE("partial Hamiltonian") {
  CHECK(partial_hamiltonian(make_custom(Eigen::MatrixXd::Zero(4, 4)), Spins::Zero(4)) == 0.0);
  CHECK(partial_hamiltonian(curie_weiss(10), Spins::Zero(10)) == doctest::Approx(-4.5));
  RngStream s(1, 0);
  const CouplingMatrix lattice = lattice_2d(2);
  for (int trial = 0; trial < 20; ++trial) {
    Spins x(4);
    for (int i = 0; i < 4; ++i) x(i) = static_cast<int>(s.uniform_index(3));
    CHECK(partial_hamiltonian(lattice, x) ==
          doctest::Approx(direct_partial_hamiltonian(lattice.entries, x)));
  }
}

TEST_CASE("exchange probability") {
  CHECK(exchange_probability(1.0, 1.5, -3.0, -3.0) == 1.0);
  CHECK(exchange_probability(1.0, 1.25, 0.0, -4.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(exchange_probability(1.0, 1.25, -4.0, 0.0) == 1.0);
  // Metropolis ratio identity between a pair and its swap
  RngStream s(2, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double b0 = 0.5 + s.uniform(), b1 = b0 + s.uniform();
    const double h0 = -5 * s.uniform(), h1 = -5 * s.uniform();
    const double forward = exchange_probability(b0, b1, h0, h1);
    const double backward = exchange_probability(b0, b1, h1, h0);
    CHECK(forward / backward == doctest::Approx(std::exp((b1 - b0) * (h1 - h0))));
    CHECK(std::max(forward, backward) == 1.0);
  }
}

TEST_CASE("tempered run bookkeeping") {
  RngStream s(3, 0);
  const CouplingMatrix c = sk(10, s);
  const TemperingLadder ladder = make_ladder({0.5, 1.0, 2.0});
  const TemperingSchedule schedule{7, 13, 11};
  const TemperedRun run = tempered_run(SamplerKind::AGGibbs, c, 2, ladder, schedule, 4);
  CHECK(run.replicas.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    const ChainTrace& r = run.replicas[t];
    CHECK(r.kept() == 7 * 13 - 11);
    CHECK(r.stream_id == replica_stream_id(0, t));
    const PottsModel m = make_model(c, ladder.betas[t], 2);
    for (Eigen::Index row = 0; row < r.kept(); ++row) {
      const Spins x = r.draws.row(row).transpose();
      CHECK(r.phi_series(row) == doctest::Approx(summary_phi(m, x)));
      CHECK(partial_hamiltonian(c, x) ==
            doctest::Approx(-r.phi_series(row) / (2 * ladder.betas[t])));
    }
  }
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(run.exchanges.attempts[t] == 7);
    CHECK(run.exchanges.accepts[t] >= 0);
    CHECK(run.exchanges.accepts[t] <= run.exchanges.attempts[t]);
    CHECK(run.exchanges.rate(t) >= 0.0);
    CHECK(run.exchanges.rate(t) <= 1.0);
  }
  CHECK_THROWS_AS(tempered_run(SamplerKind::AGGibbs, c, 2, ladder, {0, 10, 0}, 4), ConfigError);
  CHECK_THROWS_AS(tempered_run(SamplerKind::AGGibbs, c, 2, ladder, {2, 10, 20}, 4), ConfigError);
}

TEST_CASE("tempered runs are reproducible") {
  RngStream s(5, 0);
  const CouplingMatrix c = sk(12, s);
  const TemperingLadder ladder = linear_ladder(0.5, 2.0, 4);
  auto run = [&] { return tempered_run(SamplerKind::AGGibbs, c, 3, ladder, {5, 20, 0}, 6, 1); };
  const TemperedRun a = run(), b = run();
  for (std::size_t t = 0; t < 4; ++t) CHECK(a.replicas[t].draws == b.replicas[t].draws);
  CHECK(a.exchanges.accepts == b.exchanges.accepts);
}

TEST_CASE("near-degenerate ladder accepts almost every exchange") {
  RngStream s(7, 0);
  const CouplingMatrix c = sk(8, s);
  const TemperedRun run =
      tempered_run(SamplerKind::HeatBath, c, 2, make_ladder({1.0, 1.0 + 1e-9}), {100, 1, 0}, 8);
  CHECK(run.exchanges.attempts[0] == 100);
  CHECK(run.exchanges.rate(0) >= 0.99);
}

TEST_CASE("cold replica samples the cold target") {
  RngStream s(9, 0);
  const CouplingMatrix c = sk(2, s);
  const PottsModel cold = make_model(c, 3.0, 2);
  const Eigen::VectorXd pi = *exact_summary(cold, true).pmf;
  const TemperedRun run =
      tempered_run(SamplerKind::AGGibbs, c, 2, make_ladder({0.5, 3.0}), {1000, 101, 1000}, 10);
  CHECK(run.cold().kept() == 100000);
  CHECK(testing::total_variation(testing::empirical_pmf({run.cold()}, 2), pi) < 0.02);
  CHECK(run.exchanges.rate(0) > 0.0);
}

TEST_CASE("smaller temperature gaps are accepted more often") {
  RngStream s(11, 0);
  const CouplingMatrix c = sk(24, s);
  std::vector<double> gaps, rates;
  for (double gap : {0.1, 0.25, 0.5}) {
    std::vector<double> ladder;
    for (double b = 1.0; b <= 2.0 + 1e-9; b += gap) ladder.push_back(b);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const TemperedRun run =
          tempered_run(SamplerKind::AGGibbs, c, 2, make_ladder(ladder), {60, 20, 0}, seed);
      double mean = 0.0;
      for (std::size_t t = 0; t + 1 < ladder.size(); ++t) mean += run.exchanges.rate(t);
      gaps.push_back(gap);
      rates.push_back(mean / (ladder.size() - 1));
    }
  }
  CHECK(spearman(gaps, rates) < -0.7);
}
