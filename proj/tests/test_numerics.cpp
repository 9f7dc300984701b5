#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "agpotts/errors.hpp"
#include "agpotts/numerics.hpp"
#include "agpotts/parallel.hpp"

using namespace agpotts;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Eigen::MatrixXd random_symmetric(RngStream& stream, Eigen::Index n) {
  const Eigen::MatrixXd g = standard_normal_matrix(stream, n, n);
  return (g + g.transpose()) / 2;
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  const Eigen::VectorXd va = standard_normal_vec(a, 3);
  CHECK(va == standard_normal_vec(b, 3));
  CHECK(va != standard_normal_vec(c, 3));
  CHECK(va != standard_normal_vec(d, 3));

  RngStream e(42, 7);
  RngStream child1 = e.child(1);
  RngStream child2 = RngStream(42, 7).child(1);
  CHECK(child1.uniform() == child2.uniform());
}

TEST_CASE("uniform lies in [0, 1) and uniform_index in range") {
  RngStream s(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const auto k = s.uniform_index(7);
    REQUIRE(k < 7);
  }
}

TEST_CASE("standard normal moments and KS statistic") {
  RngStream s(2024, 0);
  const Eigen::Index n = 1000000;
  Eigen::VectorXd v = standard_normal_vec(s, n);
  const double mean = v.mean();
  const double var = (v.array() - mean).square().sum() / (n - 1);
  CHECK(std::abs(mean) < 0.01);
  CHECK(var >= 0.99);
  CHECK(var <= 1.01);

  std::sort(v.data(), v.data() + n);
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f = normal_cdf(v(i));
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(i + 1) / n - f)});
  }
  // 1% critical value of the one-sample KS statistic.
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("neighbouring streams are uncorrelated") {
  const Eigen::Index n = 200000;
  RngStream a(5, 1000), b(5, 1001);
  const Eigen::VectorXd x = standard_normal_vec(a, n);
  const Eigen::VectorXd y = standard_normal_vec(b, n);
  const double corr = (x.array() - x.mean()).matrix().dot((y.array() - y.mean()).matrix()) /
                      std::sqrt((x.array() - x.mean()).square().sum() *
                                (y.array() - y.mean()).square().sum());
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("categorical sampling") {
  RngStream s(9, 0);
  SUBCASE("single category") {
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(1, 3.5);
    for (int i = 0; i < 100; ++i) CHECK(categorical_from_logweights(s, w) == 0);
  }
  SUBCASE("dominated category") {
    Eigen::VectorXd w(2);
    w << 0.0, -1e9;
    int zeros = 0;
    for (int i = 0; i < 10000; ++i) zeros += categorical_from_logweights(s, w) == 0;
    CHECK(zeros == 10000);
  }
  SUBCASE("uniform chi-square") {
    const Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
    const int draws = 100000;
    Eigen::Vector4d counts = Eigen::Vector4d::Zero();
    for (int i = 0; i < draws; ++i) counts(categorical_from_logweights(s, w)) += 1;
    const double expected = draws / 4.0;
    const double chi2 = (counts.array() - expected).square().sum() / expected;
    CHECK(chi2 < 11.345);  // 99th percentile, 3 degrees of freedom
  }
  SUBCASE("frequencies follow the softmax") {
    Eigen::Vector3d w(0.3, -1.2, 1.0);
    const Eigen::Vector3d p = (w.array() - log_sum_exp(w)).exp();
    const int draws = 200000;
    Eigen::Vector3d counts = Eigen::Vector3d::Zero();
    for (int i = 0; i < draws; ++i) counts(categorical_from_logweights(s, w)) += 1;
    for (int a = 0; a < 3; ++a) {
      const double sd = std::sqrt(p(a) * (1 - p(a)) / draws);
      CHECK(std::abs(counts(a) / draws - p(a)) < 4 * sd);
    }
  }
  SUBCASE("shift invariance in distribution") {
    Eigen::Vector3d w(0.1, 0.7, -0.4);
    const Eigen::Vector3d shifted = w.array() + 700.0;
    RngStream s1(11, 0), s2(12, 0);
    Eigen::Vector3d c1 = Eigen::Vector3d::Zero(), c2 = Eigen::Vector3d::Zero();
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      c1(categorical_from_logweights(s1, w)) += 1;
      c2(categorical_from_logweights(s2, shifted)) += 1;
    }
    CHECK(0.5 * (c1 - c2).cwiseAbs().sum() / draws < 0.01);
  }
  SUBCASE("non-finite weights") {
    Eigen::Vector2d w(0.0, std::nan(""));
    CHECK_THROWS_AS(categorical_from_logweights(s, w), InvalidWeight);
    w << 0.0, INFINITY;
    CHECK_THROWS_AS(categorical_from_logweights(s, w), InvalidWeight);
  }
}

TEST_CASE("cholesky round trip") {
  RngStream s(3, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd g = standard_normal_matrix(s, 12, 12);
    const Eigen::MatrixXd m = g.transpose() * g + Eigen::MatrixXd::Identity(12, 12);
    const Eigen::MatrixXd l = cholesky_spd(m);
    CHECK((l * l.transpose() - m).norm() / m.norm() < tol::kCholeskyResidual);
    CHECK(l.isLowerTriangular());
  }
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(cholesky_spd(indefinite), NotPositiveDefinite);
  Eigen::MatrixXd rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(cholesky_spd(rect), DimensionMismatch);
}

TEST_CASE("symmetric eigendecomposition") {
  SUBCASE("identity") {
    const auto e = sym_eigen(Eigen::MatrixXd::Identity(4, 4));
    CHECK((e.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("complete graph spectrum") {
    const int n = 10;
    const Eigen::MatrixXd a =
        (Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n)) / n;
    const auto e = sym_eigen(a);
    CHECK(e.eigenvalues(0) == doctest::Approx(1.0 - 1.0 / n).epsilon(1e-12));
    for (int j = 1; j < n; ++j) CHECK(e.eigenvalues(j) == doctest::Approx(-1.0 / n).epsilon(1e-12));
  }
  SUBCASE("random reconstruction, ordering and orthonormality") {
    RngStream s(4, 0);
    const Eigen::MatrixXd m = random_symmetric(s, 6);
    const auto e = sym_eigen(m);
    const Eigen::MatrixXd& p = e.eigenvectors;
    CHECK((p * e.eigenvalues.asDiagonal() * p.transpose() - m).norm() < tol::kEigenReconstruction);
    CHECK((p.transpose() * p - Eigen::MatrixXd::Identity(6, 6)).norm() < tol::kOrthonormality);
    for (int j = 1; j < 6; ++j) CHECK(e.eigenvalues(j - 1) >= e.eigenvalues(j));
  }
  SUBCASE("asymmetric input") {
    Eigen::Matrix2d m;
    m << 1, 2, 3, 1;
    CHECK_THROWS_AS(sym_eigen(m), DimensionMismatch);
  }
}

TEST_CASE("spd inverse and log-sum-exp") {
  RngStream s(6, 0);
  const Eigen::MatrixXd g = standard_normal_matrix(s, 8, 8);
  const Eigen::MatrixXd m = g * g.transpose() + Eigen::MatrixXd::Identity(8, 8);
  const Eigen::MatrixXd inv = spd_inverse(m);
  CHECK((inv * m - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-10);
  CHECK(is_symmetric(inv, 0.0));

  Eigen::Vector3d v(1000.0, 1000.0, -INFINITY);
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10,
                               [](std::size_t i) {
                                 if (i == 3) throw ConfigError("boom");
                               }),
                  ConfigError);
}
