#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "hycal/error.hpp"
#include "hycal/prototype.hpp"
#include "oracles.hpp"

using namespace hycal;

TEST_CASE("covariance matches a loop oracle") {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = oracle::gaussian_matrix(5, 9, rng);
  CHECK(oracle::rel_err(empirical_covariance(x), oracle::loop_covariance(x)) < 1e-12);
}

TEST_CASE("precision matches Gauss-Jordan inverse of the shrunk covariance, K < d included") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 9;
    const int k = 1 + trial % 12;
    const Eigen::MatrixXd x = oracle::gaussian_matrix(d, k, rng);
    const RegularizationConfig reg{0.05, 0.7};
    const auto p = learn_prototype(x, 7, reg);
    Eigen::MatrixXd shrunk = (1.0 - reg.lambda) * oracle::loop_covariance(x);
    shrunk.diagonal().array() += reg.lambda * reg.gamma;
    CHECK(oracle::rel_err(p.precision, oracle::gauss_jordan_inverse(shrunk)) < 1e-8);
    CHECK(p.sample_count == k);
    CHECK(p.mu.isApprox(x.rowwise().mean()));
  }
}

TEST_CASE("precision is symmetric positive definite") {
  std::mt19937_64 rng(3);
  for (int k : {1, 2, 4, 30}) {
    const auto p = learn_prototype(oracle::gaussian_matrix(6, k, rng), 0, RegularizationConfig{});
    CHECK(p.precision == p.precision.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.precision);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("full shrinkage gives the scaled identity") {
  std::mt19937_64 rng(4);
  const auto p = learn_prototype(oracle::gaussian_matrix(4, 3, rng), 0, RegularizationConfig{1.0, 2.0});
  CHECK(oracle::rel_err(p.precision, Eigen::MatrixXd::Identity(4, 4) * 0.5) < 1e-15);
}

TEST_CASE("prototype does not depend on sample order") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = oracle::gaussian_matrix(5, 8, rng);
  std::vector<int> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd y(5, 8);
  for (int j = 0; j < 8; ++j) y.col(j) = x.col(perm[j]);
  const auto a = learn_prototype(x, 0, RegularizationConfig{});
  const auto b = learn_prototype(y, 0, RegularizationConfig{});
  CHECK(oracle::rel_err(a.precision, b.precision) < 1e-9);
  CHECK(oracle::rel_err(a.mu, b.mu) < 1e-14);
}

TEST_CASE("single precision instantiation") {
  const Eigen::MatrixXf x = Eigen::MatrixXf::Random(3, 5);
  const auto p = learn_prototype(x, 0, RegularizationConfig{0.1, 1.0});
  static_assert(std::is_same_v<decltype(p.precision), Eigen::MatrixXf>);
  CHECK(p.precision.allFinite());
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(learn_prototype(Eigen::MatrixXd(3, 0), 0, RegularizationConfig{}), ProtocolError);
  CHECK_THROWS_AS(learn_prototype(Eigen::MatrixXd::Ones(3, 2), 0, RegularizationConfig{0.0, 1.0}),
                  SingularCovarianceError);
  CHECK_THROWS_AS((RegularizationConfig{1.5, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((RegularizationConfig{0.1, 0.0}.validate()), ConfigError);
}

TEST_CASE("store is append only and ingestion is all or nothing") {
  using fixture::sample;
  using fixture::vec;
  ClassRegistry reg;
  reg.add(0, {0, "a", vec({1.0, 0.0})});
  reg.add(1, {0, "b", vec({0.0, 1.0})});
  DomainTask task(0, {{0, 1}, {1, 2}},
                  {sample(vec({1.0, 0.0}), 0, 0), sample(vec({0.0, 1.0}), 1, 0),
                   sample(vec({0.0, 2.0}), 1, 0)},
                  {});
  auto store = ingest_task({}, task, reg, FusionMode::Sum, RegularizationConfig{});
  CHECK(store.size() == 2);
  CHECK(store.at(1).sample_count == 2);
  CHECK(store.at(1).mu(1) == doctest::Approx(2.5));  // text (0,1) fused onto (0,1.5) mean
  CHECK_THROWS_AS(ingest_task(store, task, reg, FusionMode::Sum, RegularizationConfig{}), ProtocolError);
  CHECK_THROWS_AS(store.at(5), ProtocolError);
  CHECK_THROWS_AS(store.insert(store.at(0)), ProtocolError);
}
