#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hycal/error.hpp"
#include "hycal/synthetic.hpp"

using namespace hycal;

namespace {

SyntheticDomainSpec small_spec() {
  SyntheticDomainSpec s;
  s.domain_id = 2;
  s.name = "d";
  s.first_class_id = 10;
  s.n_classes = 4;
  s.dim = 5;
  s.train_per_class = 6;
  s.test_per_class = 3;
  s.cov_scale = 0.5;
  s.spectrum = geometric_spectrum(5, 8.0);
  s.seed = 9;
  return s;
}

}  // namespace

TEST_CASE("domain layout and ids") {
  const auto d = generate_domain(small_spec());
  CHECK(d.task.domain_id() == 2);
  CHECK(d.task.class_ids() == std::vector<ClassId>{10, 11, 12, 13});
  CHECK(d.task.train_samples().size() == 24);
  CHECK(d.task.test_samples().size() == 12);
  CHECK(d.entries.size() == 4);
  CHECK(d.entries[0].second.domain_id == 2);
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = generate_domain(small_spec());
  const auto b = generate_domain(small_spec());
  auto other = small_spec();
  other.seed = 10;
  const auto c = generate_domain(other);
  CHECK(a.task.train_samples()[5].embedding.values() == b.task.train_samples()[5].embedding.values());
  CHECK(a.task.train_samples()[5].embedding.values() != c.task.train_samples()[5].embedding.values());
}

TEST_CASE("class covariance has the requested spectrum") {
  const auto s = small_spec();
  const auto d = generate_domain(s);
  for (const auto& cls : d.classes) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cls.covariance);
    Eigen::VectorXd want = s.spectrum * s.cov_scale * s.cov_scale;
    std::sort(want.data(), want.data() + want.size());
    CHECK((es.eigenvalues() - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero covariance scale yields point-mass classes") {
  auto s = small_spec();
  s.cov_scale = 0.0;
  s.text_noise = 0.0;
  const auto d = generate_domain(s);
  for (const auto& smp : d.task.train_samples()) {
    const auto& cls = d.classes[smp.class_id - s.first_class_id];
    CHECK(smp.embedding.values() == cls.mean);
  }
  CHECK(d.entries[1].second.text_embedding.values() == d.classes[1].mean);
}

TEST_CASE("invalid domain specs") {
  auto s = small_spec();
  s.n_classes = 0;
  CHECK_THROWS_AS(generate_domain(s), ConfigError);
  s = small_spec();
  s.spectrum = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(generate_domain(s), DimensionError);
  s = small_spec();
  s.cov_scale = -1.0;
  CHECK_THROWS_AS(generate_domain(s), ConfigError);
}

TEST_CASE("rotation is orthogonal") {
  const auto q = random_rotation(6, 3);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("gaussian entropy closed form") {
  const Eigen::MatrixXd i3 = Eigen::MatrixXd::Identity(3, 3);
  CHECK(gaussian_entropy(i3) == doctest::Approx(1.5 * std::log(2.0 * std::numbers::pi * std::numbers::e)));
  CHECK_THROWS_AS(gaussian_entropy(Eigen::MatrixXd::Zero(2, 2)), SingularCovarianceError);
}

TEST_CASE("scaling every eigenvalue by c raises entropy by (d/2) ln c") {
  auto s = small_spec();
  const auto base = generate_domain(s);
  s.spectrum *= 3.0;
  const auto scaled = generate_domain(s);
  for (std::size_t i = 0; i < base.classes.size(); ++i) {
    const double gap = gaussian_entropy(scaled.classes[i].covariance) -
                       gaussian_entropy(base.classes[i].covariance);
    CHECK(gap == doctest::Approx(2.5 * std::log(3.0)).epsilon(1e-10));
  }
}

TEST_CASE("empirical entropy approaches the closed form") {
  auto s = small_spec();
  s.n_classes = 1;
  s.train_per_class = 20000;
  const auto d = generate_domain(s);
  Eigen::MatrixXd x(5, 20000);
  for (int j = 0; j < 20000; ++j) x.col(j) = d.task.train_samples()[j].embedding.values();
  CHECK(std::abs(empirical_gaussian_entropy(x) - gaussian_entropy(d.classes[0].covariance)) < 0.05);
}

TEST_CASE("gravity scenario honours the sample ratio") {
  for (double ratio : {1.0, 9.0}) {
    const auto g = domain_gravity_scenario(ratio, 1.0, 4);
    REQUIRE(g.stream.size() == 2);
    CHECK(g.stream[0].class_ids().size() == 11);
    CHECK(g.stream[1].class_ids().size() == 47);
    const double measured = static_cast<double>(g.stream[1].total_shots()) /
                            static_cast<double>(g.stream[0].total_shots());
    CHECK(std::abs(measured - ratio) <= 1.0);
  }
  CHECK_THROWS_AS(domain_gravity_scenario(0.5, 1.0, 0), ConfigError);
}

TEST_CASE("benchmark specs vary per domain") {
  const auto specs = benchmark_domain_specs(5, 6, 10, 5, 1);
  REQUIRE(specs.size() == 5);
  ClassId next = 0;
  for (const auto& s : specs) {
    CHECK(s.first_class_id == next);
    CHECK(s.n_classes >= 3);
    CHECK(s.n_classes <= 12);
    next += static_cast<ClassId>(s.n_classes);
  }
  CHECK(specs[0].cov_scale != specs[1].cov_scale);
  const auto stream = synthetic_benchmark_stream(5, 6, 1);
  CHECK(stream.stream.size() == 5);
  CHECK(stream.registry.size() == next);
}
