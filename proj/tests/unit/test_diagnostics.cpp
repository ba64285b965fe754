#include <doctest.h>

#include <cmath>
#include <random>

#include "hycal/diagnostics.hpp"
#include "hycal/error.hpp"

using namespace hycal;
using namespace hycal::diagnostics;

namespace {

std::vector<int> random_codes(std::size_t n, int levels, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, levels - 1);
  std::vector<int> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("plug-in entropy of small samples") {
  CHECK(plugin_entropy(std::vector<int>{0, 0, 1, 1}) == doctest::Approx(std::log(2.0)));
  CHECK(plugin_entropy(std::vector<int>{5, 5, 5}) == 0.0);
  CHECK(plugin_entropy(std::vector<int>{0, 1, 2, 3}) == doctest::Approx(std::log(4.0)));
  CHECK_THROWS_AS(plugin_entropy(std::vector<int>{}), ConfigError);
}

TEST_CASE("mutual information of a variable with itself is its entropy") {
  std::mt19937_64 rng(1);
  const auto x = random_codes(5000, 7, rng);
  CHECK(plugin_mi(x, x) == doctest::Approx(plugin_entropy(x)).epsilon(1e-12));
}

TEST_CASE("exact product table has zero mutual information") {
  std::vector<int> x, y;
  for (int i = 0; i < 16 * 50; ++i) {
    x.push_back(i % 4);
    y.push_back((i / 4) % 4);
  }
  CHECK(std::abs(plugin_mi(x, y)) < 1e-12);
}

TEST_CASE("chain rule and non-negativity hold for plug-in estimates") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto l = random_codes(3000, 2, rng);
    const auto c = random_codes(3000, 5, rng);
    auto m = random_codes(3000, 4, rng);
    for (std::size_t i = 0; i < m.size(); i += 3) m[i] = l[i] * 2 + c[i] % 2;
    const auto cm = pair_codes(c, m, 4);
    const double whole = plugin_mi(l, cm);
    const double parts = plugin_mi(l, c) + plugin_conditional_mi(l, m, c);
    CHECK(std::abs(whole - parts) < 1e-10);
    CHECK(plugin_mi(l, c) >= -1e-15);
    CHECK(plugin_conditional_mi(l, m, c) >= -1e-15);
    CHECK(whole >= plugin_mi(l, c) - 1e-12);
  }
}

TEST_CASE("binning") {
  CHECK(equal_width_bins(std::vector<double>{0, 1, 2, 3}, 2) == std::vector<int>{0, 0, 1, 1});
  CHECK(equal_width_bins(std::vector<double>{4, 4, 4}, 3) == std::vector<int>{0, 0, 0});
  CHECK(default_bin_count(1000) == 10);
  CHECK(default_bin_count(100000) == 47);
  CHECK(default_bin_count(1000000000) == 64);
  CHECK_THROWS_AS(equal_width_bins(std::vector<double>{1.0}, 0), ConfigError);
}

TEST_CASE("pearson correlation") {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1};
  CHECK(pearson(x, y) == doctest::Approx(1.0));
  CHECK(pearson(x, z) == doctest::Approx(-1.0));
}

TEST_CASE("surrogate statistics have the right ranges") {
  const auto s = draw_surrogate(5, 2.0, 2000, 3);
  for (std::size_t i = 0; i < s.c.size(); ++i) {
    CHECK(std::abs(s.c[i]) <= 1.0);
    CHECK(s.m[i] > 0.0);
  }
  double mean_sq = 0.0;
  for (double m : s.m) mean_sq += m * m;
  CHECK(mean_sq / 2000.0 == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("calibrated thresholds are reproducible") {
  CHECK(calibrate_pair_epsilon(20000, 27, 5) == calibrate_pair_epsilon(20000, 27, 5));
  CHECK(calibrate_pair_epsilon(20000, 27, 5) > 0.0);
  CHECK(calibrate_label_epsilon(20000, 27, 5) == calibrate_label_epsilon(20000, 27, 5));
}

TEST_CASE("independence holds for isotropic residuals") {
  const auto r = independence_check(6, 1.5, 20000, 8);
  CHECK(std::abs(r.pearson_corr) < kMaxAbsCorrelation);
  CHECK(r.binned_mi < r.epsilon);
  CHECK(r.dependent_mi > 10.0 * r.epsilon);
  CHECK(r.pass);
  CHECK(std::abs(r.joint_vs_sum_entropy_gap + r.binned_mi) < 1e-10);
}

TEST_CASE("independence check limits") {
  CHECK_THROWS_AS(independence_check(1, 1.0, 20000, 0), ConfigError);
  CHECK_THROWS_AS(independence_check(4, 1.0, 9999, 0), ConfigError);
}

TEST_CASE("XOR labels need both statistics") {
  const auto r = mi_gain_check(8, 20000, xor_labeler(), 4);
  CHECK(r.inequality_holds);
  CHECK(r.margin > 0.1);
  CHECK(r.i_lc < r.epsilon);
  CHECK(r.i_lm < r.epsilon);
}

TEST_CASE("angular labels are explained by C alone") {
  const auto r = mi_gain_check(8, 20000, angular_threshold_labeler(), 4);
  CHECK(r.inequality_holds);
  CHECK(r.i_lc > 0.5);
  CHECK(r.i_lm < r.epsilon);
  CHECK(r.margin < r.epsilon);
}

TEST_CASE("independent labels carry no information") {
  const auto r = mi_gain_check(8, 20000, random_labeler(11), 4);
  CHECK(r.i_lcm < r.epsilon);
  CHECK(r.inequality_holds);
}

TEST_CASE("a constant labeler is rejected") {
  Labeler constant = [](std::span<const double> c, std::span<const double>) {
    return std::vector<int>(c.size(), 1);
  };
  CHECK_THROWS_AS(mi_gain_check(8, 20000, constant, 0), ConfigError);
}
