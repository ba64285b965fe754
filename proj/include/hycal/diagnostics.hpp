#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hycal::diagnostics {

// Samples of Delta ~ N(0, sigma^2 I_d) reduced to the angular statistic
// C = <Delta, e_1> / |Delta| and the radial statistic M = |Delta| / sigma.
struct SurrogateSampleSet {
  std::vector<double> c;
  std::vector<double> m;
  int d = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

SurrogateSampleSet draw_surrogate(int d, double sigma, std::size_t n, std::uint64_t seed);

// ceil(n^(1/3)) capped at 64.
int default_bin_count(std::size_t n);

// Equal-width bin index in [0, bins) over [min(values), max(values)].
std::vector<int> equal_width_bins(std::span<const double> values, int bins);

// Plug-in (maximum-likelihood) estimators over discrete codes, in nats.
double plugin_entropy(std::span<const int> codes);
double plugin_mi(std::span<const int> x, std::span<const int> y);
// I(X; Y | Z) from the joint empirical distribution of (X, Y, Z).
double plugin_conditional_mi(std::span<const int> x, std::span<const int> y, std::span<const int> z);
// Joint code of two bin indices.
std::vector<int> pair_codes(std::span<const int> a, std::span<const int> b, int b_levels);

// I(X;Y) after equal-width binning each variable into `bins` bins.
double binned_mi(std::span<const double> x, std::span<const double> y, int bins);

double pearson(std::span<const double> x, std::span<const double> y);

// Three times the absolute plug-in MI measured on `n` independent uniform
// pairs binned into bins x bins cells.
double calibrate_pair_epsilon(std::size_t n, int bins, std::uint64_t seed);

// Three times the largest plug-in MI measured between an independent fair
// coin label and binned independent uniforms (C, M), (C) and (M).
double calibrate_label_epsilon(std::size_t n, int bins, std::uint64_t seed);

struct IndependenceReport {
  int d = 0;
  double sigma = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int bins = 0;
  double pearson_corr = 0.0;
  double binned_mi = 0.0;
  // H(C,M) - H(C) - H(M) of the binned variables.
  double joint_vs_sum_entropy_gap = 0.0;
  double epsilon = 0.0;
  // MI of the perfectly dependent pair (M, M).
  double dependent_mi = 0.0;
  bool pass = false;
};

inline constexpr double kMaxAbsCorrelation = 0.02;

// epsilon <= 0 selects calibrate_pair_epsilon at the same n and binning.
IndependenceReport independence_check(int d, double sigma, std::size_t n, std::uint64_t seed,
                                      double epsilon = 0.0);

using Labeler = std::function<std::vector<int>(std::span<const double> c, std::span<const double> m)>;

// [C > 0] xor [M > median(M)].
Labeler xor_labeler();
// [C > 0].
Labeler angular_threshold_labeler();
// Fair coin independent of (C, M), seeded.
Labeler random_labeler(std::uint64_t seed);

struct MiGainReport {
  int d = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int bins = 0;
  double i_lc = 0.0;
  double i_lm = 0.0;
  double i_lcm = 0.0;
  double i_lm_given_c = 0.0;
  double epsilon = 0.0;
  // I(L;C,M) - max(I(L;C), I(L;M)).
  double margin = 0.0;
  bool inequality_holds = false;
};

// epsilon <= 0 selects calibrate_label_epsilon at the same n and binning.
MiGainReport mi_gain_check(int d, std::size_t n, const Labeler& labeler, std::uint64_t seed,
                           double epsilon = 0.0);

}  // namespace hycal::diagnostics
