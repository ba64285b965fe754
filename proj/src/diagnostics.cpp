#include "hycal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include "hycal/error.hpp"

namespace hycal::diagnostics {
namespace {

constexpr std::size_t kMinSamples = 10'000;
constexpr std::uint64_t kCalibrationSalt = 0x63616c6962ULL;

// Counts of each distinct code, keyed in ascending order.
template <typename Key>
double entropy_of_counts(const std::map<Key, std::size_t>& counts, std::size_t n) {
  double h = 0.0;
  const double total = static_cast<double>(n);
  for (const auto& [key, count] : counts) {
    const double p = static_cast<double>(count) / total;
    h -= p * std::log(p);
  }
  return h;
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("paired samples differ in length");
  if (a == 0) throw ConfigError("estimator needs at least one sample");
}

std::vector<int> dense_labels(const std::vector<int>& raw) {
  std::map<int, int> index;
  for (int v : raw) index.emplace(v, 0);
  if (index.size() < 2) throw ConfigError("labeler produced a single label value");
  int next = 0;
  for (auto& [v, i] : index) i = next++;
  std::vector<int> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = index[raw[i]];
  return out;
}

}  // namespace

SurrogateSampleSet draw_surrogate(int d, double sigma, std::size_t n, std::uint64_t seed) {
  if (d < 1) throw ConfigError("surrogate dimension must be >= 1");
  if (!(sigma > 0.0)) throw ConfigError("surrogate sigma must be positive");
  SurrogateSampleSet set;
  set.d = d;
  set.sigma = sigma;
  set.seed = seed;
  set.c.reserve(n);
  set.m.reserve(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> delta(static_cast<std::size_t>(d));
  while (set.c.size() < n) {
    double sq = 0.0;
    for (double& x : delta) {
      x = normal(rng);
      sq += x * x;
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0) continue;
    set.c.push_back(std::clamp(delta[0] / norm, -1.0, 1.0));
    set.m.push_back(norm / sigma);
  }
  return set;
}

int default_bin_count(std::size_t n) {
  if (n == 0) return 1;
  auto b = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
  while (b * b * b < n) ++b;
  while (b > 1 && (b - 1) * (b - 1) * (b - 1) >= n) --b;
  return static_cast<int>(std::min<std::size_t>(b, 64));
}

std::vector<int> equal_width_bins(std::span<const double> values, int bins) {
  if (bins < 1) throw ConfigError("bin count must be >= 1");
  std::vector<int> out(values.size(), 0);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (!(width > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto b = static_cast<int>(std::floor((values[i] - lo) / width * bins));
    out[i] = std::clamp(b, 0, bins - 1);
  }
  return out;
}

double plugin_entropy(std::span<const int> codes) {
  if (codes.empty()) throw ConfigError("entropy of an empty sample");
  std::map<int, std::size_t> counts;
  for (int c : codes) ++counts[c];
  return entropy_of_counts(counts, codes.size());
}

double plugin_mi(std::span<const int> x, std::span<const int> y) {
  check_lengths(x.size(), y.size());
  std::map<int, std::size_t> cx;
  std::map<int, std::size_t> cy;
  std::map<std::pair<int, int>, std::size_t> cxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++cx[x[i]];
    ++cy[y[i]];
    ++cxy[{x[i], y[i]}];
  }
  const double n = static_cast<double>(x.size());
  double mi = 0.0;
  for (const auto& [key, count] : cxy) {
    const double pxy = static_cast<double>(count) / n;
    const double px = static_cast<double>(cx[key.first]) / n;
    const double py = static_cast<double>(cy[key.second]) / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  return std::max(0.0, mi);
}

double plugin_conditional_mi(std::span<const int> x, std::span<const int> y,
                             std::span<const int> z) {
  check_lengths(x.size(), y.size());
  check_lengths(x.size(), z.size());
  std::map<int, std::size_t> cz;
  std::map<std::pair<int, int>, std::size_t> cxz;
  std::map<std::pair<int, int>, std::size_t> cyz;
  std::map<std::tuple<int, int, int>, std::size_t> cxyz;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++cz[z[i]];
    ++cxz[{x[i], z[i]}];
    ++cyz[{y[i], z[i]}];
    ++cxyz[{x[i], y[i], z[i]}];
  }
  const double n = static_cast<double>(x.size());
  double mi = 0.0;
  for (const auto& [key, count] : cxyz) {
    const auto [xi, yi, zi] = key;
    const double pxyz = static_cast<double>(count) / n;
    const double pz = static_cast<double>(cz[zi]) / n;
    const double pxz = static_cast<double>(cxz[{xi, zi}]) / n;
    const double pyz = static_cast<double>(cyz[{yi, zi}]) / n;
    mi += pxyz * std::log(pz * pxyz / (pxz * pyz));
  }
  return std::max(0.0, mi);
}

std::vector<int> pair_codes(std::span<const int> a, std::span<const int> b, int b_levels) {
  check_lengths(a.size(), b.size());
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b_levels + b[i];
  return out;
}

double binned_mi(std::span<const double> x, std::span<const double> y, int bins) {
  check_lengths(x.size(), y.size());
  const auto bx = equal_width_bins(x, bins);
  const auto by = equal_width_bins(y, bins);
  return plugin_mi(bx, by);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size());
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double calibrate_pair_epsilon(std::size_t n, int bins, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kCalibrationSalt);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = uniform(rng);
    y[i] = uniform(rng);
  }
  return 3.0 * std::abs(binned_mi(x, y, bins));
}

double calibrate_label_epsilon(std::size_t n, int bins, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kCalibrationSalt);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> c(n);
  std::vector<double> m(n);
  std::vector<int> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = uniform(rng);
    m[i] = uniform(rng);
    label[i] = coin(rng) ? 1 : 0;
  }
  const auto bc = equal_width_bins(c, bins);
  const auto bm = equal_width_bins(m, bins);
  const double worst = std::max({plugin_mi(label, bc), plugin_mi(label, bm),
                                 plugin_mi(label, pair_codes(bc, bm, bins))});
  return 3.0 * worst;
}

IndependenceReport independence_check(int d, double sigma, std::size_t n, std::uint64_t seed,
                                      double epsilon) {
  if (d < 2) throw ConfigError("independence check needs d >= 2; the direction space is trivial for d = 1");
  if (n < kMinSamples) throw ConfigError("independence check needs n >= 10000");
  const auto set = draw_surrogate(d, sigma, n, seed);
  IndependenceReport r;
  r.d = d;
  r.sigma = sigma;
  r.n = n;
  r.seed = seed;
  r.bins = default_bin_count(n);
  r.pearson_corr = pearson(set.c, set.m);
  const auto bc = equal_width_bins(set.c, r.bins);
  const auto bm = equal_width_bins(set.m, r.bins);
  r.binned_mi = plugin_mi(bc, bm);
  r.joint_vs_sum_entropy_gap =
      plugin_entropy(pair_codes(bc, bm, r.bins)) - plugin_entropy(bc) - plugin_entropy(bm);
  r.epsilon = epsilon > 0.0 ? epsilon : calibrate_pair_epsilon(n, r.bins, seed);
  r.dependent_mi = binned_mi(set.m, set.m, r.bins);
  r.pass = std::abs(r.pearson_corr) < kMaxAbsCorrelation && r.binned_mi < r.epsilon &&
           r.dependent_mi > 10.0 * r.epsilon;
  return r;
}

Labeler xor_labeler() {
  return [](std::span<const double> c, std::span<const double> m) {
    std::vector<double> sorted(m.begin(), m.end());
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double median = *mid;
    std::vector<int> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = (c[i] > 0.0) != (m[i] > median) ? 1 : 0;
    return out;
  };
}

Labeler angular_threshold_labeler() {
  return [](std::span<const double> c, std::span<const double>) {
    std::vector<int> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] > 0.0 ? 1 : 0;
    return out;
  };
}

Labeler random_labeler(std::uint64_t seed) {
  return [seed](std::span<const double> c, std::span<const double>) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<int> out(c.size());
    for (int& v : out) v = coin(rng) ? 1 : 0;
    return out;
  };
}

MiGainReport mi_gain_check(int d, std::size_t n, const Labeler& labeler, std::uint64_t seed,
                           double epsilon) {
  if (d < 2) throw ConfigError("MI gain check needs d >= 2");
  if (n < kMinSamples) throw ConfigError("MI gain check needs n >= 10000");
  const auto set = draw_surrogate(d, 1.0, n, seed);
  const auto labels = dense_labels(labeler(set.c, set.m));
  if (labels.size() != n) throw DimensionError("labeler returned the wrong number of labels");

  MiGainReport r;
  r.d = d;
  r.n = n;
  r.seed = seed;
  r.bins = default_bin_count(n);
  const auto bc = equal_width_bins(set.c, r.bins);
  const auto bm = equal_width_bins(set.m, r.bins);
  r.i_lc = plugin_mi(labels, bc);
  r.i_lm = plugin_mi(labels, bm);
  r.i_lcm = plugin_mi(labels, pair_codes(bc, bm, r.bins));
  r.i_lm_given_c = plugin_conditional_mi(labels, bm, bc);
  r.epsilon = epsilon > 0.0 ? epsilon : calibrate_label_epsilon(n, r.bins, seed);
  r.margin = r.i_lcm - std::max(r.i_lc, r.i_lm);
  r.inequality_holds = r.i_lcm >= std::max(r.i_lc, r.i_lm) - r.epsilon;
  return r;
}

}  // namespace hycal::diagnostics
