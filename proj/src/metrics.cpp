#include "hycal/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hycal/error.hpp"

namespace hycal {

double SessionResult::at(std::size_t step, std::size_t domain) const {
  if (domain > step || step >= acc.size() || domain >= acc[step].size() ||
      std::isnan(acc[step][domain])) {
    throw ProtocolError("accuracy of domain " + std::to_string(domain + 1) + " after step " +
                        std::to_string(step + 1) + " is missing");
  }
  return acc[step][domain];
}

void SessionResult::validate() const {
  const auto in_range = [](double v) { return std::isnan(v) || (v >= 0.0 && v <= 100.0); };
  if (acc.size() > steps()) throw ProtocolError("more accuracy rows than tasks");
  for (std::size_t t = 0; t < acc.size(); ++t) {
    if (acc[t].size() > t + 1) {
      throw ProtocolError("accuracy row " + std::to_string(t + 1) + " has entries for unseen domains");
    }
    for (double v : acc[t]) {
      if (!in_range(v)) throw ProtocolError("accuracy outside [0, 100]: " + std::to_string(v));
    }
  }
  for (double z : zero_shot) {
    if (!in_range(z)) throw ProtocolError("zero-shot accuracy outside [0, 100]: " + std::to_string(z));
  }
}

std::vector<double> task_weights(std::span<const int> task_sizes) {
  if (task_sizes.empty()) throw ConfigError("task weights need at least one task");
  std::vector<double> w;
  w.reserve(task_sizes.size());
  for (int k : task_sizes) {
    if (k < 1) throw ConfigError("task size must be >= 1, got " + std::to_string(k));
    w.push_back(1.0 / std::sqrt(static_cast<double>(k)));
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

double s_adapt(const SessionResult& result) {
  result.validate();
  const auto w = task_weights(result.task_sizes);
  if (result.zero_shot.size() != result.steps()) {
    throw ProtocolError("zero-shot accuracy missing for some task");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < result.steps(); ++t) {
    if (std::isnan(result.zero_shot[t])) {
      throw ProtocolError("zero-shot accuracy of task " + std::to_string(t + 1) + " is missing");
    }
    sum += w[t] * (result.zero_shot[t] + result.at(t, t)) / 2.0;
  }
  return sum;
}

double s_last(const SessionResult& result) {
  result.validate();
  const auto w = task_weights(result.task_sizes);
  const std::size_t last = result.steps() - 1;
  double sum = 0.0;
  for (std::size_t n = 0; n < result.steps(); ++n) sum += w[n] * result.at(last, n);
  return sum;
}

double s_cde(double adapt, double last) {
  if (adapt < 0.0 || last < 0.0) {
    throw ConfigError("S_CDE components must be non-negative");
  }
  const double denom = adapt + last;
  if (denom == 0.0) return 0.0;
  return 2.0 * adapt * last / denom;
}

double seen_accuracy(const SessionResult& result, std::size_t step) {
  if (result.test_sizes.size() != result.steps()) {
    throw ProtocolError("test sizes are required for seen-class accuracy");
  }
  double correct = 0.0;
  double total = 0.0;
  for (std::size_t n = 0; n <= step; ++n) {
    const double size = result.test_sizes[n];
    correct += result.at(step, n) * size;
    total += size;
  }
  if (total <= 0.0) throw ProtocolError("no test samples seen by step " + std::to_string(step + 1));
  return correct / total;
}

double average_acc(const SessionResult& result) {
  result.validate();
  if (result.steps() == 0) throw ProtocolError("session has no steps");
  double sum = 0.0;
  for (std::size_t t = 0; t < result.steps(); ++t) sum += seen_accuracy(result, t);
  return sum / static_cast<double>(result.steps());
}

double last_acc(const SessionResult& result) {
  result.validate();
  if (result.steps() == 0) throw ProtocolError("session has no steps");
  return seen_accuracy(result, result.steps() - 1);
}

double average_task_acc(const SessionResult& result) {
  result.validate();
  if (result.steps() == 0) throw ProtocolError("session has no steps");
  double sum = 0.0;
  for (std::size_t t = 0; t < result.steps(); ++t) {
    double row = 0.0;
    for (std::size_t n = 0; n <= t; ++n) row += result.at(t, n);
    sum += row / static_cast<double>(t + 1);
  }
  return sum / static_cast<double>(result.steps());
}

MetricReport compute_metrics(const SessionResult& result) {
  MetricReport m;
  m.avg_acc = average_acc(result);
  m.last_acc = last_acc(result);
  m.s_adapt = s_adapt(result);
  m.s_last = s_last(result);
  m.s_cde = s_cde(m.s_adapt, m.s_last);
  m.avg_task_acc = average_task_acc(result);
  return m;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.runs = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.runs);
  if (s.runs > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.runs - 1));
    s.ci95 = 1.96 * s.sd / std::sqrt(static_cast<double>(s.runs));
  }
  return s;
}

}  // namespace hycal
