#pragma once

#include <span>
#include <vector>

namespace hycal {

// Accuracies are percentages in [0, 100].
struct SessionResult {
  // acc[t][n]: accuracy on domain n's test split after step t, for n <= t.
  // A NaN entry or a short row marks a missing value.
  std::vector<std::vector<double>> acc;
  std::vector<double> zero_shot;
  // K^t: training samples of domain t.
  std::vector<int> task_sizes;
  // Test samples of domain t; weights the pooled all-seen-classes accuracy.
  std::vector<int> test_sizes;

  std::size_t steps() const noexcept { return task_sizes.size(); }
  // Entry A_n^t, or ProtocolError when it is absent.
  double at(std::size_t step, std::size_t domain) const;
  void validate() const;
};

// w^t proportional to 1 / sqrt(K^t), normalized to sum to one.
std::vector<double> task_weights(std::span<const int> task_sizes);

double s_adapt(const SessionResult& result);
double s_last(const SessionResult& result);
// Harmonic mean of the two components, 0 when both are 0.
double s_cde(double adapt, double last);

// Accuracy over every test sample of domains 0..step, i.e. over all classes
// seen by that step.
double seen_accuracy(const SessionResult& result, std::size_t step);
// Mean over steps of seen_accuracy.
double average_acc(const SessionResult& result);
double last_acc(const SessionResult& result);
// Alternative reading of average accuracy: mean over steps of the unweighted
// mean of the per-domain accuracies available at that step.
double average_task_acc(const SessionResult& result);

struct MetricReport {
  double avg_acc = 0.0;
  double last_acc = 0.0;
  double s_adapt = 0.0;
  double s_last = 0.0;
  double s_cde = 0.0;
  double avg_task_acc = 0.0;
};

MetricReport compute_metrics(const SessionResult& result);

struct Summary {
  int runs = 0;
  double mean = 0.0;
  double sd = 0.0;    // sample standard deviation, 0 for a single run
  double ci95 = 0.0;  // 1.96 * sd / sqrt(runs)
};

Summary summarize(std::span<const double> values);

}  // namespace hycal
