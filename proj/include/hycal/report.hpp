#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hycal/harness.hpp"
#include "hycal/metrics.hpp"

namespace hycal::report {

// The first eight columns are fixed: setting, scorer, seed, avg_acc,
// last_acc, s_adapt, s_last, s_cde. Configuration columns follow.
void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const MetricRow& row);
nlohmann::json metrics_json(const MetricRow& row);

void write_prediction_log(std::ostream& out, const std::string& scorer,
                          const std::vector<PredictionLogEntry>& log, bool header);
// One row per (step, evaluated domain): the data behind accuracy-per-task curves.
void write_curves(std::ostream& out, const std::string& scorer, const SessionResult& result,
                  const TaskStream& stream, bool header);

// Rows parsed back from a metrics CSV.
std::vector<MetricRow> read_metrics_csv(std::istream& in, const std::string& source);

struct AggregateRow {
  std::string setting;
  std::string scorer;
  std::string config_hash;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  std::string fusion;
  Summary avg_acc;
  Summary last_acc;
  Summary s_adapt;
  Summary s_last;
  Summary s_cde;
};

// Groups rows by (setting, scorer, config hash), in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
// Human-readable table of mean +- ci95.
void write_aggregate_table(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace hycal::report
