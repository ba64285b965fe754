#include "hycal/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "hycal/error.hpp"

namespace hycal::report {
namespace {

const std::vector<std::string> kMetricColumns = {
    "setting", "scorer", "seed",  "avg_acc", "last_acc", "s_adapt", "s_last",     "s_cde",
    "avg_task_acc", "alpha", "beta", "lambda", "gamma", "fusion", "config_hash"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": '" + text + "' is not a number");
  }
}

}  // namespace

void write_metrics_header(std::ostream& out) {
  for (std::size_t i = 0; i < kMetricColumns.size(); ++i) {
    out << (i ? "," : "") << kMetricColumns[i];
  }
  out << '\n';
}

void write_metrics_row(std::ostream& out, const MetricRow& row) {
  const auto& m = row.metrics;
  out << row.setting << ',' << to_string(row.scorer) << ',' << row.seed << ',' << num(m.avg_acc)
      << ',' << num(m.last_acc) << ',' << num(m.s_adapt) << ',' << num(m.s_last) << ','
      << num(m.s_cde) << ',' << num(m.avg_task_acc) << ',' << num(row.alpha) << ','
      << num(row.beta) << ',' << num(row.lambda) << ',' << num(row.gamma) << ','
      << to_string(row.fusion) << ',' << row.config_hash << '\n';
}

nlohmann::json metrics_json(const MetricRow& row) {
  const auto& m = row.metrics;
  return {{"setting", row.setting},   {"scorer", to_string(row.scorer)},
          {"seed", row.seed},         {"avg_acc", m.avg_acc},
          {"last_acc", m.last_acc},   {"s_adapt", m.s_adapt},
          {"s_last", m.s_last},       {"s_cde", m.s_cde},
          {"avg_task_acc", m.avg_task_acc},
          {"alpha", row.alpha},       {"beta", row.beta},
          {"lambda", row.lambda},     {"gamma", row.gamma},
          {"fusion", to_string(row.fusion)},
          {"config_hash", row.config_hash}};
}

void write_prediction_log(std::ostream& out, const std::string& scorer,
                          const std::vector<PredictionLogEntry>& log, bool header) {
  if (header) out << "scorer,step,task_index,domain_id,sample_index,true_class,predicted_class\n";
  for (const auto& e : log) {
    out << scorer << ',' << e.step + 1 << ',' << e.task_index + 1 << ',' << e.domain_id << ','
        << e.sample_index << ',' << e.true_class << ',' << e.predicted_class << '\n';
  }
}

void write_curves(std::ostream& out, const std::string& scorer, const SessionResult& result,
                  const TaskStream& stream, bool header) {
  if (header) out << "scorer,step,task_index,domain_id,accuracy,seen_accuracy,zero_shot\n";
  for (std::size_t t = 0; t < result.steps(); ++t) {
    const double seen = seen_accuracy(result, t);
    for (std::size_t n = 0; n <= t; ++n) {
      out << scorer << ',' << t + 1 << ',' << n + 1 << ',' << stream[n].domain_id() << ','
          << num(result.at(t, n)) << ',' << num(seen) << ',' << num(result.zero_shot[n]) << '\n';
    }
  }
}

std::vector<MetricRow> read_metrics_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(source + ": empty metrics file");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : kMetricColumns) {
    if (!col.contains(name)) throw ConfigError(source + ": missing column '" + name + "'");
  }

  std::vector<MetricRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (f.size() != header.size()) throw ConfigError(where + ": wrong number of fields");
    auto get = [&](const char* name) { return parse_number(f[col.at(name)], where); };
    MetricRow row;
    row.setting = f[col.at("setting")];
    row.scorer = parse_scorer(f[col.at("scorer")]);
    row.seed = static_cast<std::uint64_t>(get("seed"));
    row.metrics.avg_acc = get("avg_acc");
    row.metrics.last_acc = get("last_acc");
    row.metrics.s_adapt = get("s_adapt");
    row.metrics.s_last = get("s_last");
    row.metrics.s_cde = get("s_cde");
    row.metrics.avg_task_acc = get("avg_task_acc");
    row.alpha = get("alpha");
    row.beta = get("beta");
    row.lambda = get("lambda");
    row.gamma = get("gamma");
    row.fusion = parse_fusion_mode(f[col.at("fusion")]);
    row.config_hash = f[col.at("config_hash")];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& rows) {
  std::vector<std::string> keys;
  std::map<std::string, std::vector<const MetricRow*>> groups;
  for (const auto& r : rows) {
    const std::string key = r.setting + '\x1f' + to_string(r.scorer) + '\x1f' + r.config_hash;
    if (!groups.contains(key)) keys.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<AggregateRow> out;
  for (const auto& key : keys) {
    const auto& members = groups[key];
    const MetricRow& first = *members.front();
    AggregateRow agg;
    agg.setting = first.setting;
    agg.scorer = to_string(first.scorer);
    agg.config_hash = first.config_hash;
    agg.alpha = first.alpha;
    agg.beta = first.beta;
    agg.lambda = first.lambda;
    agg.gamma = first.gamma;
    agg.fusion = to_string(first.fusion);
    auto collect = [&](auto field) {
      std::vector<double> values;
      for (const auto* r : members) values.push_back(r->metrics.*field);
      return summarize(values);
    };
    agg.avg_acc = collect(&MetricReport::avg_acc);
    agg.last_acc = collect(&MetricReport::last_acc);
    agg.s_adapt = collect(&MetricReport::s_adapt);
    agg.s_last = collect(&MetricReport::s_last);
    agg.s_cde = collect(&MetricReport::s_cde);
    out.push_back(std::move(agg));
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "setting,scorer,config_hash,alpha,beta,lambda,gamma,fusion,runs";
  for (const char* m : {"avg_acc", "last_acc", "s_adapt", "s_last", "s_cde"}) {
    out << ',' << m << "_mean," << m << "_sd," << m << "_ci95";
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.setting << ',' << r.scorer << ',' << r.config_hash << ',' << num(r.alpha) << ','
        << num(r.beta) << ',' << num(r.lambda) << ',' << num(r.gamma) << ',' << r.fusion << ','
        << r.avg_acc.runs;
    for (const Summary* s : {&r.avg_acc, &r.last_acc, &r.s_adapt, &r.s_last, &r.s_cde}) {
      out << ',' << num(s->mean) << ',' << num(s->sd) << ',' << num(s->ci95);
    }
    out << '\n';
  }
}

void write_aggregate_table(std::ostream& out, const std::vector<AggregateRow>& rows) {
  auto cell = [](const Summary& s) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%6.2f +- %5.2f", s.mean, s.ci95);
    return std::string(buf);
  };
  out << std::left << std::setw(26) << "setting" << std::setw(17) << "scorer" << std::setw(8)
      << "alpha" << std::setw(6) << "beta" << std::setw(5) << "runs" << std::setw(17)
      << "avg_acc" << std::setw(17) << "last_acc" << "s_cde\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(26) << r.setting << std::setw(17) << r.scorer << std::setw(8)
        << r.alpha << std::setw(6) << r.beta << std::setw(5) << r.avg_acc.runs << std::setw(17)
        << cell(r.avg_acc) << std::setw(17) << cell(r.last_acc) << cell(r.s_cde) << '\n';
  }
}

}  // namespace hycal::report
