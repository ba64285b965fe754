#include "hycal/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hycal/config.hpp"
#include "hycal/diagnostics.hpp"
#include "hycal/error.hpp"
#include "hycal/harness.hpp"
#include "hycal/io.hpp"
#include "hycal/report.hpp"
#include "hycal/synthetic.hpp"

namespace hycal {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  return file;
}

void finish(std::ofstream& file, const fs::path& path) {
  file.flush();
  if (!file) throw IoError("error writing '" + path.string() + "'");
}

struct SynthArgs {
  std::string spec;
  std::string out;
  std::optional<std::uint64_t> seed;
  int domains = 5;
  int dim = 16;
  int train = 60;
  int test = 20;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthConfig synth;
  if (!a.spec.empty()) {
    std::ifstream file(a.spec);
    if (!file) throw IoError("cannot open synth spec '" + a.spec + "'");
    json doc;
    try {
      file >> doc;
    } catch (const json::exception& e) {
      throw ConfigError("synth spec is not valid JSON: " + std::string(e.what()));
    }
    synth = parse_synth_config(doc, a.seed);
  } else {
    synth.domains = benchmark_domain_specs(a.domains, a.dim, a.train, a.test, a.seed.value_or(0));
  }
  const Dataset data = generate_dataset(synth.domains);
  io::write_dataset(a.out, data);
  out << "wrote " << data.registry.size() << " classes, " << data.samples.size()
      << " samples across " << synth.domains.size() << " domains to " << a.out << '\n';
  return 0;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> order_seed;
  std::string out;
  bool breakdown = false;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  RunConfig cfg = load_run_config(a.config);
  if (!a.out.empty()) cfg.output_dir = a.out;
  const std::uint64_t seed = a.seed.value_or(cfg.seeds.front());
  const auto order_seed = a.order_seed ? a.order_seed : cfg.order_seed;

  const Dataset data = io::read_dataset(cfg.dataset);
  SettingSpec setting = cfg.setting;
  setting.seed = seed;
  const TaskStream stream = sample_shots(data, setting, order_seed);

  const fs::path dir = cfg.output_dir;
  auto metrics_csv = open_output(dir / "metrics.csv");
  auto predictions = open_output(dir / "predictions.csv");
  auto curves = open_output(dir / "curves.csv");
  report::write_metrics_header(metrics_csv);
  json rows = json::array();

  bool first = true;
  for (Scorer scorer : cfg.scorers) {
    SessionConfig session = cfg.session;
    session.hybrid.scorer = scorer;
    const SessionRun run = run_session(stream, data.registry, session);
    MetricRow row{cfg.setting_name, scorer, seed, session.hybrid.alpha, session.hybrid.beta,
                  session.reg.lambda, session.reg.gamma, session.fusion,
                  compute_metrics(run.result),
                  config_hash(cfg.setting_name, scorer, session.hybrid.alpha, session.hybrid.beta,
                              session.reg.lambda, session.reg.gamma, session.fusion)};
    report::write_metrics_row(metrics_csv, row);
    rows.push_back(report::metrics_json(row));
    report::write_prediction_log(predictions, to_string(scorer), run.log, first);
    report::write_curves(curves, to_string(scorer), run.result, stream, first);
    out << to_string(scorer) << ": avg_acc " << row.metrics.avg_acc << " last_acc "
        << row.metrics.last_acc << " s_cde " << row.metrics.s_cde << '\n';

    if (first) {
      io::write_snapshot(dir / "snapshot.hyps", run.store);
      if (a.breakdown) {
        auto bd = open_output(dir / "breakdown.csv");
        write_breakdown_csv_header(bd);
        std::size_t query = 0;
        for (const auto& task : stream) {
          for (const auto& s : task.test_samples()) {
            const auto pred = classify(s.embedding, run.store, data.registry, session.hybrid,
                                       session.fusion);
            write_breakdown_csv(bd, query++, pred.breakdown);
          }
        }
        finish(bd, dir / "breakdown.csv");
      }
    }
    first = false;
  }
  finish(metrics_csv, dir / "metrics.csv");
  finish(predictions, dir / "predictions.csv");
  finish(curves, dir / "curves.csv");
  auto metrics_json = open_output(dir / "metrics.json");
  metrics_json << json{{"rows", rows}}.dump(2) << '\n';
  finish(metrics_json, dir / "metrics.json");
  return 0;
}

struct SweepArgs {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  RunConfig cfg = load_run_config(a.config);
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (!a.seeds.empty()) cfg.seeds = a.seeds;

  const Dataset data = io::read_dataset(cfg.dataset);
  const auto factory = [&](std::uint64_t seed) {
    SettingSpec setting = cfg.setting;
    setting.seed = seed;
    return SweepInput{data.registry, sample_shots(data, setting, cfg.order_seed)};
  };

  const fs::path dir = cfg.output_dir;
  auto metrics_csv = open_output(dir / "metrics.csv");
  report::write_metrics_header(metrics_csv);
  json rows = json::array();
  const auto sink = [&](const MetricRow& row) {
    report::write_metrics_row(metrics_csv, row);
    metrics_csv.flush();
    rows.push_back(report::metrics_json(row));
  };
  const auto all = run_sweep(factory, cfg.setting_name, cfg.session, cfg.sweep, cfg.seeds, sink);
  finish(metrics_csv, dir / "metrics.csv");
  auto metrics_json = open_output(dir / "metrics.json");
  metrics_json << json{{"rows", rows}}.dump(2) << '\n';
  finish(metrics_json, dir / "metrics.json");
  out << "wrote " << all.size() << " rows to " << (dir / "metrics.csv").string() << '\n';
  return 0;
}

struct DiagnoseArgs {
  std::string check = "independence";
  int d = 8;
  std::size_t n = 100000;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string labeler = "xor";
  double epsilon = 0.0;
  std::string out;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  json doc;
  if (a.check == "independence") {
    const auto r = diagnostics::independence_check(a.d, a.sigma, a.n, a.seed, a.epsilon);
    doc = {{"check", "independence"},
           {"d", r.d},
           {"sigma", r.sigma},
           {"n", r.n},
           {"seed", r.seed},
           {"bins", r.bins},
           {"pearson_corr", r.pearson_corr},
           {"binned_mi", r.binned_mi},
           {"joint_vs_sum_entropy_gap", r.joint_vs_sum_entropy_gap},
           {"epsilon", r.epsilon},
           {"dependent_mi", r.dependent_mi},
           {"max_abs_corr", diagnostics::kMaxAbsCorrelation},
           {"pass", r.pass}};
  } else {
    diagnostics::Labeler labeler;
    if (a.labeler == "xor") {
      labeler = diagnostics::xor_labeler();
    } else if (a.labeler == "angular") {
      labeler = diagnostics::angular_threshold_labeler();
    } else if (a.labeler == "random") {
      labeler = diagnostics::random_labeler(a.seed + 1);
    } else {
      throw ConfigError("unknown labeler '" + a.labeler + "' (expected xor, angular or random)");
    }
    const auto r = diagnostics::mi_gain_check(a.d, a.n, labeler, a.seed, a.epsilon);
    doc = {{"check", "mi-gain"},
           {"labeler", a.labeler},
           {"d", r.d},
           {"n", r.n},
           {"seed", r.seed},
           {"bins", r.bins},
           {"i_lc", r.i_lc},
           {"i_lm", r.i_lm},
           {"i_lcm", r.i_lcm},
           {"i_lm_given_c", r.i_lm_given_c},
           {"epsilon", r.epsilon},
           {"margin", r.margin},
           {"pass", r.inequality_holds}};
  }
  const std::string text = doc.dump(2);
  out << text << '\n';
  if (!a.out.empty()) {
    auto file = open_output(a.out);
    file << text << '\n';
    finish(file, a.out);
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<MetricRow> rows;
  for (const auto& path : a.inputs) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open metrics file '" + path + "'");
    auto part = report::read_metrics_csv(file, path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto table = report::aggregate(rows);
  report::write_aggregate_table(out, table);
  if (!a.out.empty()) {
    auto file = open_output(a.out);
    report::write_aggregate_csv(file, table);
    finish(file, a.out);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Training-free hybrid prototype calibration for incremental classification"};
  app.name("hycal");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset file");
  synth_cmd->add_option("--spec", synth.spec, "JSON synthetic dataset description");
  synth_cmd->add_option("--out", synth.out, "Output dataset path")->required();
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--domains", synth.domains, "Domains when no spec is given");
  synth_cmd->add_option("--dim", synth.dim, "Embedding dimension when no spec is given");
  synth_cmd->add_option("--train", synth.train, "Training pool per class when no spec is given");
  synth_cmd->add_option("--test", synth.test, "Test samples per class when no spec is given");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one incremental session per configured scorer");
  run_cmd->add_option("--config", run.config, "Run configuration (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Shot-sampling seed");
  run_cmd->add_option("--order-seed", run.order_seed, "Random domain order seed");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_flag("--breakdown", run.breakdown, "Write per-class score breakdown of the final step");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the configured hyperparameter grid");
  sweep_cmd->add_option("--config", sweep.config, "Run configuration (JSON)")->required();
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds (override the config)");
  sweep_cmd->add_option("--out", sweep.out, "Output directory");

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "Independence and information-gain checks");
  diag_cmd->add_option("--check", diag.check, "independence or mi-gain")
      ->check(CLI::IsMember({"independence", "mi-gain"}));
  diag_cmd->add_option("--d", diag.d, "Dimension");
  diag_cmd->add_option("--n", diag.n, "Number of samples");
  diag_cmd->add_option("--sigma", diag.sigma, "Surrogate scale");
  diag_cmd->add_option("--seed", diag.seed, "Random seed");
  diag_cmd->add_option("--labeler", diag.labeler, "xor, angular or random (mi-gain only)");
  diag_cmd->add_option("--epsilon", diag.epsilon, "Estimator tolerance; calibrated when omitted");
  diag_cmd->add_option("--out", diag.out, "Also write the JSON report here");

  ReportArgs rep;
  auto* report_cmd = app.add_subcommand("report", "Aggregate metric CSVs across seeds");
  report_cmd->add_option("inputs", rep.inputs, "Metric CSV files")->required();
  report_cmd->add_option("--out", rep.out, "Aggregate CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return 1;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
    if (diag_cmd->parsed()) return cmd_diagnose(diag, out);
    if (report_cmd->parsed()) return cmd_report(rep, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace hycal
