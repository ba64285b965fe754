#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hycal/inference.hpp"
#include "hycal/metrics.hpp"
#include "hycal/prototype.hpp"
#include "hycal/types.hpp"

namespace hycal {

enum class SettingKind { BalancedInClassDomain, CrossScaleImbalance, HighScaleDomainImbalance, FixedShotFSCIL };

std::string to_string(SettingKind kind);
SettingKind parse_setting_kind(const std::string& text);

struct SettingSpec {
  SettingKind kind = SettingKind::FixedShotFSCIL;
  // FixedShotFSCIL: shots for every class.
  int fixed_shots = 5;
  // CrossScaleImbalance: K_c uniform on [shot_min, shot_max].
  int shot_min = 5;
  int shot_max = 50;
  // BalancedInClassDomain / HighScaleDomainImbalance: training total per
  // domain, split uniformly over that domain's classes. Domains missing
  // here fall back to the built-in approximate profile (see
  // default_domain_total).
  std::map<DomainId, int> domain_totals;
  std::uint64_t seed = 0;

  void validate() const;
};

// Approximate per-domain totals used when a setting does not list one.
// Balanced: 200 samples per domain. High-scale: alternating 5 and 20 shots
// per class by domain rank.
int default_domain_total(SettingKind kind, std::size_t domain_rank, int n_classes);

// Per-class shot counts for every class of the dataset under `setting`.
std::map<ClassId, int> draw_shot_counts(const ClassRegistry& registry, const SettingSpec& setting);

// Draws the training subset of every class and builds the stream. Domain
// order is ascending domain id unless `order_seed` selects a random
// permutation. Sampling depends only on (seed, class id), so the same class
// receives the same shots under every domain order.
TaskStream sample_shots(const Dataset& dataset, const SettingSpec& setting,
                        std::optional<std::uint64_t> order_seed = std::nullopt);

struct SessionConfig {
  HybridConfig hybrid;
  RegularizationConfig reg;
  FusionMode fusion = FusionMode::Sum;
  // Externally supplied zero-shot accuracies, one per task in stream order.
  // When empty, a cosine text-anchor classifier over the registry is used.
  std::vector<double> zero_shot;
};

struct PredictionLogEntry {
  std::size_t step = 0;          // 0-based
  std::size_t task_index = 0;    // position of the evaluated domain in the stream
  DomainId domain_id = 0;
  std::size_t sample_index = 0;  // within that domain's test split
  ClassId true_class = 0;
  ClassId predicted_class = 0;
};

struct SessionRun {
  SessionResult result;
  std::vector<PredictionLogEntry> log;
  // train_access[t] lists the task indices whose training samples were read
  // during step t.
  std::vector<std::vector<std::size_t>> train_access;
  // candidate_classes[t]: classes scored at step t.
  std::vector<std::vector<ClassId>> candidate_classes;
  PrototypeStore store;
};

// Accuracy (percent) of nearest-text-anchor cosine classification of the
// task's test split, restricted to that task's classes.
double zero_shot_accuracy(const DomainTask& task, const ClassRegistry& registry);

SessionRun run_session(const TaskStream& stream, const ClassRegistry& registry,
                       const SessionConfig& cfg);

struct SweepSpec {
  std::vector<double> alpha_grid{10.0};
  std::vector<double> beta_grid{5.0};
  std::vector<double> lambda_grid{1e-4};
  std::vector<double> gamma_grid{1.0};
  std::vector<Scorer> scorers{Scorer::DynamicHybrid};

  // alpha in {1,10,20,40,60,80}, beta in {0,5,10}, lambda 1e-4, gamma 1.
  static SweepSpec default_grid();
  void validate() const;
};

struct MetricRow {
  std::string setting;
  Scorer scorer = Scorer::DynamicHybrid;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  FusionMode fusion = FusionMode::Sum;
  MetricReport metrics;
  std::string config_hash;
};

// FNV-1a hash (hex) of everything that defines a configuration except the
// seed, so rows of one configuration group across seeds.
std::string config_hash(const std::string& setting, Scorer scorer, double alpha, double beta,
                        double lambda, double gamma, FusionMode fusion);

struct SweepInput {
  ClassRegistry registry;
  TaskStream stream;
};

using StreamFactory = std::function<SweepInput(std::uint64_t seed)>;
using RowSink = std::function<void(const MetricRow&)>;

// Runs the cross product seeds x scorers x alpha x beta x lambda x gamma.
// Each row is passed to `sink` as soon as it is computed.
std::vector<MetricRow> run_sweep(const StreamFactory& factory, const std::string& setting,
                                 const SessionConfig& base, const SweepSpec& sweep,
                                 const std::vector<std::uint64_t>& seeds,
                                 const RowSink& sink = {});

}  // namespace hycal
