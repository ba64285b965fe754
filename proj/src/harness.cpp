#include "hycal/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "hycal/error.hpp"

namespace hycal {
namespace {

std::mt19937_64 class_rng(std::uint64_t seed, ClassId id, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), stream};
  return std::mt19937_64(seq);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(SettingKind kind) {
  switch (kind) {
    case SettingKind::BalancedInClassDomain: return "BalancedInClassDomain";
    case SettingKind::CrossScaleImbalance: return "CrossScaleImbalance";
    case SettingKind::HighScaleDomainImbalance: return "HighScaleDomainImbalance";
    case SettingKind::FixedShotFSCIL: return "FixedShotFSCIL";
  }
  return "?";
}

SettingKind parse_setting_kind(const std::string& text) {
  for (SettingKind k : {SettingKind::BalancedInClassDomain, SettingKind::CrossScaleImbalance,
                        SettingKind::HighScaleDomainImbalance, SettingKind::FixedShotFSCIL}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown setting kind '" + text + "'");
}

void SettingSpec::validate() const {
  if (fixed_shots < 1) throw ConfigError("fixed_shots must be >= 1");
  if (shot_min < 1 || shot_max < shot_min) throw ConfigError("shot range must satisfy 1 <= min <= max");
  for (const auto& [domain, total] : domain_totals) {
    if (total < 1) throw ConfigError("domain total for domain " + std::to_string(domain) + " must be >= 1");
  }
}

int default_domain_total(SettingKind kind, std::size_t domain_rank, int n_classes) {
  if (kind == SettingKind::BalancedInClassDomain) return 200;
  return (domain_rank % 2 == 0 ? 5 : 20) * n_classes;
}

std::map<ClassId, int> draw_shot_counts(const ClassRegistry& registry, const SettingSpec& setting) {
  setting.validate();
  std::map<ClassId, int> shots;
  const auto domains = registry.domains();
  for (std::size_t rank = 0; rank < domains.size(); ++rank) {
    const auto classes = registry.classes_of(domains[rank]);
    const int n = static_cast<int>(classes.size());
    int per_class = 0;
    if (setting.kind == SettingKind::BalancedInClassDomain ||
        setting.kind == SettingKind::HighScaleDomainImbalance) {
      auto it = setting.domain_totals.find(domains[rank]);
      const int total = it != setting.domain_totals.end()
                            ? it->second
                            : default_domain_total(setting.kind, rank, n);
      per_class = std::max(1, static_cast<int>(std::lround(static_cast<double>(total) / n)));
    }
    for (ClassId id : classes) {
      switch (setting.kind) {
        case SettingKind::FixedShotFSCIL: shots[id] = setting.fixed_shots; break;
        case SettingKind::CrossScaleImbalance: {
          auto rng = class_rng(setting.seed, id, 0);
          shots[id] = std::uniform_int_distribution<int>(setting.shot_min, setting.shot_max)(rng);
          break;
        }
        default: shots[id] = per_class; break;
      }
    }
  }
  return shots;
}

TaskStream sample_shots(const Dataset& dataset, const SettingSpec& setting,
                        std::optional<std::uint64_t> order_seed) {
  const auto shots = draw_shot_counts(dataset.registry, setting);

  std::map<ClassId, std::vector<std::size_t>> train_pool;
  std::map<ClassId, std::vector<std::size_t>> test_pool;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const auto& s = dataset.samples[i];
    if (!dataset.registry.contains(s.class_id)) {
      throw ProtocolError("sample " + std::to_string(i) + " has unregistered class " +
                          std::to_string(s.class_id));
    }
    (s.split == Split::Train ? train_pool : test_pool)[s.class_id].push_back(i);
  }

  std::vector<DomainTask> tasks;
  for (DomainId domain : dataset.registry.domains()) {
    std::map<ClassId, int> task_shots;
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
    for (ClassId id : dataset.registry.classes_of(domain)) {
      const int k = shots.at(id);
      auto pool = train_pool[id];
      if (static_cast<int>(pool.size()) < k) {
        throw DataError("class " + std::to_string(id) + " ('" + dataset.registry.at(id).name +
                        "') has " + std::to_string(pool.size()) +
                        " training samples; the setting requests " + std::to_string(k));
      }
      auto rng = class_rng(setting.seed, id, 1);
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(static_cast<std::size_t>(k));
      std::sort(pool.begin(), pool.end());
      for (std::size_t idx : pool) train.push_back(dataset.samples[idx]);
      for (std::size_t idx : test_pool[id]) test.push_back(dataset.samples[idx]);
      task_shots[id] = k;
    }
    tasks.emplace_back(domain, std::move(task_shots), std::move(train), std::move(test));
  }
  const auto n = tasks.size();
  const auto order = order_seed ? seeded_order(n, *order_seed) : identity_order(n);
  return assemble_stream(std::move(tasks), order, dataset.registry);
}

double zero_shot_accuracy(const DomainTask& task, const ClassRegistry& registry) {
  const auto& tests = task.test_samples();
  if (tests.empty()) {
    throw ProtocolError("domain " + std::to_string(task.domain_id()) + " has no test samples");
  }
  std::size_t correct = 0;
  for (const auto& s : tests) {
    ClassId best = task.class_ids().front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (ClassId id : task.class_ids()) {
      const double score = cosine_sim(s.embedding.values(), registry.at(id).text_embedding.values());
      if (score > best_score) {
        best_score = score;
        best = id;
      }
    }
    if (best == s.class_id) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(tests.size());
}

SessionRun run_session(const TaskStream& stream, const ClassRegistry& registry,
                       const SessionConfig& cfg) {
  cfg.hybrid.validate();
  cfg.reg.validate();
  const std::size_t steps = stream.size();
  if (steps == 0) throw ProtocolError("cannot run a session over an empty stream");
  if (!cfg.zero_shot.empty() && cfg.zero_shot.size() != steps) {
    throw ConfigError("external zero-shot vector has " + std::to_string(cfg.zero_shot.size()) +
                      " entries for " + std::to_string(steps) + " tasks");
  }

  SessionRun run;
  auto& result = run.result;
  result.acc.resize(steps);
  for (const auto& task : stream) {
    result.task_sizes.push_back(static_cast<int>(task.total_shots()));
    result.test_sizes.push_back(static_cast<int>(task.test_samples().size()));
  }
  run.train_access.resize(steps);
  run.candidate_classes.resize(steps);

  for (std::size_t t = 0; t < steps; ++t) {
    const DomainTask& current = stream[t];
    result.zero_shot.push_back(cfg.zero_shot.empty() ? zero_shot_accuracy(current, registry)
                                                     : cfg.zero_shot[t]);

    run.train_access[t].push_back(t);
    run.store = ingest_task(std::move(run.store), current, registry, cfg.fusion, cfg.reg);
    for (const auto& [id, proto] : run.store.prototypes()) run.candidate_classes[t].push_back(id);

    for (std::size_t n = 0; n <= t; ++n) {
      const auto& tests = stream[n].test_samples();
      if (tests.empty()) {
        throw ProtocolError("domain " + std::to_string(stream[n].domain_id()) +
                            " has no test samples");
      }
      std::size_t correct = 0;
      for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto pred = classify(tests[i].embedding, run.store, registry, cfg.hybrid, cfg.fusion);
        if (pred.class_id == tests[i].class_id) ++correct;
        run.log.push_back({t, n, stream[n].domain_id(), i, tests[i].class_id, pred.class_id});
      }
      result.acc[t].push_back(100.0 * static_cast<double>(correct) /
                              static_cast<double>(tests.size()));
    }
  }
  return run;
}

SweepSpec SweepSpec::default_grid() {
  SweepSpec s;
  s.alpha_grid = {1, 10, 20, 40, 60, 80};
  s.beta_grid = {0, 5, 10};
  s.lambda_grid = {1e-4};
  s.gamma_grid = {1.0};
  return s;
}

void SweepSpec::validate() const {
  if (alpha_grid.empty() || beta_grid.empty() || lambda_grid.empty() || gamma_grid.empty() ||
      scorers.empty()) {
    throw ConfigError("sweep grids and scorer list must be non-empty");
  }
}

std::string config_hash(const std::string& setting, Scorer scorer, double alpha, double beta,
                        double lambda, double gamma, FusionMode fusion) {
  const std::string key = setting + '|' + to_string(scorer) + '|' + format_double(alpha) + '|' +
                          format_double(beta) + '|' + format_double(lambda) + '|' +
                          format_double(gamma) + '|' + to_string(fusion);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<MetricRow> run_sweep(const StreamFactory& factory, const std::string& setting,
                                 const SessionConfig& base, const SweepSpec& sweep,
                                 const std::vector<std::uint64_t>& seeds, const RowSink& sink) {
  sweep.validate();
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  std::vector<MetricRow> rows;
  for (std::uint64_t seed : seeds) {
    const SweepInput input = factory(seed);
    for (Scorer scorer : sweep.scorers) {
      for (double alpha : sweep.alpha_grid) {
        for (double beta : sweep.beta_grid) {
          for (double lambda : sweep.lambda_grid) {
            for (double gamma : sweep.gamma_grid) {
              SessionConfig cfg = base;
              cfg.hybrid.scorer = scorer;
              cfg.hybrid.alpha = alpha;
              cfg.hybrid.beta = beta;
              cfg.reg.lambda = lambda;
              cfg.reg.gamma = gamma;
              const auto run = run_session(input.stream, input.registry, cfg);
              MetricRow row{setting, scorer, seed, alpha, beta, lambda, gamma, cfg.fusion,
                            compute_metrics(run.result),
                            config_hash(setting, scorer, alpha, beta, lambda, gamma, cfg.fusion)};
              if (sink) sink(row);
              rows.push_back(std::move(row));
            }
          }
        }
      }
    }
  }
  return rows;
}

}  // namespace hycal
