#include "hycal/inference.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

namespace hycal {

std::string to_string(Scorer scorer) {
  switch (scorer) {
    case Scorer::DynamicHybrid: return "DynamicHybrid";
    case Scorer::CosineOnly: return "CosineOnly";
    case Scorer::MahalanobisOnly: return "MahalanobisOnly";
    case Scorer::FixedAverage: return "FixedAverage";
  }
  return "?";
}

Scorer parse_scorer(const std::string& text) {
  for (Scorer s : {Scorer::DynamicHybrid, Scorer::CosineOnly, Scorer::MahalanobisOnly,
                   Scorer::FixedAverage}) {
    if (text == to_string(s)) return s;
  }
  throw ConfigError("unknown scorer '" + text +
                    "' (expected DynamicHybrid, CosineOnly, MahalanobisOnly or FixedAverage)");
}

void HybridConfig::validate() const {
  if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be non-negative, got " + std::to_string(beta));
  }
  if (forced_weight && !(*forced_weight >= 0.0 && *forced_weight <= 1.0)) {
    throw ConfigError("forced weight must lie in [0, 1]");
  }
}

double dynamic_weight(int sample_count, double alpha, double beta) {
  if (sample_count < 1) throw ConfigError("sample count must be >= 1");
  if (beta < 0.0) throw ConfigError("beta must be non-negative");
  const double k = static_cast<double>(sample_count);
  if (beta == 0.0) {
    if (k < alpha) return 0.0;
    if (k > alpha) return 1.0;
    return 0.5;
  }
  return 1.0 / (1.0 + std::exp(-(k - alpha) / beta));
}

std::vector<double> minmax_normalize(const std::vector<double>& distances) {
  std::vector<double> out(distances.size(), 0.0);
  if (distances.empty()) return out;
  const auto [lo, hi] = std::minmax_element(distances.begin(), distances.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    out[i] = std::clamp((distances[i] - *lo) / range, 0.0, 1.0);
  }
  return out;
}

Prediction classify(const EmbeddingVector& visual, const PrototypeStore& store,
                    const ClassRegistry& registry, const HybridConfig& cfg, FusionMode mode) {
  cfg.validate();
  if (store.empty()) throw ProtocolError("cannot classify against an empty prototype store");

  Prediction pred;
  auto& records = pred.breakdown.records;
  records.reserve(store.size());
  std::vector<double> raw;
  raw.reserve(store.size());
  for (const auto& [id, proto] : store.prototypes()) {
    const auto& text = registry.at(id).text_embedding;
    if (text.dim() != visual.dim()) {
      throw DimensionError("query dim " + std::to_string(visual.dim()) +
                           " differs from text embedding dim " + std::to_string(text.dim()));
    }
    const Eigen::VectorXd query = fuse(visual.values(), text.values(), mode);
    ScoreRecord rec;
    rec.class_id = id;
    rec.cosine = cosine_sim(query, proto.mu);
    rec.maha_raw = mahalanobis_sq(query, proto.mu, proto.precision);
    raw.push_back(rec.maha_raw);
    records.push_back(rec);
  }

  const auto normalized = minmax_normalize(raw);
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    rec.maha_normalized = normalized[i];
    const double maha_similarity = 1.0 - rec.maha_normalized;
    switch (cfg.scorer) {
      case Scorer::DynamicHybrid:
        rec.weight = cfg.forced_weight
                         ? *cfg.forced_weight
                         : dynamic_weight(store.at(rec.class_id).sample_count, cfg.alpha, cfg.beta);
        break;
      case Scorer::FixedAverage: rec.weight = 0.5; break;
      case Scorer::CosineOnly: rec.weight = 0.0; break;
      case Scorer::MahalanobisOnly: rec.weight = 1.0; break;
    }
    rec.score = rec.weight * maha_similarity + (1.0 - rec.weight) * rec.cosine;
  }

  std::size_t best = 0;
  if (cfg.scorer == Scorer::MahalanobisOnly) {
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].maha_raw < records[best].maha_raw) best = i;
    }
  } else if (cfg.scorer == Scorer::CosineOnly) {
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].cosine > records[best].cosine) best = i;
    }
  } else {
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].score > records[best].score) best = i;
    }
  }
  pred.class_id = records[best].class_id;
  return pred;
}

void write_breakdown_csv_header(std::ostream& out) {
  out << "query_id,class_id,cosine,maha_raw,maha_norm,weight,score\n";
}

void write_breakdown_csv(std::ostream& out, std::size_t query_id, const ScoreBreakdown& breakdown) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : breakdown.records) {
    out << query_id << ',' << r.class_id << ',' << r.cosine << ',' << r.maha_raw << ','
        << r.maha_normalized << ',' << r.weight << ',' << r.score << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace hycal
