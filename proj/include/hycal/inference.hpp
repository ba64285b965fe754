#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hycal/error.hpp"
#include "hycal/prototype.hpp"
#include "hycal/types.hpp"

namespace hycal {

enum class Scorer { DynamicHybrid, CosineOnly, MahalanobisOnly, FixedAverage };

enum class MahaNormalization { PerQueryMinMax };

std::string to_string(Scorer scorer);
Scorer parse_scorer(const std::string& text);

struct HybridConfig {
  double alpha = 10.0;
  double beta = 5.0;
  MahaNormalization maha_normalization = MahaNormalization::PerQueryMinMax;
  Scorer scorer = Scorer::DynamicHybrid;
  // Replaces the per-class sigmoid gate of DynamicHybrid with a constant.
  // Used by the reduction checks; unset in normal operation.
  std::optional<double> forced_weight;

  void validate() const;
};

// Squared Mahalanobis distance (z - mu)^T P (z - mu).
template <typename ZDerived, typename MuDerived, typename PDerived>
typename ZDerived::Scalar mahalanobis_sq(const Eigen::MatrixBase<ZDerived>& z,
                                         const Eigen::MatrixBase<MuDerived>& mu,
                                         const Eigen::MatrixBase<PDerived>& precision) {
  using Scalar = typename ZDerived::Scalar;
  if (z.size() != mu.size() || precision.rows() != z.size() || precision.cols() != z.size()) {
    throw DimensionError("mahalanobis_sq: query of dim " + std::to_string(z.size()) +
                         " against mean of dim " + std::to_string(mu.size()) +
                         " and precision " + std::to_string(precision.rows()) + "x" +
                         std::to_string(precision.cols()));
  }
  const auto diff = (z - mu).eval();
  return std::max(Scalar(0), diff.dot(precision * diff));
}

// Cosine similarity clamped to [-1, 1].
template <typename ADerived, typename BDerived>
typename ADerived::Scalar cosine_sim(const Eigen::MatrixBase<ADerived>& a,
                                     const Eigen::MatrixBase<BDerived>& b) {
  using Scalar = typename ADerived::Scalar;
  if (a.size() != b.size()) {
    throw DimensionError("cosine_sim: dimensions " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " differ");
  }
  const Scalar na = a.stableNorm();
  const Scalar nb = b.stableNorm();
  if (na == Scalar(0) || nb == Scalar(0)) throw ZeroVectorError("cosine of a zero-norm vector");
  return std::clamp(a.dot(b) / (na * nb), Scalar(-1), Scalar(1));
}

// Sigmoid gate 1 / (1 + exp(-(k - alpha) / beta)). beta == 0 is the step
// limit: 0 below alpha, 1/2 at alpha, 1 above.
double dynamic_weight(int sample_count, double alpha, double beta);

struct ScoreRecord {
  ClassId class_id = 0;
  double cosine = 0.0;
  double maha_raw = 0.0;
  double maha_normalized = 0.0;
  double weight = 0.0;
  double score = 0.0;
};

struct ScoreBreakdown {
  std::vector<ScoreRecord> records;  // ascending class id
};

struct Prediction {
  ClassId class_id = 0;
  ScoreBreakdown breakdown;
};

// Min-max normalization over candidates; all-equal inputs map to 0.
std::vector<double> minmax_normalize(const std::vector<double>& distances);

// Scores every prototype in `store` against the class-conditional query
// built from `visual` and that class's text embedding. Ties go to the
// lowest class id.
Prediction classify(const EmbeddingVector& visual, const PrototypeStore& store,
                    const ClassRegistry& registry, const HybridConfig& cfg, FusionMode mode);

// Columns: query_id, class_id, cosine, maha_raw, maha_norm, weight, score.
void write_breakdown_csv_header(std::ostream& out);
void write_breakdown_csv(std::ostream& out, std::size_t query_id, const ScoreBreakdown& breakdown);

}  // namespace hycal
