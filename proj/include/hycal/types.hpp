#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hycal {

using ClassId = std::uint32_t;
using DomainId = std::uint16_t;
using Index = Eigen::Index;

enum class FusionMode { Sum, Concat };

enum class Split : std::uint8_t { Train = 0, Test = 1 };

std::string to_string(FusionMode mode);
FusionMode parse_fusion_mode(const std::string& text);

// Dimension of a fused vector built from two source vectors of length `source_dim`.
constexpr Index fused_dim(Index source_dim, FusionMode mode) {
  return mode == FusionMode::Concat ? 2 * source_dim : source_dim;
}

// A finite, non-empty embedding. Values are held in double precision
// regardless of the precision they were ingested at.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Index dim() const noexcept { return values_.size(); }

 private:
  Eigen::VectorXd values_;
};

class FusedEmbedding {
 public:
  FusedEmbedding(Eigen::VectorXd values, FusionMode mode, Index source_dim);

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Index dim() const noexcept { return values_.size(); }
  FusionMode mode() const noexcept { return mode_; }
  Index source_dim() const noexcept { return source_dim_; }

 private:
  Eigen::VectorXd values_;
  FusionMode mode_;
  Index source_dim_;
};

// Sum fusion adds the two vectors; concat fusion stacks visual over text.
template <typename VisualDerived, typename TextDerived>
Eigen::Matrix<typename VisualDerived::Scalar, Eigen::Dynamic, 1> fuse(
    const Eigen::MatrixBase<VisualDerived>& visual, const Eigen::MatrixBase<TextDerived>& text,
    FusionMode mode) {
  using Vector = Eigen::Matrix<typename VisualDerived::Scalar, Eigen::Dynamic, 1>;
  if (mode == FusionMode::Sum) return visual + text;
  Vector out(visual.size() + text.size());
  out << visual, text;
  return out;
}

FusedEmbedding fuse_embedding(const EmbeddingVector& visual, const EmbeddingVector& text,
                              FusionMode mode);

struct LabeledSample {
  EmbeddingVector embedding;
  ClassId class_id;
  DomainId domain_id;
  Split split;
};

struct ClassEntry {
  DomainId domain_id;
  std::string name;
  EmbeddingVector text_embedding;
};

// Global class table. Ids are assigned at ingestion and never renumbered.
class ClassRegistry {
 public:
  ClassRegistry() = default;

  void add(ClassId id, ClassEntry entry);

  bool contains(ClassId id) const { return entries_.contains(id); }
  const ClassEntry& at(ClassId id) const;
  const std::map<ClassId, ClassEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  // 0 until the first class is added.
  Index dim() const noexcept { return dim_; }

  std::vector<ClassId> classes_of(DomainId domain) const;
  std::vector<DomainId> domains() const;

 private:
  std::map<ClassId, ClassEntry> entries_;
  Index dim_ = 0;
};

struct Dataset {
  ClassRegistry registry;
  std::vector<LabeledSample> samples;
};

// One incremental step: a domain, its (new) classes and their shot counts.
class DomainTask {
 public:
  // Validates that every sample belongs to a declared class of this domain
  // and that each class has exactly shots[c] >= 1 training samples.
  DomainTask(DomainId domain_id, std::map<ClassId, int> shots, std::vector<LabeledSample> train,
             std::vector<LabeledSample> test);

  DomainId domain_id() const noexcept { return domain_id_; }
  const std::vector<ClassId>& class_ids() const noexcept { return class_ids_; }
  const std::map<ClassId, int>& shots() const noexcept { return shots_; }
  const std::vector<LabeledSample>& train_samples() const noexcept { return train_; }
  const std::vector<LabeledSample>& test_samples() const noexcept { return test_; }
  std::size_t total_shots() const noexcept { return train_.size(); }

 private:
  DomainId domain_id_;
  std::vector<ClassId> class_ids_;
  std::map<ClassId, int> shots_;
  std::vector<LabeledSample> train_;
  std::vector<LabeledSample> test_;
};

class TaskStream {
 public:
  const std::vector<DomainTask>& tasks() const noexcept { return tasks_; }
  // order()[i] is the index, in the list handed to assemble_stream, of the i-th task.
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return tasks_.size(); }
  const DomainTask& operator[](std::size_t i) const { return tasks_[i]; }
  auto begin() const { return tasks_.begin(); }
  auto end() const { return tasks_.end(); }

 private:
  friend TaskStream assemble_stream(std::vector<DomainTask>, std::span<const std::size_t>,
                                    const ClassRegistry&);
  std::vector<DomainTask> tasks_;
  std::vector<std::size_t> order_;
};

TaskStream assemble_stream(std::vector<DomainTask> tasks, std::span<const std::size_t> order,
                           const ClassRegistry& registry);

std::vector<std::size_t> identity_order(std::size_t n);
// Uniformly random permutation of 0..n-1 determined by `seed`.
std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed);

}  // namespace hycal
