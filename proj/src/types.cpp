#include "hycal/types.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "hycal/error.hpp"

namespace hycal {

std::string to_string(FusionMode mode) { return mode == FusionMode::Sum ? "sum" : "concat"; }

FusionMode parse_fusion_mode(const std::string& text) {
  if (text == "sum" || text == "Sum") return FusionMode::Sum;
  if (text == "concat" || text == "Concat") return FusionMode::Concat;
  throw ConfigError("unknown fusion mode '" + text + "' (expected sum or concat)");
}

EmbeddingVector::EmbeddingVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 1) throw DimensionError("embedding must have dimension >= 1");
  if (!values_.allFinite()) throw DataError("embedding contains a non-finite entry");
}

FusedEmbedding::FusedEmbedding(Eigen::VectorXd values, FusionMode mode, Index source_dim)
    : values_(std::move(values)), mode_(mode), source_dim_(source_dim) {
  if (source_dim_ < 1 || values_.size() != fused_dim(source_dim_, mode_)) {
    throw DimensionError("fused embedding of length " + std::to_string(values_.size()) +
                         " inconsistent with source dimension " + std::to_string(source_dim_) +
                         " under " + to_string(mode_) + " fusion");
  }
  if (!values_.allFinite()) throw DataError("fused embedding contains a non-finite entry");
}

FusedEmbedding fuse_embedding(const EmbeddingVector& visual, const EmbeddingVector& text,
                              FusionMode mode) {
  if (visual.dim() != text.dim()) {
    throw DimensionError("cannot fuse visual dim " + std::to_string(visual.dim()) +
                         " with text dim " + std::to_string(text.dim()));
  }
  return FusedEmbedding(fuse(visual.values(), text.values(), mode), mode, visual.dim());
}

void ClassRegistry::add(ClassId id, ClassEntry entry) {
  if (entries_.contains(id)) {
    throw IntegrityError("class id " + std::to_string(id) + " registered twice");
  }
  if (dim_ != 0 && entry.text_embedding.dim() != dim_) {
    throw DimensionError("text embedding of class " + std::to_string(id) + " has dim " +
                         std::to_string(entry.text_embedding.dim()) + ", registry uses " +
                         std::to_string(dim_));
  }
  dim_ = entry.text_embedding.dim();
  entries_.emplace(id, std::move(entry));
}

const ClassEntry& ClassRegistry::at(ClassId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw ProtocolError("class id " + std::to_string(id) + " is not in the class registry");
  }
  return it->second;
}

std::vector<ClassId> ClassRegistry::classes_of(DomainId domain) const {
  std::vector<ClassId> out;
  for (const auto& [id, entry] : entries_) {
    if (entry.domain_id == domain) out.push_back(id);
  }
  return out;
}

std::vector<DomainId> ClassRegistry::domains() const {
  std::set<DomainId> ids;
  for (const auto& [id, entry] : entries_) ids.insert(entry.domain_id);
  return {ids.begin(), ids.end()};
}

DomainTask::DomainTask(DomainId domain_id, std::map<ClassId, int> shots,
                       std::vector<LabeledSample> train, std::vector<LabeledSample> test)
    : domain_id_(domain_id), shots_(std::move(shots)), train_(std::move(train)),
      test_(std::move(test)) {
  if (shots_.empty()) throw ProtocolError("domain task declares no classes");
  std::map<ClassId, int> seen;
  for (const auto& [id, k] : shots_) {
    if (k < 1) {
      throw ProtocolError("class " + std::to_string(id) + " declares " + std::to_string(k) +
                          " shots; at least 1 is required");
    }
    class_ids_.push_back(id);
    seen[id] = 0;
  }
  auto check = [&](const LabeledSample& s, Split expected) {
    if (!shots_.contains(s.class_id)) {
      throw ProtocolError("sample of class " + std::to_string(s.class_id) +
                          " is not declared by domain task " + std::to_string(domain_id_));
    }
    if (s.domain_id != domain_id_) {
      throw ProtocolError("sample of class " + std::to_string(s.class_id) + " carries domain " +
                          std::to_string(s.domain_id) + " inside task for domain " +
                          std::to_string(domain_id_));
    }
    if (s.split != expected) throw ProtocolError("sample placed in the wrong split");
  };
  for (const auto& s : train_) {
    check(s, Split::Train);
    ++seen[s.class_id];
  }
  for (const auto& s : test_) check(s, Split::Test);
  for (const auto& [id, k] : shots_) {
    if (seen[id] != k) {
      throw ProtocolError("class " + std::to_string(id) + " declares K=" + std::to_string(k) +
                          " but has " + std::to_string(seen[id]) + " training samples");
    }
  }
}

TaskStream assemble_stream(std::vector<DomainTask> tasks, std::span<const std::size_t> order,
                           const ClassRegistry& registry) {
  if (order.size() != tasks.size()) {
    throw ConfigError("order has " + std::to_string(order.size()) + " entries for " +
                      std::to_string(tasks.size()) + " tasks");
  }
  std::vector<bool> used(tasks.size(), false);
  for (std::size_t idx : order) {
    if (idx >= tasks.size() || used[idx]) {
      throw ConfigError("order is not a permutation of the task indices");
    }
    used[idx] = true;
  }

  std::set<ClassId> all_classes;
  for (const auto& task : tasks) {
    for (ClassId id : task.class_ids()) {
      if (!all_classes.insert(id).second) {
        throw ProtocolError("class id " + std::to_string(id) + " appears in more than one task");
      }
      if (!registry.contains(id)) {
        throw ProtocolError("class id " + std::to_string(id) + " is not in the class registry");
      }
      if (registry.at(id).domain_id != task.domain_id()) {
        throw ProtocolError("class id " + std::to_string(id) + " is registered to domain " +
                            std::to_string(registry.at(id).domain_id) + ", not " +
                            std::to_string(task.domain_id()));
      }
    }
    for (const auto* samples : {&task.train_samples(), &task.test_samples()}) {
      for (const auto& s : *samples) {
        if (s.embedding.dim() != registry.dim()) {
          throw DimensionError("sample dimension " + std::to_string(s.embedding.dim()) +
                               " differs from registry dimension " +
                               std::to_string(registry.dim()));
        }
      }
    }
  }

  TaskStream stream;
  stream.order_.assign(order.begin(), order.end());
  stream.tasks_.reserve(tasks.size());
  for (std::size_t idx : order) stream.tasks_.push_back(std::move(tasks[idx]));
  return stream;
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed) {
  auto order = identity_order(n);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace hycal
