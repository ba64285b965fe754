#include "hycal/prototype.hpp"

#include <cmath>

namespace hycal {

void RegularizationConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must be positive, got " + std::to_string(gamma));
  }
}

ClassPrototype learn_prototype(std::span<const FusedEmbedding> samples, ClassId class_id,
                               const RegularizationConfig& reg) {
  if (samples.empty()) {
    throw ProtocolError("class " + std::to_string(class_id) + " has no training samples");
  }
  const Index d = samples.front().dim();
  Eigen::MatrixXd columns(d, static_cast<Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].dim() != d) {
      throw DimensionError("training samples of class " + std::to_string(class_id) +
                           " disagree on dimension");
    }
    columns.col(static_cast<Index>(i)) = samples[i].values();
  }
  return learn_prototype(columns, class_id, reg);
}

void PrototypeStore::insert(ClassPrototype proto) {
  if (prototypes_.contains(proto.class_id)) {
    throw ProtocolError("class " + std::to_string(proto.class_id) + " already has a prototype");
  }
  if (dim_ != 0 && proto.dim() != dim_) {
    throw DimensionError("prototype dimension " + std::to_string(proto.dim()) +
                         " differs from store dimension " + std::to_string(dim_));
  }
  dim_ = proto.dim();
  learned_order_.push_back(proto.class_id);
  const ClassId id = proto.class_id;
  prototypes_.emplace(id, std::move(proto));
}

const ClassPrototype& PrototypeStore::at(ClassId id) const {
  auto it = prototypes_.find(id);
  if (it == prototypes_.end()) {
    throw ProtocolError("no prototype for class " + std::to_string(id));
  }
  return it->second;
}

PrototypeStore ingest_task(PrototypeStore store, const DomainTask& task,
                           const ClassRegistry& registry, FusionMode mode,
                           const RegularizationConfig& reg) {
  reg.validate();
  for (ClassId id : task.class_ids()) {
    if (store.contains(id)) {
      throw ProtocolError("class " + std::to_string(id) + " of domain " +
                          std::to_string(task.domain_id()) + " was already learned");
    }
  }

  std::map<ClassId, std::vector<const LabeledSample*>> by_class;
  for (const auto& s : task.train_samples()) by_class[s.class_id].push_back(&s);

  std::vector<ClassPrototype> learned;
  learned.reserve(task.class_ids().size());
  for (ClassId id : task.class_ids()) {
    const auto& text = registry.at(id).text_embedding;
    const auto& members = by_class[id];
    const Index d = fused_dim(text.dim(), mode);
    Eigen::MatrixXd columns(d, static_cast<Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i]->embedding.dim() != text.dim()) {
        throw DimensionError("sample of class " + std::to_string(id) +
                             " does not match its text embedding dimension");
      }
      columns.col(static_cast<Index>(i)) = fuse(members[i]->embedding.values(), text.values(), mode);
    }
    learned.push_back(learn_prototype(columns, id, reg));
  }
  for (auto& proto : learned) store.insert(std::move(proto));
  return store;
}

}  // namespace hycal
