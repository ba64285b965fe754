#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hycal/error.hpp"
#include "hycal/types.hpp"

namespace hycal {

// Shrinkage toward a scaled identity: (1 - lambda) * S + lambda * gamma * I.
struct RegularizationConfig {
  double lambda = 1e-4;
  double gamma = 1.0;

  void validate() const;
};

template <typename Scalar>
struct BasicClassPrototype {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  ClassId class_id = 0;
  Vector mu;
  Matrix precision;
  int sample_count = 0;

  Index dim() const noexcept { return mu.size(); }
};

using ClassPrototype = BasicClassPrototype<double>;

// Biased (divide-by-K) covariance of the columns of `samples`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> empirical_covariance(
    const Eigen::MatrixBase<Derived>& samples) {
  using Scalar = typename Derived::Scalar;
  const auto k = static_cast<Scalar>(samples.cols());
  const auto centered = (samples.colwise() - samples.rowwise().mean()).eval();
  return (centered * centered.transpose()) / k;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> regularized_covariance(
    const Eigen::MatrixBase<Derived>& samples, const RegularizationConfig& reg) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto lambda = static_cast<Scalar>(reg.lambda);
  const auto gamma = static_cast<Scalar>(reg.gamma);
  Matrix cov = (Scalar(1) - lambda) * empirical_covariance(samples);
  cov.diagonal().array() += lambda * gamma;
  return cov;
}

// Inverse of a symmetric positive-definite matrix through its Cholesky
// factor. The result is symmetrized so that the upper and lower triangles
// agree bit for bit.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> spd_inverse(
    const Eigen::MatrixBase<Derived>& spd) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::LLT<Matrix> llt(spd);
  if (llt.info() != Eigen::Success || !(llt.rcond() > Eigen::NumTraits<Scalar>::epsilon())) {
    throw SingularCovarianceError("regularized covariance is not positive definite");
  }
  Matrix inv = llt.solve(Matrix::Identity(spd.rows(), spd.cols()));
  Matrix sym = (inv + inv.transpose()) * Scalar(0.5);
  if (!sym.allFinite()) throw SingularCovarianceError("precision matrix is not finite");
  return sym;
}

// Learns mean, regularized precision and sample count from the columns of
// `samples` (one fused embedding per column).
template <typename Derived>
BasicClassPrototype<typename Derived::Scalar> learn_prototype(
    const Eigen::MatrixBase<Derived>& samples, ClassId class_id, const RegularizationConfig& reg) {
  reg.validate();
  if (samples.cols() < 1) {
    throw ProtocolError("class " + std::to_string(class_id) + " has no training samples");
  }
  if (samples.rows() < 1) throw DimensionError("training samples have dimension 0");
  BasicClassPrototype<typename Derived::Scalar> proto;
  proto.class_id = class_id;
  proto.mu = samples.rowwise().mean();
  proto.precision = spd_inverse(regularized_covariance(samples, reg));
  proto.sample_count = static_cast<int>(samples.cols());
  return proto;
}

ClassPrototype learn_prototype(std::span<const FusedEmbedding> samples, ClassId class_id,
                               const RegularizationConfig& reg);

// Append-only collection of learned prototypes.
class PrototypeStore {
 public:
  void insert(ClassPrototype proto);

  bool contains(ClassId id) const { return prototypes_.contains(id); }
  const ClassPrototype& at(ClassId id) const;
  const std::map<ClassId, ClassPrototype>& prototypes() const noexcept { return prototypes_; }
  const std::vector<ClassId>& learned_order() const noexcept { return learned_order_; }
  std::size_t size() const noexcept { return prototypes_.size(); }
  bool empty() const noexcept { return prototypes_.empty(); }
  Index dim() const noexcept { return dim_; }

 private:
  std::map<ClassId, ClassPrototype> prototypes_;
  std::vector<ClassId> learned_order_;
  Index dim_ = 0;
};

// Learns one prototype per class of `task` from that class's training
// samples fused with its text embedding. Prototypes already in the store are
// left untouched; a class that is already present is a ProtocolError and
// leaves the store unchanged.
PrototypeStore ingest_task(PrototypeStore store, const DomainTask& task,
                           const ClassRegistry& registry, FusionMode mode,
                           const RegularizationConfig& reg);

}  // namespace hycal
