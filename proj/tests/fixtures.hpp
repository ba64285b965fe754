#pragma once

#include <map>
#include <vector>

#include "hycal/types.hpp"

namespace fixture {

inline hycal::EmbeddingVector vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return hycal::EmbeddingVector(std::move(x));
}

inline hycal::LabeledSample sample(hycal::EmbeddingVector e, hycal::ClassId c, hycal::DomainId d,
                                   hycal::Split s = hycal::Split::Train) {
  return {std::move(e), c, d, s};
}

}  // namespace fixture
