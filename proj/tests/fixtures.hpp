#pragma once

#include "oracles.hpp"

#include "tsf/types.hpp"

#include <cmath>

namespace fixture {

using tsf::Dataset;
using tsf::Index;
using tsf::Matrix;

/// n/2 points at 0 and n/2 points at 1 on a line.
inline Dataset two_cluster_binary(Index n) {
  Matrix X = Matrix::Zero(n, 1);
  X.bottomRows(n - n / 2).setOnes();
  return Dataset(X);
}

inline std::vector<int> two_cluster_labels(Index n) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (Index i = n / 2; i < n; ++i) labels[static_cast<std::size_t>(i)] = 1;
  return labels;
}

/**
 * Planar embedding of the binary dataset with Q = P: each cluster collapsed to
 * a point, the two points sqrt(exp(1/(2 sigma^2)) - 1) apart.
 */
inline Dataset two_cluster_minimizer(Index n, double sigma) {
  Matrix Y = Matrix::Zero(n, 2);
  Y.bottomRows(n - n / 2).col(0).setConstant(std::sqrt(std::expm1(1.0 / (2.0 * sigma * sigma))));
  return Dataset(Y);
}

}  // namespace fixture
