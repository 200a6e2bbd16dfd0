#pragma once

#include "tsf/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tsf::injection {

struct MixtureComponent {
  Vector mean;
  double stddev = 1.0;
  Index count = 1;
};

/// Isotropic Gaussian mixture in `dim` dimensions.
struct MixtureSpec {
  std::vector<MixtureComponent> components;
  Index dim = 0;

  void validate() const;
  /// Two components at 0 and separation * e_1, `per_cluster` points each.
  static MixtureSpec two_clusters(Index dim, double separation, double stddev, Index per_cluster);
};

struct LabeledDataset {
  Dataset data;
  Partition labels;
};

/// Points drawn component by component; labels are component indices.
/// A single-component spec yields an empty (default) partition.
LabeledDataset sample_mixture(const MixtureSpec& spec, std::uint64_t seed);

/// n points in R^{n-1} with every squared distance equal to 1.
Dataset regular_simplex(Index n);

/**
 * Regular simplex plus Gaussian coordinate noise of scale eps / (4 sqrt(n)),
 * redrawn until every squared distance lies in [1 - eps, 1 + eps].
 */
Dataset perturbed_simplex(Index n, double eps, std::uint64_t seed);

/// X with its coordinate mean appended.
Dataset poison_mean(const Dataset& X);

/**
 * X plus `count` points, each halfway between a randomly chosen k-means
 * centroid and the mean of m randomly chosen data points.
 */
Dataset poison_kmeans_average(const Dataset& X, int k, Index m, Index count, std::uint64_t seed);

/// X plus `count` isotropic Gaussian samples centred at the mean of X.
Dataset inject_outliers(const Dataset& X, Index count, double stddev, std::uint64_t seed);

/// Rows of `extra` appended below X.
Dataset append_rows(const Dataset& X, const Matrix& extra);

}  // namespace tsf::injection
