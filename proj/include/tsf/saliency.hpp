#pragma once

#include "tsf/types.hpp"

#include <cstdint>
#include <vector>

/**
 * @file saliency.hpp
 *
 * @brief Cluster-validity indices and a seeded k-means labeler.
 *
 * All indices use Euclidean (not squared) distances except Calinski-Harabasz,
 * which is defined on squared distances to centroids. Degenerate ratios follow
 * the usual conventions: 0/0 is 1 and x/0 is +infinity.
 */

namespace tsf::saliency {

/// Mean silhouette score in [-1, 1]. Requires k >= 2 and n > k.
double silhouette(const Dataset& X, const Partition& part);

/// Per-point silhouette values S(i).
std::vector<double> silhouette_values(const Dataset& X, const Partition& part);

/// Between-cluster over within-cluster dispersion; may be +infinity.
double calinski_harabasz(const Dataset& X, const Partition& part);

/// Minimum inter-cluster distance over maximum intra-cluster distance; may be +infinity.
/// Every cluster must have more than one member.
double dunn(const Dataset& X, const Partition& part);

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;  // k x D
  double inertia = 0.0;
  int iterations = 0;
};

/**
 * Lloyd's algorithm from a seeded k-means++ start, run to an assignment
 * fixpoint or 300 iterations. Empty clusters are reseeded with the point
 * farthest from its centroid. Accepts k = 1.
 */
KMeansResult kmeans_fit(const Dataset& X, int k, std::uint64_t seed);

/// Labels from `kmeans_fit`; k >= 2.
Partition kmeans(const Dataset& X, int k, std::uint64_t seed);

/**
 * Elbow estimate of the cluster count over k in [1, k_max]: the k whose
 * normalized inertia drop most exceeds the straight line from k = 1 to k_max.
 * Returns 1 when no k lies above that line.
 */
int elbow_cluster_count(const Dataset& X, int k_max, std::uint64_t seed);

/// Fraction of points on which two labelings agree, maximized over label permutations.
double label_agreement(const Partition& a, const Partition& b);

}  // namespace tsf::saliency
