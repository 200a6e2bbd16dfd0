#pragma once

#include "tsf/affinity.hpp"
#include "tsf/types.hpp"

#include <optional>

/**
 * @file outliers.hpp
 *
 * @brief Geometric outlier measurement and the bounds t-SNE stationary points obey.
 *
 * A point y_0 is an alpha-outlier when a hyperplane separates it from the rest
 * with margin at least alpha * max(1, diam(rest)). The widest margin equals the
 * distance from y_0 to the convex hull of the rest, so alpha is that distance
 * over max(1, diam(rest)).
 */

namespace tsf::outliers {

/// Closest point of conv(S) to a query, with a certificate of how close it is.
struct HullProjection {
  double distance = 0.0;
  /// Unit vector from the projection towards the query; zero when the query is inside.
  Vector direction;
  Vector projection;
  /// Convex weights over the rows of S.
  Vector weights;
  /// Upper bound minus certified lower bound on `distance` at termination.
  double gap = 0.0;
  int iterations = 0;
};

/**
 * Euclidean distance from p to conv(S) by away-step Frank-Wolfe over the
 * simplex of convex weights. Stops once the distance is pinned to within
 * 1e-9 (1 + |p| + diam(S)), or the query is that close to the hull.
 */
HullProjection project_to_hull(const Vector& p, const Dataset& S);

double dist_to_hull(const Vector& p, const Dataset& S);

struct OutlierReport {
  double alpha = 0.0;
  Index witness_index = 0;
  double margin = 0.0;
  double bulk_diameter = 0.0;     // beta
  double min_dist_to_bulk = 0.0;  // gamma
  std::optional<double> bound;    // stationary-point bound at the witness, when P is known
  std::optional<double> p_mass;   // sum_j P_{witness|j}, when P is known

  bool operator==(const OutlierReport&) const = default;
};

OutlierReport outlier_number_for(const Dataset& Y, Index i);
OutlierReport outlier_number_for(const Dataset& Y, Index i, const affinity::InputAffinities& P);

/// Maximizes `outlier_number_for` over all points; ties go to the smallest index.
OutlierReport outlier_number(const Dataset& Y);
OutlierReport outlier_number(const Dataset& Y, const affinity::InputAffinities& P);

/// Upper bound 1 / (2 + (n - 2)(1 + gamma^2)/(1 + beta^2)) on sum_j Q_ij for y_i.
double qsum_bound(const Dataset& Y, Index i);

/// sum_j Q_ij of the output affinities of Y.
double q_row_mass(const Dataset& Y, Index i);

/// sqrt(1 + (1 + 2/(n-2)) * 8 / (1 + p_mass)).
double theorem_bound_from_mass(Index n, double p_mass);

/// Bound on alpha(Y) at point i for any stationary embedding Y of data with affinities P.
double theorem_bound(const affinity::InputAffinities& P, Index i);

}  // namespace tsf::outliers
