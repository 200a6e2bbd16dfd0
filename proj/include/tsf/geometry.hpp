#pragma once

#include "tsf/types.hpp"

namespace tsf::geometry {

/// Squared Euclidean distance between every pair of rows.
SquaredDistanceMatrix pairwise_sq_dists(const Dataset& X);

/// Double-centred Gram matrix -1/2 J D J, where J is the centring projector.
Matrix double_centered(const SquaredDistanceMatrix& D);

/// Smallest eigenvalue of -1/2 J D J.
double min_gram_eigenvalue(const SquaredDistanceMatrix& D);

/**
 * @brief Schoenberg test for Euclidean realizability.
 *
 * D is embeddable iff u^T D u <= 0 for every u orthogonal to the all-ones
 * vector, i.e. iff -1/2 J D J is positive semidefinite. Returns true when the
 * minimum eigenvalue of that matrix is at least -tol.
 */
bool schoenberg_embeddable(const SquaredDistanceMatrix& D, double tol);

/// Default absolute tolerance for `classical_mds`: 1e-8 times the spectral scale of D.
double default_mds_tolerance(const SquaredDistanceMatrix& D);

/**
 * @brief Classical multidimensional scaling.
 *
 * Realizes D as an n x d point set from the top-d eigenpairs of -1/2 J D J.
 * Eigenvalues in [-tol, 0) are clipped to zero; anything below -tol means D is
 * not Euclidean and is rejected. A negative `tol` selects
 * `default_mds_tolerance(D)`.
 */
Dataset classical_mds(const SquaredDistanceMatrix& D, Index d, double tol = -1.0);

/**
 * @brief Principal component projection onto the top-d directions.
 *
 * Output axes are signed so that the largest-magnitude loading of each
 * principal direction is positive.
 */
Dataset pca(const Dataset& X, Index d);

/// Largest pairwise Euclidean distance (0 for a single point).
double diameter(const Dataset& X);

/// Column means of X.
Vector centroid(const Dataset& X);

}  // namespace tsf::geometry
