#pragma once

#include "tsf/types.hpp"

/**
 * @file invariance.hpp
 *
 * @brief Distance transformations that leave the input affinities unchanged,
 * and the impostor construction built from them.
 *
 * Adding a constant C to every off-diagonal squared distance, or scaling all
 * coordinates, does not change P. Combining both pushes any dataset towards a
 * regular simplex while keeping every t-SNE stationary point.
 */

namespace tsf::invariance {

/// Additive shift C on squared distances and a multiplicative factor on coordinates.
struct ShiftSpec {
  double shift = 0.0;
  double scale = 1.0;

  void validate() const;
};

/// D + C (11^T - I). Negative C is allowed only while every entry stays nonnegative.
SquaredDistanceMatrix shift_sq_dists(const SquaredDistanceMatrix& D, double C);

/// D scaled by `factor` (the squared distances of factor^{1/2} X).
SquaredDistanceMatrix scale_sq_dists(const SquaredDistanceMatrix& D, double factor);

/// A point set in R^{n-1} whose squared distances are those of X plus C.
Dataset realize_shift(const Dataset& X, double C);

/// Applies `spec.scale` to the coordinates of `realize_shift(X, spec.shift)`.
Dataset apply(const Dataset& X, const ShiftSpec& spec);

/// Squared distances (1 - C) D + C off the diagonal.
SquaredDistanceMatrix interpolate_sq_dists(const SquaredDistanceMatrix& D, double C);

/// g(C) = ((1 - C)^{1/2} X) shifted by C, realized in R^{n-1}; C in [0, 1].
Dataset interpolate_g(const Dataset& X, double C);

/// (eps / max D) D + (11^T - I): every off-diagonal entry lands in [1, 1 + eps].
SquaredDistanceMatrix impostor_sq_dists(const SquaredDistanceMatrix& D, double eps);

/// Impostor dataset: same input affinities as X, squared distances in [1, 1 + eps].
Dataset make_impostor(const Dataset& X, double eps);

/// True iff every off-diagonal squared distance lies in [1 - eps, 1 + eps] (within `slack`).
bool in_delta(const SquaredDistanceMatrix& D, double eps, double slack = 0.0);

}  // namespace tsf::invariance
