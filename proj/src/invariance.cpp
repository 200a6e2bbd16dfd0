#include "tsf/invariance.hpp"

#include "tsf/geometry.hpp"

#include <cmath>

namespace tsf::invariance {

void ShiftSpec::validate() const {
  if (!std::isfinite(shift)) throw Error("shift must be finite");
  if (!std::isfinite(scale) || !(scale > 0.0)) throw Error("scale must be finite and positive");
}

SquaredDistanceMatrix shift_sq_dists(const SquaredDistanceMatrix& D, double C) {
  if (!std::isfinite(C)) throw Error("shift_sq_dists: shift must be finite");
  Matrix M = D.entries();
  const Index n = D.size();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      M(i, j) += C;
      if (M(i, j) < 0.0) throw Error("shift_sq_dists: shift makes a squared distance negative");
    }
  }
  return SquaredDistanceMatrix(std::move(M));
}

SquaredDistanceMatrix scale_sq_dists(const SquaredDistanceMatrix& D, double factor) {
  if (!std::isfinite(factor) || !(factor > 0.0)) throw Error("scale_sq_dists: factor must be positive");
  return SquaredDistanceMatrix(D.entries() * factor);
}

Dataset realize_shift(const Dataset& X, double C) {
  if (X.size() < 2) throw Error("realize_shift: need at least two points");
  const auto D = shift_sq_dists(geometry::pairwise_sq_dists(X), C);
  return geometry::classical_mds(D, X.size() - 1);
}

Dataset apply(const Dataset& X, const ShiftSpec& spec) {
  spec.validate();
  return Dataset(realize_shift(X, spec.shift).points() * spec.scale);
}

SquaredDistanceMatrix interpolate_sq_dists(const SquaredDistanceMatrix& D, double C) {
  if (!(C >= 0.0 && C <= 1.0)) throw Error("interpolate_g: C must lie in [0, 1]");
  Matrix M = (1.0 - C) * D.entries();
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (i != j) M(i, j) += C;
    }
  }
  return SquaredDistanceMatrix(std::move(M));
}

Dataset interpolate_g(const Dataset& X, double C) {
  if (X.size() < 2) throw Error("interpolate_g: need at least two points");
  const auto D = interpolate_sq_dists(geometry::pairwise_sq_dists(X), C);
  return geometry::classical_mds(D, X.size() - 1);
}

SquaredDistanceMatrix impostor_sq_dists(const SquaredDistanceMatrix& D, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("make_impostor: eps must be positive");
  const double dmax = D.max_entry();
  if (!(dmax > 0.0)) throw Error("make_impostor: dataset needs at least two distinct points");
  Matrix M = (eps / dmax) * D.entries();
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (i != j) M(i, j) += 1.0;
    }
  }
  return SquaredDistanceMatrix(std::move(M));
}

Dataset make_impostor(const Dataset& X, double eps) {
  if (X.size() < 2) throw Error("make_impostor: need at least two points");
  const auto D = impostor_sq_dists(geometry::pairwise_sq_dists(X), eps);
  return geometry::classical_mds(D, X.size() - 1);
}

bool in_delta(const SquaredDistanceMatrix& D, double eps, double slack) {
  for (Index j = 0; j < D.size(); ++j) {
    for (Index i = 0; i < D.size(); ++i) {
      if (i == j) continue;
      const double v = D(i, j);
      if (v < 1.0 - eps - slack || v > 1.0 + eps + slack) return false;
    }
  }
  return true;
}

}  // namespace tsf::invariance
