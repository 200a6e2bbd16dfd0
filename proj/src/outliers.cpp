#include "tsf/outliers.hpp"

#include "tsf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsf::outliers {

namespace {

constexpr int kMaxFrankWolfeIterations = 500000;
constexpr int kRefreshEvery = 64;

double min_distance_to_others(const Dataset& Y, Index i) {
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < Y.size(); ++j) {
    if (j != i) best = std::min(best, (Y.row(i) - Y.row(j)).norm());
  }
  return best;
}

}  // namespace

HullProjection project_to_hull(const Vector& p, const Dataset& S) {
  if (S.empty()) throw Error("dist_to_hull: empty point set");
  if (p.size() != S.dim()) throw Error("dist_to_hull: dimension mismatch");
  const Index m = S.size();
  const Matrix pts = S.points().transpose();  // d x m
  const double tol = 1e-9 * (1.0 + p.norm() + geometry::diameter(S));

  Vector weights = Vector::Zero(m);
  Index start = 0;
  (pts.colwise() - p).colwise().squaredNorm().minCoeff(&start);
  weights(start) = 1.0;
  Vector x = pts.col(start);

  HullProjection out;
  for (int it = 0; it < kMaxFrankWolfeIterations; ++it) {
    out.iterations = it;
    if (it % kRefreshEvery == 0) x = pts * weights;
    const Vector r = x - p;
    const double rnorm = r.norm();
    if (rnorm <= tol) {
      out.gap = rnorm;
      break;
    }

    const Vector g = pts.transpose() * r;  // g_j = r . s_j
    Index fw = 0;
    g.minCoeff(&fw);
    Index away = -1;
    for (Index j = 0; j < m; ++j) {
      if (weights(j) > 0.0 && (away < 0 || g(j) > g(away))) away = j;
    }
    const double rx = r.dot(x);
    const double gap_fw = rx - g(fw);
    const double gap_away = g(away) - rx;
    out.gap = gap_fw / rnorm;
    if (out.gap <= tol) break;

    Vector dir;
    double step_max = 1.0;
    const bool use_fw = gap_fw >= gap_away;
    if (use_fw) {
      dir = pts.col(fw) - x;
    } else {
      dir = x - pts.col(away);
      const double wa = weights(away);
      step_max = wa < 1.0 ? wa / (1.0 - wa) : std::numeric_limits<double>::infinity();
    }
    const double dd = dir.squaredNorm();
    if (dd == 0.0) break;
    const double step = std::clamp(-r.dot(dir) / dd, 0.0, step_max);
    if (step == 0.0) break;

    if (use_fw) {
      weights *= (1.0 - step);
      weights(fw) += step;
    } else {
      weights *= (1.0 + step);
      weights(away) -= step;
      if (step == step_max) weights(away) = 0.0;
    }
    weights = weights.cwiseMax(0.0);
    weights /= weights.sum();
    x += step * dir;
  }

  x = pts * weights;
  out.weights = std::move(weights);
  out.projection = x;
  const Vector r = p - x;
  const double dist = r.norm();
  if (dist <= tol) {
    out.distance = 0.0;
    out.direction = Vector::Zero(p.size());
  } else {
    out.distance = dist;
    out.direction = r / dist;
  }
  return out;
}

double dist_to_hull(const Vector& p, const Dataset& S) { return project_to_hull(p, S).distance; }

OutlierReport outlier_number_for(const Dataset& Y, Index i) {
  if (Y.size() < 2) throw Error("outlier_number_for: need at least two points");
  if (i < 0 || i >= Y.size()) throw Error("outlier_number_for: index out of range");
  const Dataset rest = Y.without(i);
  OutlierReport rep;
  rep.witness_index = i;
  rep.margin = dist_to_hull(Y.row(i).transpose(), rest);
  rep.bulk_diameter = geometry::diameter(rest);
  rep.min_dist_to_bulk = min_distance_to_others(Y, i);
  rep.alpha = rep.margin / std::max(1.0, rep.bulk_diameter);
  return rep;
}

OutlierReport outlier_number_for(const Dataset& Y, Index i, const affinity::InputAffinities& P) {
  if (P.joint.size() != Y.size()) throw Error("outlier_number_for: affinities do not match Y");
  OutlierReport rep = outlier_number_for(Y, i);
  rep.p_mass = P.conditional_mass(i);
  if (Y.size() > 2) rep.bound = theorem_bound(P, i);
  return rep;
}

OutlierReport outlier_number(const Dataset& Y) {
  if (Y.size() < 2) throw Error("outlier_number: need at least two points");
  OutlierReport best = outlier_number_for(Y, 0);
  for (Index i = 1; i < Y.size(); ++i) {
    OutlierReport rep = outlier_number_for(Y, i);
    // values within the hull solver's precision count as ties
    if (rep.alpha > best.alpha + 1e-9 * (1.0 + best.alpha)) best = rep;
  }
  return best;
}

OutlierReport outlier_number(const Dataset& Y, const affinity::InputAffinities& P) {
  const OutlierReport best = outlier_number(Y);
  return outlier_number_for(Y, best.witness_index, P);
}

double qsum_bound(const Dataset& Y, Index i) {
  const Index n = Y.size();
  if (n < 2) throw Error("qsum_bound: need at least two points");
  const double beta = geometry::diameter(Y.without(i));
  const double gamma = min_distance_to_others(Y, i);
  return 1.0 / (2.0 + static_cast<double>(n - 2) * (1.0 + gamma * gamma) / (1.0 + beta * beta));
}

double q_row_mass(const Dataset& Y, Index i) {
  const Matrix W = affinity::student_t_weights(Y);
  return W.row(i).sum() / W.sum();
}

double theorem_bound_from_mass(Index n, double p_mass) {
  if (n <= 2) throw Error("theorem_bound: need more than two points");
  const double nn = static_cast<double>(n);
  return std::sqrt(1.0 + (1.0 + 2.0 / (nn - 2.0)) * (8.0 / (1.0 + p_mass)));
}

double theorem_bound(const affinity::InputAffinities& P, Index i) {
  return theorem_bound_from_mass(P.joint.size(), P.conditional_mass(i));
}

}  // namespace tsf::outliers
