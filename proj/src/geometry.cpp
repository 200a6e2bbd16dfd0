#include "tsf/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace tsf::geometry {

SquaredDistanceMatrix pairwise_sq_dists(const Dataset& X) {
  if (X.empty()) throw Error("pairwise_sq_dists: empty dataset");
  const Index n = X.size();
  // Column-major copy so each point is contiguous.
  const Matrix pts = X.points().transpose();
  Matrix D = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double d = (pts.col(i) - pts.col(j)).squaredNorm();
      D(i, j) = d;
      D(j, i) = d;
    }
  }
  return SquaredDistanceMatrix(std::move(D));
}

Matrix double_centered(const SquaredDistanceMatrix& D) {
  const Matrix& M = D.entries();
  const Vector row_mean = M.rowwise().mean();
  const Vector col_mean = M.colwise().mean().transpose();
  const double grand = M.mean();
  Matrix B(M.rows(), M.cols());
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) {
      B(i, j) = -0.5 * (M(i, j) - row_mean(i) - col_mean(j) + grand);
    }
  }
  // Exact symmetry keeps the self-adjoint solver honest.
  return 0.5 * (B + B.transpose());
}

double min_gram_eigenvalue(const SquaredDistanceMatrix& D) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(double_centered(D), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool schoenberg_embeddable(const SquaredDistanceMatrix& D, double tol) {
  return min_gram_eigenvalue(D) >= -tol;
}

namespace {

double spectral_tolerance(const Vector& eigenvalues) {
  return 1e-8 * eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace

double default_mds_tolerance(const SquaredDistanceMatrix& D) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(double_centered(D), Eigen::EigenvaluesOnly);
  return spectral_tolerance(es.eigenvalues());
}

Dataset classical_mds(const SquaredDistanceMatrix& D, Index d, double tol) {
  const Index n = D.size();
  if (n < 2) throw Error("classical_mds: need at least two points");
  if (d < 1 || d > n - 1) throw Error("classical_mds: target dimension must lie in [1, n-1]");

  Eigen::SelfAdjointEigenSolver<Matrix> es(double_centered(D));
  if (es.info() != Eigen::Success) throw Error("classical_mds: eigendecomposition failed");
  const Vector& evals = es.eigenvalues();  // ascending
  if (tol < 0.0) tol = spectral_tolerance(evals);
  if (evals(0) < -tol) {
    throw Error("classical_mds: matrix is not Euclidean (minimum Gram eigenvalue " +
                std::to_string(evals(0)) + ")");
  }

  Matrix Y(n, d);
  for (Index c = 0; c < d; ++c) {
    const Index k = n - 1 - c;
    const double lambda = std::max(evals(k), 0.0);
    Y.col(c) = es.eigenvectors().col(k) * std::sqrt(lambda);
  }
  return Dataset(std::move(Y));
}

Vector centroid(const Dataset& X) { return X.points().colwise().mean().transpose(); }

Dataset pca(const Dataset& X, Index d) {
  const Index n = X.size();
  if (d < 1 || d > std::min(n, X.dim())) throw Error("pca: dimension must lie in [1, min(n, D)]");
  const Matrix centered = X.points().rowwise() - X.points().colwise().mean();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  Matrix directions = svd.matrixV().leftCols(d);
  for (Index c = 0; c < d; ++c) {
    Index arg = 0;
    directions.col(c).cwiseAbs().maxCoeff(&arg);
    if (directions(arg, c) < 0.0) directions.col(c) *= -1.0;
  }
  return Dataset(centered * directions);
}

double diameter(const Dataset& X) {
  const Index n = X.size();
  if (n <= 1) return 0.0;
  const Matrix pts = X.points().transpose();
  double best = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) best = std::max(best, (pts.col(i) - pts.col(j)).squaredNorm());
  }
  return std::sqrt(best);
}

}  // namespace tsf::geometry
