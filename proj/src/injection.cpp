#include "tsf/injection.hpp"

#include "tsf/geometry.hpp"
#include "tsf/invariance.hpp"
#include "tsf/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace tsf::injection {

namespace {

constexpr int kSimplexAttempts = 1000;

}  // namespace

void MixtureSpec::validate() const {
  if (components.empty()) throw Error("mixture needs at least one component");
  if (dim < 1) throw Error("mixture dimension must be positive");
  for (const auto& c : components) {
    if (c.mean.size() != dim) throw Error("mixture component mean has the wrong dimension");
    if (c.count < 1) throw Error("mixture component counts must be at least 1");
    if (!(c.stddev > 0.0)) throw Error("mixture component stddev must be positive");
  }
}

MixtureSpec MixtureSpec::two_clusters(Index dim, double separation, double stddev, Index per_cluster) {
  MixtureSpec spec;
  spec.dim = dim;
  Vector shifted = Vector::Zero(dim);
  shifted(0) = separation;
  spec.components.push_back({Vector::Zero(dim), stddev, per_cluster});
  spec.components.push_back({shifted, stddev, per_cluster});
  return spec;
}

LabeledDataset sample_mixture(const MixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  Index total = 0;
  for (const auto& c : spec.components) total += c.count;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(total, spec.dim);
  std::vector<std::int64_t> ids;
  ids.reserve(static_cast<std::size_t>(total));
  Index row = 0;
  for (std::size_t c = 0; c < spec.components.size(); ++c) {
    const auto& comp = spec.components[c];
    for (Index r = 0; r < comp.count; ++r, ++row) {
      for (Index j = 0; j < spec.dim; ++j) X(row, j) = comp.mean(j) + comp.stddev * normal(rng);
      ids.push_back(static_cast<std::int64_t>(c));
    }
  }
  LabeledDataset out{Dataset(std::move(X)), {}};
  if (spec.components.size() >= 2) out.labels = Partition::from_ids(ids);
  return out;
}

Dataset regular_simplex(Index n) {
  if (n < 2) throw Error("regular_simplex: need at least two points");
  // Helmert basis of the hyperplane orthogonal to the all-ones vector; e_i / sqrt(2)
  // expressed in it gives unit pairwise distances.
  Matrix X = Matrix::Zero(n, n - 1);
  for (Index j = 1; j < n; ++j) {
    const double jj = static_cast<double>(j);
    const double norm = std::sqrt(jj * (jj + 1.0) * 2.0);
    for (Index i = 0; i < j; ++i) X(i, j - 1) = 1.0 / norm;
    X(j, j - 1) = -jj / norm;
  }
  return Dataset(std::move(X));
}

Dataset perturbed_simplex(Index n, double eps, std::uint64_t seed) {
  if (n < 2) throw Error("perturbed_simplex: need at least two points");
  if (!(eps > 0.0 && eps < 1.0)) throw Error("perturbed_simplex: eps must lie in (0, 1)");
  const Matrix base = regular_simplex(n).points();
  const double scale = eps / (4.0 * std::sqrt(static_cast<double>(n)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  for (int attempt = 0; attempt < kSimplexAttempts; ++attempt) {
    Matrix X = base;
    for (Index i = 0; i < X.rows(); ++i) {
      for (Index j = 0; j < X.cols(); ++j) X(i, j) += normal(rng);
    }
    Dataset candidate(std::move(X));
    if (invariance::in_delta(geometry::pairwise_sq_dists(candidate), eps)) return candidate;
  }
  std::ostringstream msg;
  msg << "perturbed_simplex: no sample landed in the eps-band after " << kSimplexAttempts << " attempts";
  throw Error(msg.str());
}

Dataset append_rows(const Dataset& X, const Matrix& extra) {
  if (extra.rows() == 0) return X;
  if (extra.cols() != X.dim()) throw Error("append_rows: dimension mismatch");
  Matrix out(X.size() + extra.rows(), X.dim());
  out.topRows(X.size()) = X.points();
  out.bottomRows(extra.rows()) = extra;
  return Dataset(std::move(out));
}

Dataset poison_mean(const Dataset& X) {
  if (X.empty()) throw Error("poison_mean: empty dataset");
  return append_rows(X, geometry::centroid(X).transpose());
}

Dataset poison_kmeans_average(const Dataset& X, int k, Index m, Index count, std::uint64_t seed) {
  if (count < 0) throw Error("poison_kmeans_average: count must be nonnegative");
  if (m < 1) throw Error("poison_kmeans_average: m must be at least 1");
  if (k < 1) throw Error("poison_kmeans_average: k must be at least 1");
  if (count == 0) return X;

  const auto fit = saliency::kmeans_fit(X, k, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> pick_centroid(0, k - 1);
  std::uniform_int_distribution<Index> pick_point(0, X.size() - 1);
  std::vector<Index> indices(static_cast<std::size_t>(X.size()));
  std::iota(indices.begin(), indices.end(), Index{0});

  Matrix poison(count, X.dim());
  for (Index c = 0; c < count; ++c) {
    const int centroid = pick_centroid(rng);
    Eigen::RowVectorXd avg = Eigen::RowVectorXd::Zero(X.dim());
    if (m <= X.size()) {
      std::vector<Index> chosen;
      chosen.reserve(static_cast<std::size_t>(m));
      std::sample(indices.begin(), indices.end(), std::back_inserter(chosen), m, rng);
      for (Index idx : chosen) avg += X.row(idx);
    } else {
      for (Index r = 0; r < m; ++r) avg += X.row(pick_point(rng));
    }
    avg /= static_cast<double>(m);
    poison.row(c) = 0.5 * (fit.centroids.row(centroid) + avg);
  }
  return append_rows(X, poison);
}

Dataset inject_outliers(const Dataset& X, Index count, double stddev, std::uint64_t seed) {
  if (count < 1) throw Error("inject_outliers: count must be at least 1");
  if (!(stddev > 0.0)) throw Error("inject_outliers: stddev must be positive");
  const Vector mean = geometry::centroid(X);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix extra(count, X.dim());
  for (Index r = 0; r < count; ++r) {
    for (Index j = 0; j < X.dim(); ++j) extra(r, j) = mean(j) + normal(rng);
  }
  return append_rows(X, extra);
}

}  // namespace tsf::injection
