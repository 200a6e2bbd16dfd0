#include "tsf/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace tsf::saliency {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxLloydIterations = 300;

Matrix euclidean_distances(const Dataset& X) {
  const Index n = X.size();
  const Matrix pts = X.points().transpose();
  Matrix M = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double d = (pts.col(i) - pts.col(j)).norm();
      M(i, j) = d;
      M(j, i) = d;
    }
  }
  return M;
}

void check_sizes(const Dataset& X, const Partition& part) {
  if (part.size() != X.size()) throw Error("partition size does not match dataset");
  if (part.k() < 2) throw Error("index needs at least two clusters");
}

double ratio_with_conventions(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : kInf;
  return num / den;
}

Matrix cluster_means(const Dataset& X, const std::vector<int>& labels, int k) {
  Matrix means = Matrix::Zero(k, X.dim());
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < X.size(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    means.row(l) += X.row(i);
    ++counts[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return means;
}

}  // namespace

std::vector<double> silhouette_values(const Dataset& X, const Partition& part) {
  check_sizes(X, part);
  const Index n = X.size();
  if (n <= part.k()) throw Error("silhouette needs more points than clusters");

  const Matrix dist = euclidean_distances(X);
  const auto sizes = part.cluster_sizes();
  const int k = part.k();
  std::vector<double> scores(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sums(static_cast<std::size_t>(k));
  for (Index i = 0; i < n; ++i) {
    const int own = part[i];
    const Index own_size = sizes[static_cast<std::size_t>(own)];
    if (own_size == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Index j = 0; j < n; ++j) sums[static_cast<std::size_t>(part[j])] += dist(i, j);

    const double a = sums[static_cast<std::size_t>(own)] / static_cast<double>(own_size - 1);
    double b = kInf;
    for (int m = 0; m < k; ++m) {
      if (m == own) continue;
      b = std::min(b, sums[static_cast<std::size_t>(m)] / static_cast<double>(sizes[static_cast<std::size_t>(m)]));
    }
    const double denom = std::max(a, b);
    scores[static_cast<std::size_t>(i)] = denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return scores;
}

double silhouette(const Dataset& X, const Partition& part) {
  const auto s = silhouette_values(X, part);
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double calinski_harabasz(const Dataset& X, const Partition& part) {
  check_sizes(X, part);
  const Index n = X.size();
  const int k = part.k();
  if (n <= k) throw Error("Calinski-Harabasz needs more points than clusters");

  const Matrix means = cluster_means(X, part.labels(), k);
  const Eigen::RowVectorXd overall = X.points().colwise().mean();
  const auto sizes = part.cluster_sizes();

  double between = 0.0;
  for (int m = 0; m < k; ++m) {
    between += static_cast<double>(sizes[static_cast<std::size_t>(m)]) * (means.row(m) - overall).squaredNorm();
  }
  double within = 0.0;
  for (Index i = 0; i < n; ++i) within += (X.row(i) - means.row(part[i])).squaredNorm();

  return ratio_with_conventions(between / static_cast<double>(k - 1), within / static_cast<double>(n - k));
}

double dunn(const Dataset& X, const Partition& part) {
  check_sizes(X, part);
  for (auto s : part.cluster_sizes()) {
    if (s < 2) throw Error("Dunn index requires every cluster to have more than one member");
  }
  const Matrix dist = euclidean_distances(X);
  double min_inter = kInf;
  double max_intra = 0.0;
  for (Index j = 0; j < X.size(); ++j) {
    for (Index i = j + 1; i < X.size(); ++i) {
      if (part[i] == part[j]) {
        max_intra = std::max(max_intra, dist(i, j));
      } else {
        min_inter = std::min(min_inter, dist(i, j));
      }
    }
  }
  return ratio_with_conventions(min_inter, max_intra);
}

KMeansResult kmeans_fit(const Dataset& X, int k, std::uint64_t seed) {
  const Index n = X.size();
  if (k < 1 || k > n) throw Error("kmeans: k must lie in [1, n]");
  const Matrix& pts = X.points();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // k-means++ seeding.
  Matrix centroids(k, X.dim());
  {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    centroids.row(0) = pts.row(pick(rng));
    Vector nearest(n);
    for (Index i = 0; i < n; ++i) nearest(i) = (pts.row(i) - centroids.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
      const double total = nearest.sum();
      Index chosen = 0;
      if (total > 0.0) {
        const double target = unit(rng) * total;
        double acc = 0.0;
        chosen = n - 1;
        for (Index i = 0; i < n; ++i) {
          acc += nearest(i);
          if (acc > target && nearest(i) > 0.0) {
            chosen = i;
            break;
          }
        }
      } else {
        chosen = pick(rng);
      }
      centroids.row(c) = pts.row(chosen);
      for (Index i = 0; i < n; ++i) {
        nearest(i) = std::min(nearest(i), (pts.row(i) - centroids.row(c)).squaredNorm());
      }
    }
  }

  KMeansResult result;
  result.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  Vector assigned_dist(n);
  for (int it = 0; it < kMaxLloydIterations; ++it) {
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = kInf;
      for (int c = 0; c < k; ++c) {
        const double d = (pts.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels[static_cast<std::size_t>(i)] = best;
      assigned_dist(i) = best_d;
    }

    // Reseed empty clusters with the farthest point of a cluster that can spare one.
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2) continue;
        if (far < 0 || assigned_dist(i) > assigned_dist(far)) far = i;
      }
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      assigned_dist(far) = 0.0;
    }

    centroids = cluster_means(X, labels, k);
    result.iterations = it + 1;
    if (labels == result.labels) break;
    result.labels = labels;
  }
  result.labels = labels;
  result.centroids = centroids;
  result.inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    result.inertia += (pts.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return result;
}

Partition kmeans(const Dataset& X, int k, std::uint64_t seed) {
  if (k < 2) throw Error("kmeans: k must be at least 2");
  auto fit = kmeans_fit(X, k, seed);
  return Partition(std::move(fit.labels), k);
}

int elbow_cluster_count(const Dataset& X, int k_max, std::uint64_t seed) {
  k_max = std::min<int>(k_max, static_cast<int>(X.size()));
  if (k_max < 3) throw Error("elbow_cluster_count: need k_max >= 3");
  std::vector<double> inertia(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) inertia[static_cast<std::size_t>(k - 1)] = kmeans_fit(X, k, seed).inertia;

  const double first = inertia.front();
  const double span = first - inertia.back();
  if (!(span > 0.0)) return 1;
  int best = 1;
  double best_gap = 0.0;
  for (int k = 2; k < k_max; ++k) {
    const double x = static_cast<double>(k - 1) / static_cast<double>(k_max - 1);
    const double y = (first - inertia[static_cast<std::size_t>(k - 1)]) / span;
    if (y - x > best_gap) {
      best_gap = y - x;
      best = k;
    }
  }
  return best;
}

double label_agreement(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw Error("label_agreement: partitions differ in size");
  const int k = std::max(a.k(), b.k());
  if (k > 9) throw Error("label_agreement: too many clusters for permutation matching");
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Index best = 0;
  do {
    Index hits = 0;
    for (Index i = 0; i < a.size(); ++i) {
      if (perm[static_cast<std::size_t>(a[i])] == b[i]) ++hits;
    }
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(a.size());
}

}  // namespace tsf::saliency
