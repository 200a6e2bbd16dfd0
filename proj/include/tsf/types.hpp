#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file types.hpp
 *
 * @brief Core value types shared by every module: point clouds, squared
 * distance matrices, affinity matrices and cluster partitions.
 */

namespace tsf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised for every rejected input or failed internal consistency check.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief n x D point cloud, one point per row.
 *
 * A default-constructed Dataset is empty and acts as a "no data" placeholder;
 * every other construction path enforces n >= 1, D >= 1 and finite entries.
 */
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(Matrix points);

  static Dataset from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// One-dimensional points.
  static Dataset from_values(std::initializer_list<double> values);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  bool empty() const { return points_.rows() == 0; }

  const Matrix& points() const { return points_; }
  auto row(Index i) const { return points_.row(i); }

  /// Copy without row `i`.
  Dataset without(Index i) const;

 private:
  Matrix points_;
};

/// Symmetric n x n matrix of squared Euclidean distances with zero diagonal.
class SquaredDistanceMatrix {
 public:
  SquaredDistanceMatrix() = default;
  explicit SquaredDistanceMatrix(Matrix entries);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  double max_entry() const;

 private:
  Matrix entries_;
};

enum class AffinityKind { input, output };

/// Joint probability matrix over point pairs (P on the input side, Q on the output side).
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  AffinityMatrix(Matrix entries, AffinityKind kind);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }
  AffinityKind kind() const { return kind_; }

 private:
  Matrix entries_;
  AffinityKind kind_ = AffinityKind::input;
};

/**
 * @brief Hard assignment of n points to k >= 2 clusters.
 *
 * Labels are compacted to 0..k-1; every cluster is non-empty.
 */
class Partition {
 public:
  Partition() = default;
  /// Labels must already be 0..k-1 with every id present.
  Partition(std::vector<int> labels, int k);
  /// Arbitrary integer ids, remapped to 0..k-1 in ascending id order.
  static Partition from_ids(const std::vector<std::int64_t>& ids);

  Index size() const { return static_cast<Index>(labels_.size()); }
  int k() const { return k_; }
  int operator[](Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<Index> members(int cluster) const;
  std::vector<Index> cluster_sizes() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

}  // namespace tsf
