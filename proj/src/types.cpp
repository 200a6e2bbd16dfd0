#include "tsf/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace tsf {

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw Error("dataset must have at least one point and one dimension");
  }
  for (Index i = 0; i < points_.rows(); ++i) {
    for (Index j = 0; j < points_.cols(); ++j) {
      if (!std::isfinite(points_(i, j))) {
        std::ostringstream msg;
        msg << "non-finite coordinate at row " << i << ", column " << j;
        throw Error(msg.str());
      }
    }
  }
}

Dataset Dataset::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) throw Error("dataset must have at least one point");
  const auto width = rows.begin()->size();
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  Index i = 0;
  for (const auto& r : rows) {
    if (r.size() != width) throw Error("ragged rows in dataset literal");
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return Dataset(std::move(m));
}

Dataset Dataset::from_values(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return Dataset(std::move(m));
}

Dataset Dataset::without(Index i) const {
  if (size() < 2) throw Error("cannot remove a point from a single-point dataset");
  Matrix m(size() - 1, dim());
  for (Index r = 0, out = 0; r < size(); ++r) {
    if (r != i) m.row(out++) = points_.row(r);
  }
  return Dataset(std::move(m));
}

SquaredDistanceMatrix::SquaredDistanceMatrix(Matrix entries) : entries_(std::move(entries)) {
  const Index n = entries_.rows();
  if (n < 1 || entries_.cols() != n) throw Error("squared distance matrix must be square and nonempty");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  for (Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) throw Error("squared distance matrix must have a zero diagonal");
    for (Index j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v)) throw Error("squared distance matrix has a non-finite entry");
      if (v < 0.0) throw Error("squared distance matrix has a negative entry");
      if (std::abs(v - entries_(j, i)) > 1e-12 * scale) {
        throw Error("squared distance matrix is not symmetric");
      }
    }
  }
}

double SquaredDistanceMatrix::max_entry() const { return entries_.size() ? entries_.maxCoeff() : 0.0; }

AffinityMatrix::AffinityMatrix(Matrix entries, AffinityKind kind)
    : entries_(std::move(entries)), kind_(kind) {
  const Index n = entries_.rows();
  if (n < 1 || entries_.cols() != n) throw Error("affinity matrix must be square and nonempty");
  for (Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) throw Error("affinity matrix must have a zero diagonal");
    for (Index j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < 0.0) throw Error("affinity entries must be finite and nonnegative");
      if (std::abs(v - entries_(j, i)) > 1e-12) throw Error("affinity matrix is not symmetric");
    }
  }
  if (std::abs(entries_.sum() - 1.0) > 1e-10) throw Error("affinity matrix must sum to one");
}

Partition::Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k_ < 2) throw Error("a partition needs at least two clusters");
  std::vector<bool> seen(static_cast<std::size_t>(k_), false);
  for (int l : labels_) {
    if (l < 0 || l >= k_) throw Error("cluster label out of range");
    seen[static_cast<std::size_t>(l)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error("every cluster of a partition must be non-empty");
  }
}

Partition Partition::from_ids(const std::vector<std::int64_t>& ids) {
  std::map<std::int64_t, int> remap;
  for (auto id : ids) remap.emplace(id, 0);
  int next = 0;
  for (auto& [id, label] : remap) label = next++;
  std::vector<int> labels;
  labels.reserve(ids.size());
  for (auto id : ids) labels.push_back(remap.at(id));
  return Partition(std::move(labels), next);
}

std::vector<Index> Partition::members(int cluster) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == cluster) out.push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<Index> Partition::cluster_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

}  // namespace tsf
