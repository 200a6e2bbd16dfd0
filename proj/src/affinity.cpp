#include "tsf/affinity.hpp"

#include "tsf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tsf::affinity {

namespace {

constexpr double kEntropyTolerance = 1e-7;
constexpr int kMaxBisections = 100;
constexpr double kSigmaCap = 1e12;
// Squared distances this close (relative) to the row minimum count as ties.
constexpr double kTieTolerance = 1e-12;

std::span<const double> matrix_row(const Matrix& D, Index i, std::vector<double>& buffer) {
  buffer.resize(static_cast<std::size_t>(D.cols()));
  for (Index j = 0; j < D.cols(); ++j) buffer[static_cast<std::size_t>(j)] = D(i, j);
  return buffer;
}

double min_off_owner(std::span<const double> sq, Index owner) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sq.size(); ++k) {
    if (static_cast<Index>(k) != owner) m = std::min(m, sq[k]);
  }
  return m;
}

bool tied(double v, double m) { return v - m <= kTieTolerance * m; }

Index argmin_count(std::span<const double> sq, Index owner, double m) {
  Index count = 0;
  for (std::size_t k = 0; k < sq.size(); ++k) {
    if (static_cast<Index>(k) != owner && tied(sq[k], m)) ++count;
  }
  return count;
}

double max_off_owner(std::span<const double> sq, Index owner) {
  double m = 0.0;
  for (std::size_t k = 0; k < sq.size(); ++k) {
    if (static_cast<Index>(k) != owner) m = std::max(m, sq[k]);
  }
  return m;
}

/// Entropy in bits of the row with stabilized squared distances u and kernel width s.
double normalized_entropy(const std::vector<double>& u, double s) {
  const double inv = 1.0 / (2.0 * s * s);
  double total = 0.0;
  double weighted = 0.0;
  for (double v : u) {
    const double a = v * inv;
    const double w = std::exp(-a);
    total += w;
    weighted += w * a;
  }
  // H = log Z + E[a], converted to bits
  return (std::log(total) + weighted / total) / std::log(2.0);
}

}  // namespace

void PerplexityConfig::validate(Index n) const {
  if (!(rho > 1.0) || !(rho < static_cast<double>(n - 1))) {
    std::ostringstream msg;
    msg << "perplexity " << rho << " must lie in (1, " << n - 1 << ")";
    throw Error(msg.str());
  }
}

PerplexityConfig PerplexityConfig::clipped(double rho, Index n) {
  if (n <= 2) throw Error("perplexity needs more than two points");
  const double upper = static_cast<double>(n - 1);
  if (rho > 1.0 && rho < upper) return {rho};
  if (rho <= 1.0) return {std::min(1.5, 0.5 * (1.0 + upper))};
  // Too large for this n: a third of the admissible range keeps P informative.
  return {1.0 + (upper - 1.0) / 3.0};
}

double InputAffinities::conditional_mass(Index i) const {
  return conditional.col(i).sum() - conditional(i, i);
}

ConditionalRow conditional_row(std::span<const double> sq, Index i, double sigma) {
  const auto n = static_cast<Index>(sq.size());
  if (n <= 2) throw Error("conditional_row: need more than two points");
  if (i < 0 || i >= n) throw Error("conditional_row: index out of range");
  if (!(sigma >= 0.0)) throw Error("conditional_row: sigma must be nonnegative");

  ConditionalRow row{Vector::Zero(n), i, sigma};
  const double m = min_off_owner(sq, i);
  if (sigma == 0.0) {
    const double share = 1.0 / static_cast<double>(argmin_count(sq, i, m));
    for (Index k = 0; k < n; ++k) {
      if (k != i && tied(sq[static_cast<std::size_t>(k)], m)) row.probs(k) = share;
    }
    return row;
  }

  const double inv = 1.0 / (2.0 * sigma * sigma);
  double total = 0.0;
  for (Index k = 0; k < n; ++k) {
    if (k == i) continue;
    const double w = std::exp(-(sq[static_cast<std::size_t>(k)] - m) * inv);
    row.probs(k) = w;
    total += w;
  }
  row.probs /= total;
  return row;
}

ConditionalRow conditional_row(const Dataset& X, Index i, double sigma) {
  const auto D = geometry::pairwise_sq_dists(X);
  std::vector<double> buffer;
  return conditional_row(matrix_row(D.entries(), i, buffer), i, sigma);
}

double entropy_bits(const Vector& probs) {
  double h = 0.0;
  for (Index k = 0; k < probs.size(); ++k) {
    const double p = probs(k);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double row_entropy(const ConditionalRow& row) { return entropy_bits(row.probs); }

double calibrate_sigma(std::span<const double> sq, Index i, const PerplexityConfig& cfg) {
  const auto n = static_cast<Index>(sq.size());
  if (n <= 2) throw Error("calibrate_sigma: need more than two points");
  if (i < 0 || i >= n) throw Error("calibrate_sigma: index out of range");
  // n - 1 itself is the supremum of the row entropy, so a single row accepts it.
  if (!(cfg.rho > 1.0) || !(cfg.rho <= static_cast<double>(n - 1))) {
    std::ostringstream msg;
    msg << "perplexity " << cfg.rho << " must lie in (1, " << n - 1 << "]";
    throw Error(msg.str());
  }
  const double target = std::log2(cfg.rho);

  // Entropy is nondecreasing in sigma; its infimum is the sigma -> 0 limit.
  const double m = min_off_owner(sq, i);
  if (target <= std::log2(static_cast<double>(argmin_count(sq, i, m)))) return 0.0;

  // Work in units of the row's spread so that rescaled or shifted inputs
  // follow the same bisection path.
  const double spread = max_off_owner(sq, i) - m;
  std::vector<double> u;
  u.reserve(sq.size() - 1);
  for (std::size_t k = 0; k < sq.size(); ++k) {
    if (static_cast<Index>(k) != i) u.push_back((sq[k] - m) / spread);
  }
  auto entropy_at = [&](double s) { return normalized_entropy(u, s); };
  const double unit = std::sqrt(spread);

  double lo = 0.0;
  double hi = 1.0;
  double h_hi = entropy_at(hi);
  while (h_hi < target && hi < kSigmaCap) {
    lo = hi;
    hi = std::min(2.0 * hi, kSigmaCap);
    h_hi = entropy_at(hi);
  }
  if (h_hi < target || std::abs(h_hi - target) <= kEntropyTolerance) return hi * unit;

  double mid = hi;
  for (int it = 0; it < kMaxBisections; ++it) {
    mid = 0.5 * (lo + hi);
    const double h = entropy_at(mid);
    if (std::abs(h - target) <= kEntropyTolerance) break;
    if (h < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid * unit;
}

double calibrate_sigma(const Dataset& X, Index i, const PerplexityConfig& cfg) {
  if (X.size() <= 2) throw Error("calibrate_sigma: need more than two points");
  const auto D = geometry::pairwise_sq_dists(X);
  std::vector<double> buffer;
  return calibrate_sigma(matrix_row(D.entries(), i, buffer), i, cfg);
}

InputAffinities input_affinities(const SquaredDistanceMatrix& D, const PerplexityConfig& cfg) {
  const Index n = D.size();
  if (n <= 2) throw Error("input_affinities: need more than two points");
  cfg.validate(n);

  Matrix conditional = Matrix::Zero(n, n);
  std::vector<double> sigmas(static_cast<std::size_t>(n));
  std::vector<double> buffer;
  for (Index i = 0; i < n; ++i) {
    const auto row = matrix_row(D.entries(), i, buffer);
    const double sigma = calibrate_sigma(row, i, cfg);
    sigmas[static_cast<std::size_t>(i)] = sigma;
    conditional.row(i) = conditional_row(row, i, sigma).probs.transpose();
  }

  Matrix joint = Matrix::Zero(n, n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double p = (conditional(i, j) + conditional(j, i)) * scale;
      joint(i, j) = p;
      joint(j, i) = p;
    }
  }
  return {AffinityMatrix(std::move(joint), AffinityKind::input), std::move(conditional),
          std::move(sigmas)};
}

InputAffinities input_affinities(const Dataset& X, const PerplexityConfig& cfg) {
  return input_affinities(geometry::pairwise_sq_dists(X), cfg);
}

Matrix student_t_weights(const Dataset& Y) {
  const Index n = Y.size();
  const Matrix pts = Y.points().transpose();
  Matrix W = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double w = 1.0 / (1.0 + (pts.col(i) - pts.col(j)).squaredNorm());
      W(i, j) = w;
      W(j, i) = w;
    }
  }
  return W;
}

AffinityMatrix output_affinities(const Dataset& Y) {
  if (Y.size() <= 2) throw Error("output_affinities: need more than two points");
  Matrix W = student_t_weights(Y);
  W /= W.sum();
  return AffinityMatrix(std::move(W), AffinityKind::output);
}

}  // namespace tsf::affinity
