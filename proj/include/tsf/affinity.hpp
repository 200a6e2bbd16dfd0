#pragma once

#include "tsf/types.hpp"

#include <span>
#include <vector>

/**
 * @file affinity.hpp
 *
 * @brief Perplexity-calibrated Gaussian input affinities and Student-t output
 * affinities.
 *
 * Input side: every point i gets a conditional distribution over its
 * neighbours, P_{j|i} proportional to exp(-|x_i - x_j|^2 / (2 sigma_i^2)),
 * with sigma_i chosen so that the distribution has entropy log2(perplexity).
 * The joint matrix is P_ij = (P_{i|j} + P_{j|i}) / (2n).
 *
 * Output side: Q_ij proportional to (1 + |y_i - y_j|^2)^{-1}, normalized over
 * all ordered pairs.
 */

namespace tsf::affinity {

/// Conditional neighbour distribution of one point.
struct ConditionalRow {
  Vector probs;
  Index owner = 0;
  double sigma = 0.0;
};

/// Perplexity, the effective neighbour count. Valid for 1 < rho < n - 1.
struct PerplexityConfig {
  double rho = 30.0;

  void validate(Index n) const;
  /// `rho` moved into the open interval (1, n - 1) when it falls outside.
  static PerplexityConfig clipped(double rho, Index n);
};

/// Joint input affinities together with the conditional rows they were built from.
struct InputAffinities {
  AffinityMatrix joint;
  /// Row i holds P_{.|i}.
  Matrix conditional;
  std::vector<double> sigmas;

  /// sum_{j != i} P_{i|j}: how much conditional mass the other points assign to i.
  double conditional_mass(Index i) const;
};

ConditionalRow conditional_row(const Dataset& X, Index i, double sigma);

/// Same as above from a precomputed row of squared distances (entry i ignored).
ConditionalRow conditional_row(std::span<const double> sq_dists, Index i, double sigma);

/// Shannon entropy in bits, 0 log 0 := 0.
double row_entropy(const ConditionalRow& row);
double entropy_bits(const Vector& probs);

double calibrate_sigma(const Dataset& X, Index i, const PerplexityConfig& cfg);
double calibrate_sigma(std::span<const double> sq_dists, Index i, const PerplexityConfig& cfg);

InputAffinities input_affinities(const Dataset& X, const PerplexityConfig& cfg);
/// Affinities straight from squared distances; used to compare a dataset with
/// its shifted or rescaled distance matrices without a realization step.
InputAffinities input_affinities(const SquaredDistanceMatrix& D, const PerplexityConfig& cfg);

/// Student-t kernel weights (1 + |y_i - y_j|^2)^{-1} with zero diagonal.
Matrix student_t_weights(const Dataset& Y);

AffinityMatrix output_affinities(const Dataset& Y);

}  // namespace tsf::affinity
