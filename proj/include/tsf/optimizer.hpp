#pragma once

#include "tsf/affinity.hpp"
#include "tsf/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tsf::optimizer {

enum class InitKind { random_gaussian, provided };

/**
 * @brief Gradient descent settings.
 *
 * During the first `exaggeration_iters` iterations the step follows the
 * gradient for `exaggeration_factor * P`, divided by the factor so the
 * attractive term keeps the scale of P, and uses `momentum`; afterwards the
 * true P and `final_momentum` are used. When `gradient_tolerance` is positive, the
 * run stops as soon as a post-exaggeration iterate has max |gradient| at or
 * below it.
 */
struct OptimizerConfig {
  double learning_rate = 100.0;
  double momentum = 0.5;
  double final_momentum = 0.8;
  int iterations = 1000;
  double exaggeration_factor = 12.0;
  int exaggeration_iters = 250;
  InitKind init = InitKind::random_gaussian;
  double init_scale = 1e-4;
  Dataset initial;  // used when init == provided
  std::uint64_t seed = 0;
  Index output_dim = 2;
  double gradient_tolerance = 0.0;

  void validate(Index n) const;
};

struct TraceRecord {
  int iteration = 0;
  double loss = 0.0;
  double max_gradient = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

using Trace = std::vector<TraceRecord>;

struct RunResult {
  Dataset embedding;
  Trace trace;
};

/// Thrown when the loss stops being finite; carries the trace up to that point.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, Trace trace) : Error(what), trace_(std::move(trace)) {}
  const Trace& trace() const { return trace_; }

 private:
  Trace trace_;
};

/// KL(P || Q) over off-diagonal pairs; +infinity when some P_ij > 0 has Q_ij = 0.
double kl_loss(const AffinityMatrix& P, const AffinityMatrix& Q);

/// Row i is 4 sum_j (P_ij - Q_ij)(y_i - y_j) / (1 + |y_i - y_j|^2).
Matrix gradient(const AffinityMatrix& P, const Dataset& Y);

/// Largest absolute gradient entry.
double max_gradient(const AffinityMatrix& P, const Dataset& Y);

/// True iff every gradient entry is at most `tol` in magnitude.
bool is_stationary(const AffinityMatrix& P, const Dataset& Y, double tol);

/// Gaussian initial layout drawn from the config's seed.
Dataset initial_layout(Index n, const OptimizerConfig& cfg);

RunResult run(const AffinityMatrix& P, const OptimizerConfig& cfg);

}  // namespace tsf::optimizer
