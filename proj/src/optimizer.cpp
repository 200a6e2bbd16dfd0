#include "tsf/optimizer.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace tsf::optimizer {

namespace {

/**
 * Gradient of KL(P || Q(Y)) with the repulsive term divided by `exaggeration`,
 * written into `grad`. That is the exaggerated gradient rescaled by
 * 1/exaggeration. Returns KL(P || Q) for the unscaled P.
 */
double evaluate(const Matrix& P, double exaggeration, double p_log_p, const Matrix& Y, Matrix& grad) {
  const Index n = Y.rows();
  const Index d = Y.cols();
  const Matrix pts = Y.transpose();

  Matrix W = Matrix::Zero(n, n);
  double z = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double w = 1.0 / (1.0 + (pts.col(i) - pts.col(j)).squaredNorm());
      W(i, j) = w;
      W(j, i) = w;
      z += 2.0 * w;
    }
  }

  double cross = 0.0;  // sum P_ij log w_ij
  Matrix g = Matrix::Zero(d, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double w = W(i, j);
      const double p = P(i, j);
      if (p > 0.0) cross += p * std::log(w);
      const double coeff = 4.0 * (p - w / (z * exaggeration)) * w;
      g.col(j) += coeff * (pts.col(j) - pts.col(i));
    }
  }
  grad = g.transpose();
  return p_log_p - cross + std::log(z);
}

double sum_p_log_p(const Matrix& P) {
  double s = 0.0;
  for (Index j = 0; j < P.cols(); ++j) {
    for (Index i = 0; i < P.rows(); ++i) {
      if (i != j && P(i, j) > 0.0) s += P(i, j) * std::log(P(i, j));
    }
  }
  return s;
}

}  // namespace

void OptimizerConfig::validate(Index n) const {
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0) || !(final_momentum >= 0.0 && final_momentum < 1.0)) {
    throw Error("momentum must lie in [0, 1)");
  }
  if (iterations <= 0) throw Error("iterations must be positive");
  if (!(exaggeration_factor >= 1.0)) throw Error("exaggeration factor must be at least 1");
  if (exaggeration_iters < 0 || exaggeration_iters > iterations) {
    throw Error("exaggeration iterations must lie in [0, iterations]");
  }
  if (output_dim < 1) throw Error("output dimension must be at least 1");
  if (!(gradient_tolerance >= 0.0)) throw Error("gradient tolerance must be nonnegative");
  if (init == InitKind::random_gaussian && !(init_scale > 0.0)) {
    throw Error("initial scale must be positive");
  }
  if (init == InitKind::provided) {
    if (initial.size() != n || initial.dim() != output_dim) {
      throw Error("provided initial layout does not match n x output_dim");
    }
  }
}

double kl_loss(const AffinityMatrix& P, const AffinityMatrix& Q) {
  if (P.size() != Q.size()) throw Error("kl_loss: affinity matrices differ in size");
  double loss = 0.0;
  for (Index j = 0; j < P.size(); ++j) {
    for (Index i = 0; i < P.size(); ++i) {
      if (i == j) continue;
      const double p = P(i, j);
      if (p <= 0.0) continue;
      const double q = Q(i, j);
      if (q <= 0.0) return std::numeric_limits<double>::infinity();
      loss += p * std::log(p / q);
    }
  }
  return loss;
}

Matrix gradient(const AffinityMatrix& P, const Dataset& Y) {
  if (P.size() != Y.size()) throw Error("gradient: P and Y differ in point count");
  Matrix grad;
  evaluate(P.entries(), 1.0, 0.0, Y.points(), grad);
  return grad;
}

double max_gradient(const AffinityMatrix& P, const Dataset& Y) {
  return gradient(P, Y).cwiseAbs().maxCoeff();
}

bool is_stationary(const AffinityMatrix& P, const Dataset& Y, double tol) {
  return max_gradient(P, Y) <= tol;
}

Dataset initial_layout(Index n, const OptimizerConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, cfg.init_scale);
  Matrix Y(n, cfg.output_dim);
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < cfg.output_dim; ++c) Y(i, c) = normal(rng);
  }
  return Dataset(std::move(Y));
}

RunResult run(const AffinityMatrix& P, const OptimizerConfig& cfg) {
  const Index n = P.size();
  if (n <= 2) throw Error("run: need more than two points");
  cfg.validate(n);

  Matrix Y = cfg.init == InitKind::provided ? cfg.initial.points() : initial_layout(n, cfg).points();
  Matrix velocity = Matrix::Zero(n, cfg.output_dim);
  Matrix grad;
  const double p_log_p = sum_p_log_p(P.entries());

  Trace trace;
  trace.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int it = 0; it < cfg.iterations; ++it) {
    const bool exaggerating = it < cfg.exaggeration_iters;
    const double factor = exaggerating ? cfg.exaggeration_factor : 1.0;
    const double loss = evaluate(P.entries(), factor, p_log_p, Y, grad);
    const double gmax = grad.cwiseAbs().maxCoeff();
    trace.push_back({it, loss, gmax});

    if (!std::isfinite(loss) || !std::isfinite(gmax)) {
      std::ostringstream msg;
      msg << "optimizer diverged at iteration " << it;
      throw DivergenceError(msg.str(), std::move(trace));
    }
    if (!exaggerating && cfg.gradient_tolerance > 0.0 && gmax <= cfg.gradient_tolerance) break;

    const double mom = exaggerating ? cfg.momentum : cfg.final_momentum;
    velocity = mom * velocity - cfg.learning_rate * grad;
    Y += velocity;
  }
  if (!Y.allFinite()) throw DivergenceError("optimizer produced non-finite coordinates", std::move(trace));
  return {Dataset(std::move(Y)), std::move(trace)};
}

}  // namespace tsf::optimizer
