#pragma once

#include "tsf/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace tsf::commands {

enum class AttackKind { none, poison_mean, poison_kmeans, outliers };

/**
 * @brief Every parameter a subcommand can take.
 *
 * Ranges are checked by `validate()` for the fields the chosen command uses.
 */
struct RunConfig {
  std::string command;

  // files
  std::string input;
  std::string output;
  std::string report;
  std::string svg;
  bool header = false;
  bool labels_col = false;

  // affinities and optimizer
  double perplexity = 30.0;
  int iters = 1000;
  double lr = 100.0;
  double momentum = 0.8;  // after the exaggeration phase; 0.5 during it
  double exaggeration = 12.0;
  int exaggeration_iters = 250;
  int dim = 2;
  double tol = 1e-5;  // stationarity certificate and early stop
  std::uint64_t seed = 0;

  // metrics / impostor / kmeans
  double eps = 0.01;
  int k = 2;

  // generate
  int simplex = 0;
  int perturbed_simplex = 0;
  int mixture_clusters = 0;
  int per_cluster = 50;
  int mixture_dim = 10;
  double separation = 10.0;
  double stddev = 1.0;

  // attack
  AttackKind attack = AttackKind::none;
  int count = 1;
  int m = 10;
  /// Outlier spread relative to the dataset diameter when `stddev_abs` is not positive.
  double stddev_ratio = 3.7712361663282534;  // sqrt(32) / 1.5
  double stddev_abs = 0.0;

  // outlier
  int index = -1;

  void validate() const;
  nlohmann::ordered_json echo() const;
};

/// Dispatches on `cfg.command`. Returns the process exit code.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

report::Report embed(const RunConfig& cfg);
report::Report impostor(const RunConfig& cfg);
report::Report metrics(const RunConfig& cfg);
report::Report outlier(const RunConfig& cfg);
report::Report attack(const RunConfig& cfg);
report::Report generate(const RunConfig& cfg);
report::Report verify(const RunConfig& cfg);

/// Order-stable fingerprint of an affinity matrix, quantized to 1e-4 of the mean entry.
std::string affinity_fingerprint(const Matrix& P);

}  // namespace tsf::commands
