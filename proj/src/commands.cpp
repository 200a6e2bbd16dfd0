#include "tsf/commands.hpp"

#include "tsf/affinity.hpp"
#include "tsf/geometry.hpp"
#include "tsf/injection.hpp"
#include "tsf/invariance.hpp"
#include "tsf/io.hpp"
#include "tsf/optimizer.hpp"
#include "tsf/outliers.hpp"
#include "tsf/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

namespace tsf::commands {

using report::CheckResult;
using report::IndexValues;
using report::Report;

namespace {

const char* attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::poison_mean: return "poison-mean";
    case AttackKind::poison_kmeans: return "poison-kmeans";
    case AttackKind::outliers: return "outliers";
    case AttackKind::none: break;
  }
  return "none";
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

io::CsvData load(const RunConfig& cfg) {
  return io::read_csv(cfg.input, io::CsvOptions{cfg.header, cfg.labels_col});
}

Dataset select_rows(const Dataset& X, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), X.dim());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = X.row(rows[r]);
  return Dataset(std::move(out));
}

affinity::PerplexityConfig perplexity_for(const RunConfig& cfg, Index n, Report& rep) {
  const auto p = affinity::PerplexityConfig::clipped(cfg.perplexity, n);
  rep.values["perplexity"] = p.rho;
  if (p.rho != cfg.perplexity) {
    rep.notes["perplexity"] = "requested perplexity " + std::to_string(cfg.perplexity) + " clipped to " +
                              std::to_string(p.rho) + " for n = " + std::to_string(n);
  }
  return p;
}

optimizer::OptimizerConfig optimizer_config(const RunConfig& cfg) {
  optimizer::OptimizerConfig oc;
  oc.learning_rate = cfg.lr;
  oc.final_momentum = cfg.momentum;
  oc.iterations = cfg.iters;
  oc.exaggeration_factor = cfg.exaggeration;
  oc.exaggeration_iters = std::min(cfg.exaggeration_iters, cfg.iters);
  oc.seed = cfg.seed;
  oc.output_dim = cfg.dim;
  oc.gradient_tolerance = cfg.tol;
  return oc;
}

IndexValues index_values(const Dataset& X, const Partition& part, const std::string& source) {
  IndexValues v;
  v.labels_source = source;
  if (X.size() > part.k()) {
    v.silhouette = saliency::silhouette(X, part);
    v.calinski_harabasz = saliency::calinski_harabasz(X, part);
  }
  const auto sizes = part.cluster_sizes();
  if (std::all_of(sizes.begin(), sizes.end(), [](Index s) { return s > 1; })) v.dunn = saliency::dunn(X, part);
  return v;
}

/// Labels used for scoring: supplied ones, or k-means on `reference` (restricted to scored rows).
std::pair<Partition, std::string> scoring_labels(const io::CsvData& data, const Dataset& reference,
                                                 const RunConfig& cfg) {
  if (data.labels) return {*data.labels, "supplied"};
  return {saliency::kmeans(select_rows(reference, data.scored_rows), cfg.k, cfg.seed), "kmeans"};
}

CheckResult check_at_most(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::pair<double, double> off_diagonal_range(const SquaredDistanceMatrix& D) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index j = 0; j < D.size(); ++j) {
    for (Index i = 0; i < D.size(); ++i) {
      if (i == j) continue;
      lo = std::min(lo, D(i, j));
      hi = std::max(hi, D(i, j));
    }
  }
  return {lo, hi};
}

std::vector<std::int64_t> balanced_labels(Index n, int k) {
  std::vector<std::int64_t> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = (i * k) / n;
  return labels;
}

void write_outputs(const RunConfig& cfg, const Dataset& X, const std::vector<std::int64_t>* labels) {
  if (!cfg.output.empty()) io::write_csv(X, cfg.output, labels);
  if (!cfg.svg.empty()) io::emit_scatter_svg(X, labels, cfg.svg);
}

Report start(const RunConfig& cfg) {
  Report rep;
  rep.command = cfg.command;
  rep.config = cfg.echo();
  return rep;
}

}  // namespace

void RunConfig::validate() const {
  static const std::set<std::string> known = {"embed", "impostor", "metrics", "outlier",
                                              "attack", "generate", "verify"};
  require(known.count(command) == 1, "unknown command '" + command + "'");
  require(command == "generate" || !input.empty(), command + ": an input CSV is required");
  require(perplexity > 1.0, "--perplexity must exceed 1");
  require(iters > 0, "--iters must be positive");
  require(lr > 0.0, "--lr must be positive");
  require(momentum >= 0.0 && momentum < 1.0, "--momentum must lie in [0, 1)");
  require(exaggeration >= 1.0, "--exaggeration must be at least 1");
  require(exaggeration_iters >= 0 && exaggeration_iters <= iters, "--exaggeration-iters must lie in [0, --iters]");
  require(dim >= 1, "--dim must be at least 1");
  require(tol >= 0.0, "--tol must be nonnegative");
  require(eps > 0.0, "--eps must be positive");
  require(k >= (command == "attack" ? 1 : 2), "--k is out of range");

  if (command == "generate") {
    const int chosen = (simplex > 0) + (perturbed_simplex > 0) + (mixture_clusters > 0);
    require(chosen == 1, "generate: choose exactly one of --simplex, --perturbed-simplex, --mixture");
    require(perturbed_simplex == 0 || eps < 1.0, "generate: --eps must be below 1 for a perturbed simplex");
    require(mixture_clusters == 0 || (per_cluster >= 1 && mixture_dim >= 1 && stddev > 0.0),
            "generate: mixture needs --per-cluster >= 1, --mix-dim >= 1 and --stddev > 0");
    require(mixture_clusters == 0 || mixture_clusters <= mixture_dim + 1,
            "generate: --mixture needs at most --mix-dim + 1 clusters");
  }
  if (command == "attack") {
    require(attack != AttackKind::none, "attack: choose one of --poison-mean, --poison-kmeans, --outliers");
    require(count >= 1, "attack: --count must be at least 1");
    require(m >= 1, "attack: --m must be at least 1");
    require(stddev_abs > 0.0 || stddev_ratio > 0.0, "attack: outlier spread must be positive");
  }
}

nlohmann::ordered_json RunConfig::echo() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["input"] = input;
  j["output"] = output;
  j["report"] = report;
  j["svg"] = svg;
  j["header"] = header;
  j["labels_col"] = labels_col;
  j["perplexity"] = perplexity;
  j["iters"] = iters;
  j["lr"] = lr;
  j["momentum"] = momentum;
  j["exaggeration"] = exaggeration;
  j["exaggeration_iters"] = exaggeration_iters;
  j["dim"] = dim;
  j["tol"] = tol;
  j["seed"] = seed;
  j["eps"] = eps;
  j["k"] = k;
  if (command == "generate") {
    j["simplex"] = simplex;
    j["perturbed_simplex"] = perturbed_simplex;
    j["mixture_clusters"] = mixture_clusters;
    j["per_cluster"] = per_cluster;
    j["mixture_dim"] = mixture_dim;
    j["separation"] = separation;
    j["stddev"] = stddev;
  }
  if (command == "attack") {
    j["attack"] = attack_name(attack);
    j["count"] = count;
    j["m"] = m;
    j["stddev_ratio"] = stddev_ratio;
    j["stddev_abs"] = stddev_abs;
  }
  if (command == "outlier") j["index"] = index;
  return j;
}

std::string affinity_fingerprint(const Matrix& P) {
  const double n2 = static_cast<double>(P.rows()) * static_cast<double>(P.cols());
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(P.rows()));
  for (Index j = 0; j < P.cols(); ++j) {
    for (Index i = 0; i < P.rows(); ++i) {
      mix(static_cast<std::uint64_t>(std::llround(P(i, j) * n2 * 1e4)));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Report embed(const RunConfig& cfg) {
  Report rep = start(cfg);
  const auto data = load(cfg);
  const Dataset& X = data.data;
  const auto P = affinity::input_affinities(X, perplexity_for(cfg, X.size(), rep));
  rep.notes["p_fingerprint"] = affinity_fingerprint(P.joint.entries());

  const auto result = optimizer::run(P.joint, optimizer_config(cfg));
  const Dataset& Y = result.embedding;
  const double gmax = optimizer::max_gradient(P.joint, Y);
  rep.stationarity = report::StationarityCertificate{gmax, cfg.tol, gmax <= cfg.tol};
  rep.trace = report::TraceSummary{static_cast<int>(result.trace.size()), result.trace.front().loss,
                                   result.trace.back().loss, result.trace.back().max_gradient};
  rep.values["final_kl"] = optimizer::kl_loss(P.joint, affinity::output_affinities(Y));

  const auto [labels, source] = scoring_labels(data, Y, cfg);
  rep.metrics["input"] = index_values(select_rows(X, data.scored_rows), labels, source);
  rep.metrics["embedding"] = index_values(select_rows(Y, data.scored_rows), labels, source);
  rep.outlier = outliers::outlier_number(Y, P);

  write_outputs(cfg, Y, data.raw_labels.empty() ? nullptr : &data.raw_labels);
  return rep;
}

Report impostor(const RunConfig& cfg) {
  Report rep = start(cfg);
  const auto data = load(cfg);
  const Dataset& X = data.data;
  const Dataset impostor = invariance::make_impostor(X, cfg.eps);

  const auto D = geometry::pairwise_sq_dists(impostor);
  const auto [lo, hi] = off_diagonal_range(D);
  rep.values["impostor_min_sq_dist"] = lo;
  rep.values["impostor_max_sq_dist"] = hi;
  rep.checks.push_back(check_at_most("impostor_band", std::max(1.0 - lo, hi - (1.0 + cfg.eps)), 1e-9));

  if (X.size() > 2) {
    const auto rho = perplexity_for(cfg, X.size(), rep);
    const auto P = affinity::input_affinities(X, rho);
    const auto P_imp = affinity::input_affinities(impostor, rho);
    rep.notes["p_fingerprint"] = affinity_fingerprint(P.joint.entries());
    rep.notes["impostor_p_fingerprint"] = affinity_fingerprint(P_imp.joint.entries());
    rep.checks.push_back(check_at_most("affinity_match", max_abs_diff(P.joint.entries(), P_imp.joint.entries()), 1e-9));
  }
  if (data.labels) {
    rep.metrics["input"] = index_values(select_rows(X, data.scored_rows), *data.labels, "supplied");
    rep.metrics["impostor"] = index_values(select_rows(impostor, data.scored_rows), *data.labels, "supplied");
  }
  write_outputs(cfg, impostor, data.raw_labels.empty() ? nullptr : &data.raw_labels);
  return rep;
}

Report metrics(const RunConfig& cfg) {
  Report rep = start(cfg);
  const auto data = load(cfg);
  const auto [labels, source] = scoring_labels(data, data.data, cfg);
  rep.metrics["input"] = index_values(select_rows(data.data, data.scored_rows), labels, source);
  if (!cfg.svg.empty()) {
    io::emit_scatter_svg(data.data, data.raw_labels.empty() ? nullptr : &data.raw_labels, cfg.svg);
  }
  return rep;
}

Report outlier(const RunConfig& cfg) {
  Report rep = start(cfg);
  const auto data = load(cfg);
  const Dataset& Y = data.data;
  require(cfg.index < Y.size(), "outlier: --index out of range");
  rep.outlier = cfg.index >= 0 ? outliers::outlier_number_for(Y, cfg.index) : outliers::outlier_number(Y);
  if (Y.size() > 2) {
    const Index w = rep.outlier->witness_index;
    const double mass = outliers::q_row_mass(Y, w);
    const double bound = outliers::qsum_bound(Y, w);
    rep.values["q_row_mass"] = mass;
    rep.values["qsum_bound"] = bound;
    rep.checks.push_back(check_at_most("q_row_mass_bound", mass - bound, 1e-12));
  }
  return rep;
}

Report attack(const RunConfig& cfg) {
  Report rep = start(cfg);
  const auto data = load(cfg);
  const Dataset& X = data.data;

  Dataset attacked;
  switch (cfg.attack) {
    case AttackKind::poison_mean: attacked = injection::poison_mean(X); break;
    case AttackKind::poison_kmeans:
      attacked = injection::poison_kmeans_average(X, cfg.k, cfg.m, cfg.count, cfg.seed);
      break;
    case AttackKind::outliers: {
      const double spread = cfg.stddev_abs > 0.0 ? cfg.stddev_abs : cfg.stddev_ratio * geometry::diameter(X);
      rep.values["outlier_stddev"] = spread;
      attacked = injection::inject_outliers(X, cfg.count, spread, cfg.seed);
      break;
    }
    case AttackKind::none: throw Error("attack: no attack selected");
  }
  const Index injected = attacked.size() - X.size();
  rep.values["injected"] = static_cast<double>(injected);

  double min_alpha = std::numeric_limits<double>::infinity();
  for (Index i = X.size(); i < attacked.size(); ++i) {
    Matrix with_one(X.size() + 1, X.dim());
    with_one.topRows(X.size()) = X.points();
    with_one.row(X.size()) = attacked.row(i);
    min_alpha = std::min(min_alpha, outliers::outlier_number_for(Dataset(std::move(with_one)), X.size()).alpha);
  }
  rep.values["min_injected_alpha"] = min_alpha;

  std::vector<std::int64_t> labels = data.raw_labels.empty()
                                         ? std::vector<std::int64_t>(static_cast<std::size_t>(X.size()), 0)
                                         : data.raw_labels;
  labels.resize(static_cast<std::size_t>(attacked.size()), -1);
  write_outputs(cfg, attacked, &labels);
  return rep;
}

Report generate(const RunConfig& cfg) {
  Report rep = start(cfg);
  Dataset X;
  std::vector<std::int64_t> labels;
  if (cfg.simplex > 0) {
    X = injection::regular_simplex(cfg.simplex);
  } else if (cfg.perturbed_simplex > 0) {
    X = injection::perturbed_simplex(cfg.perturbed_simplex, cfg.eps, cfg.seed);
  } else {
    injection::MixtureSpec spec;
    spec.dim = cfg.mixture_dim;
    for (int c = 0; c < cfg.mixture_clusters; ++c) {
      Vector mean = Vector::Zero(cfg.mixture_dim);
      if (c > 0) mean(c - 1) = cfg.separation;
      spec.components.push_back({mean, cfg.stddev, cfg.per_cluster});
    }
    auto sample = injection::sample_mixture(spec, cfg.seed);
    X = std::move(sample.data);
    for (Index i = 0, c = 0; c < cfg.mixture_clusters; ++c) {
      for (int r = 0; r < cfg.per_cluster; ++r, ++i) labels.push_back(c);
    }
  }
  if (labels.empty() && cfg.labels_col) labels = balanced_labels(X.size(), cfg.k);
  rep.values["n"] = static_cast<double>(X.size());
  rep.values["diameter"] = geometry::diameter(X);
  write_outputs(cfg, X, labels.empty() ? nullptr : &labels);
  return rep;
}

Report verify(const RunConfig& cfg) {
  Report rep = start(cfg);
  const auto data = load(cfg);
  const Dataset& X = data.data;
  const Index n = X.size();
  require(n > 2, "verify: need more than two points");

  const auto D = geometry::pairwise_sq_dists(X);
  rep.checks.push_back(
      {"schoenberg_embeddable", geometry::min_gram_eigenvalue(D), -1e-8 * static_cast<double>(n),
       geometry::schoenberg_embeddable(D, 1e-8 * static_cast<double>(n))});

  const Dataset realized = geometry::classical_mds(D, n - 1);
  const Matrix Dr = geometry::pairwise_sq_dists(realized).entries();
  const double scale = std::max(D.max_entry(), std::numeric_limits<double>::min());
  rep.checks.push_back(check_at_most("mds_round_trip", max_abs_diff(Dr, D.entries()) / scale, 1e-8));

  const auto rho = perplexity_for(cfg, n, rep);
  const auto P = affinity::input_affinities(D, rho);
  for (double C : {0.5, 3.0}) {
    const auto Pc = affinity::input_affinities(invariance::realize_shift(X, C), rho);
    rep.checks.push_back(check_at_most("additive_invariance_C=" + std::to_string(C),
                                       max_abs_diff(P.joint.entries(), Pc.joint.entries()), 1e-9));
  }
  for (double c : {0.1, 10.0}) {
    const auto Pc = affinity::input_affinities(Dataset(X.points() * c), rho);
    rep.checks.push_back(check_at_most("multiplicative_invariance_c=" + std::to_string(c),
                                       max_abs_diff(P.joint.entries(), Pc.joint.entries()), 1e-7));
  }

  if (D.max_entry() > 0.0) {
    const Dataset imp = invariance::make_impostor(X, cfg.eps);
    const auto Di = geometry::pairwise_sq_dists(imp);
    const auto [lo, hi] = off_diagonal_range(Di);
    rep.checks.push_back(check_at_most("impostor_band", std::max(1.0 - lo, hi - (1.0 + cfg.eps)), 1e-9));
    const double shrink = 1.0 / (1.0 + cfg.eps / 2.0);
    const double eps_prime = cfg.eps / (2.0 + cfg.eps);
    const auto [slo, shi] = off_diagonal_range(invariance::scale_sq_dists(Di, shrink));
    rep.checks.push_back(check_at_most("impostor_delta_membership",
                                       std::max((1.0 - eps_prime) - slo, shi - (1.0 + eps_prime)), 1e-9));
    const auto Pi = affinity::input_affinities(Di, rho);
    rep.checks.push_back(check_at_most("impostor_affinity_match", max_abs_diff(P.joint.entries(), Pi.joint.entries()), 1e-9));
  }

  double floor_violation = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    floor_violation = std::max(floor_violation, 1.0 / (2.0 * static_cast<double>(n)) - P.joint.entries().row(i).sum());
  }
  rep.checks.push_back(check_at_most("p_row_mass_floor", floor_violation, 1e-12));

  double q_violation = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    q_violation = std::max(q_violation, outliers::q_row_mass(X, i) - outliers::qsum_bound(X, i));
  }
  rep.checks.push_back(check_at_most("q_row_mass_bound", q_violation, 1e-12));
  rep.notes["p_fingerprint"] = affinity_fingerprint(P.joint.entries());
  return rep;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    Report rep;
    if (cfg.command == "embed") rep = embed(cfg);
    else if (cfg.command == "impostor") rep = impostor(cfg);
    else if (cfg.command == "metrics") rep = metrics(cfg);
    else if (cfg.command == "outlier") rep = outlier(cfg);
    else if (cfg.command == "attack") rep = attack(cfg);
    else if (cfg.command == "generate") rep = generate(cfg);
    else rep = verify(cfg);

    if (!cfg.report.empty()) {
      report::write_report(rep, cfg.report);
    } else {
      out << report::serialize(rep);
    }
    for (const auto& c : rep.checks) {
      if (!c.passed) err << cfg.command << ": check '" << c.name << "' failed (" << c.value << " > " << c.tolerance << ")\n";
    }
    return rep.all_checks_passed() ? 0 : 3;
  } catch (const std::exception& e) {
    err << cfg.command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tsf::commands
