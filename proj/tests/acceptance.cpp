// Acceptance run: one PASS/FAIL line per criterion. Criteria listed with
// --known-failure are still run and printed but do not affect the exit code.

#include "fixtures.hpp"
#include "oracles.hpp"

#include "tsf/affinity.hpp"
#include "tsf/geometry.hpp"
#include "tsf/injection.hpp"
#include "tsf/invariance.hpp"
#include "tsf/io.hpp"
#include "tsf/optimizer.hpp"
#include "tsf/outliers.hpp"
#include "tsf/report.hpp"
#include "tsf/saliency.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace tsf;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Dataset random_dataset(Index n, Index d, std::mt19937_64& rng) { return Dataset(oracle::random_matrix(n, d, rng)); }

/// Labels for random instances: every one of k clusters gets at least two points.
std::vector<int> random_labels(Index n, int k, std::mt19937_64& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

std::vector<std::int64_t> widen(const Partition& p) { return {p.labels().begin(), p.labels().end()}; }

Dataset first_rows(const Dataset& Y, Index n) { return Dataset(Y.points().topRows(n)); }

Outcome p_invariance() {
  std::mt19937_64 rng(101);
  double shift_dev = 0.0;
  double scale_dev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = random_dataset(20, 19, rng);
    const affinity::PerplexityConfig rho{5.0};
    const Matrix P = affinity::input_affinities(X, rho).joint.entries();
    for (double C : {0.5, 3.0}) {
      const auto shifted = invariance::realize_shift(X, C);
      shift_dev = std::max(shift_dev, max_abs_diff(P, affinity::input_affinities(shifted, rho).joint.entries()));
    }
    for (double c : {0.1, 10.0}) {
      const Dataset scaled(c * X.points());
      scale_dev = std::max(scale_dev, max_abs_diff(P, affinity::input_affinities(scaled, rho).joint.entries()));
    }
  }
  return {shift_dev <= 1e-9 && scale_dev <= 1e-7,
          fmt("max |dP| shift %.3g (tol 1e-9), scale %.3g (tol 1e-7)", shift_dev, scale_dev)};
}

Outcome impostor_indistinguishable() {
  const auto mix = injection::sample_mixture(injection::MixtureSpec::two_clusters(10, 10.0, 1.0, 20), 7);
  const auto imp = invariance::make_impostor(mix.data, 0.01);
  const auto D = geometry::pairwise_sq_dists(imp);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index i = 0; i < D.size(); ++i) {
    for (Index j = 0; j < D.size(); ++j) {
      if (i == j) continue;
      lo = std::min(lo, D(i, j));
      hi = std::max(hi, D(i, j));
    }
  }
  const double band_slack = 1e-9;
  const bool band = lo >= 1.0 - band_slack && hi <= 1.01 + band_slack;
  const double sil = saliency::silhouette(imp, mix.labels);

  const affinity::PerplexityConfig rho{20.0};
  const auto P = affinity::input_affinities(mix.data, rho).joint;
  const auto P_imp = affinity::input_affinities(imp, rho).joint;
  const double dp = max_abs_diff(P.entries(), P_imp.entries());

  auto trace_deviation = [&](double lr) {
    optimizer::OptimizerConfig cfg;
    cfg.seed = 11;
    cfg.learning_rate = lr;
    const auto a = optimizer::run(P, cfg).trace;
    const auto b = optimizer::run(P_imp, cfg).trace;
    double dev = a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < std::min(a.size(), b.size()); ++t) {
      dev = std::max({dev, std::abs(a[t].loss - b[t].loss), std::abs(a[t].max_gradient - b[t].max_gradient)});
    }
    return dev;
  };
  const double dt = trace_deviation(30.0);
  // lr 100 is chaotic at this size, so rounding-level differences in P grow; reported for reference only
  const double dt_chaotic = trace_deviation(100.0);
  return {band && std::abs(sil) <= 0.02 && dp <= 1e-9 && dt <= 1e-9,
          fmt("sq dists in [%.12f, %.12f], |S| %.3g (tol 0.02), max |dP| %.3g (tol 1e-9), trace dev at lr 30 %.3g "
              "(tol 1e-9); lr 100 for reference %.3g",
              lo, hi, std::abs(sil), dp, dt, dt_chaotic)};
}

Outcome exact_minimizer() {
  std::string detail;
  bool ok = true;
  for (auto [n, rho] : {std::pair<Index, double>{4, 2.0}, {10, 6.0}}) {
    const auto P = affinity::input_affinities(fixture::two_cluster_binary(n), {rho});
    const auto Y = fixture::two_cluster_minimizer(n, P.sigmas[0]);
    const double kl = optimizer::kl_loss(P.joint, affinity::output_affinities(Y));
    const double g = optimizer::max_gradient(P.joint, Y);
    const double s = saliency::silhouette(Y, Partition(fixture::two_cluster_labels(n), 2));
    ok = ok && kl < 1e-12 && g < 1e-10 && s == 1.0;
    detail += fmt("n=%d: kl %.3g, grad %.3g, silhouette %.17g; ", static_cast<int>(n), kl, g, s);
  }
  detail += "(tol kl 1e-12, grad 1e-10, silhouette = 1)";
  return {ok, detail};
}

Outcome saliency_gap() {
  const auto mix = injection::sample_mixture(injection::MixtureSpec::two_clusters(10, 10.0, 1.0, 50), 3);
  const auto imp = invariance::make_impostor(mix.data, 0.01);
  const double input_sil = saliency::silhouette(imp, mix.labels);
  optimizer::OptimizerConfig cfg;
  cfg.seed = 5;
  const auto Y = optimizer::run(affinity::input_affinities(imp, {30.0}).joint, cfg).embedding;
  const double output_sil = saliency::silhouette(Y, saliency::kmeans(Y, 2, 0));
  return {output_sil >= 0.8 && input_sil <= 0.05,
          fmt("impostor input silhouette %.4f (max 0.05), embedding silhouette %.4f (min 0.8)", input_sil,
              output_sil)};
}

Outcome perturbation_instability() {
  int good = 0;
  std::string detail = "distinct elbow counts per repetition:";
  for (int rep = 0; rep < 5; ++rep) {
    std::set<int> counts;
    for (int s = 0; s < 10; ++s) {
      const auto X = injection::perturbed_simplex(100, 0.01, static_cast<std::uint64_t>(1000 * rep + s));
      optimizer::OptimizerConfig cfg;
      cfg.seed = 7;
      const auto Y = optimizer::run(affinity::input_affinities(X, {30.0}).joint, cfg).embedding;
      counts.insert(saliency::elbow_cluster_count(Y, 6, 0));
    }
    if (counts.size() >= 3) ++good;
    detail += fmt(" %d", static_cast<int>(counts.size()));
  }
  detail += fmt(" (need >= 3 in >= 4 of 5, got %d)", good);
  return {good >= 4, detail};
}

Outcome poison_point() {
  const auto start = std::chrono::steady_clock::now();
  int good = 0;
  std::string detail = "silhouette drops:";
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto mix = injection::sample_mixture(injection::MixtureSpec::two_clusters(500, 15.0, 1.0, 100), seed);
    const auto poisoned = injection::poison_mean(mix.data);
    optimizer::OptimizerConfig cfg;
    cfg.seed = seed;
    const auto clean = optimizer::run(affinity::input_affinities(mix.data, {30.0}).joint, cfg).embedding;
    const auto attacked = optimizer::run(affinity::input_affinities(poisoned, {30.0}).joint, cfg).embedding;
    const double drop = saliency::silhouette(clean, mix.labels) -
                        saliency::silhouette(first_rows(attacked, mix.data.size()), mix.labels);
    if (drop >= 0.3) ++good;
    detail += fmt(" %.3f", drop);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail += fmt(" (need >= 0.3 in >= 3 of 5, got %d); %.1f s (max 180)", good, secs);
  return {good >= 3 && secs <= 180.0, detail};
}

/// Gaussian bulk plus one point whose outlier number, measured in the input, is `alpha_in`.
Dataset with_outlier(const Dataset& bulk, double alpha_in, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector u = oracle::random_matrix(bulk.dim(), 1, rng).col(0);
  u.normalize();
  const Vector c = geometry::centroid(bulk);
  auto place = [&](double t) { return injection::append_rows(bulk, (c + t * u).transpose()); };
  auto alpha_at = [&](double t) { return outliers::outlier_number_for(place(t), bulk.size()).alpha; };
  double lo = 0.0;
  double hi = 1.0;
  while (alpha_at(hi) < alpha_in) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (alpha_at(mid) < alpha_in ? lo : hi) = mid;
  }
  return place(hi);
}

struct OutlierCase {
  std::uint64_t seed;
  double alpha_in;
  Dataset X;
};

std::vector<OutlierCase> outlier_cases() {
  std::vector<OutlierCase> cases;
  for (std::uint64_t seed : {0, 1, 2}) {
    const injection::MixtureSpec bulk_spec{{{Vector::Zero(10), 1.0, 100}}, 10};
    const auto bulk = injection::sample_mixture(bulk_spec, seed).data;
    for (double a : {1.0, 5.0, 25.0}) cases.push_back({seed, a, with_outlier(bulk, a, seed + 100)});
  }
  return cases;
}

optimizer::OptimizerConfig outlier_run_config(std::uint64_t seed) {
  optimizer::OptimizerConfig cfg;
  cfg.iterations = 5000;
  cfg.gradient_tolerance = 1e-5;
  cfg.seed = seed;
  return cfg;
}

Outcome outlier_suppression(const std::vector<OutlierCase>& cases) {
  bool ok = true;
  double worst_alpha = 0.0;
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_lemma = -std::numeric_limits<double>::infinity();
  double worst_grad = 0.0;
  for (const auto& c : cases) {
    const auto P = affinity::input_affinities(c.X, {30.0});
    auto cfg = outlier_run_config(c.seed);
    const auto result = optimizer::run(P.joint, cfg);
    const double g = optimizer::max_gradient(P.joint, result.embedding);
    worst_grad = std::max(worst_grad, g);
    ok = ok && optimizer::is_stationary(P.joint, result.embedding, 1e-5);

    const auto rep = outliers::outlier_number(result.embedding, P);
    worst_alpha = std::max(worst_alpha, rep.alpha);
    worst_slack = std::min(worst_slack, *rep.bound + 0.05 - rep.alpha);
    ok = ok && rep.alpha <= *rep.bound + 0.05 && rep.alpha <= 3.2;

    std::vector<Dataset> iterates{optimizer::initial_layout(c.X.size(), cfg), result.embedding};
    cfg.gradient_tolerance = 0.0;
    for (int k : {1, 10, 100, 250, 400}) {
      cfg.iterations = k;
      cfg.exaggeration_iters = std::min(k, 250);
      iterates.push_back(optimizer::run(P.joint, cfg).embedding);
    }
    for (const auto& Y : iterates) {
      for (Index i = 0; i < Y.size(); ++i) {
        const double excess = outliers::q_row_mass(Y, i) - outliers::qsum_bound(Y, i);
        worst_lemma = std::max(worst_lemma, excess);
        ok = ok && excess <= 1e-12;
      }
    }
  }
  return {ok, fmt("max alpha(Y) %.4f (max 3.2), min bound slack %.4f (>= 0), max final gradient %.3g (tol 1e-5), "
                  "max Q row mass excess %.3g (tol 1e-12)",
                  worst_alpha, worst_slack, worst_grad, worst_lemma)};
}

Outcome pca_contrast(const std::vector<OutlierCase>& cases) {
  bool ok = true;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_tsne = 0.0;
  for (const auto& c : cases) {
    if (c.alpha_in < 5.0) continue;
    const double pca_alpha = outliers::outlier_number(geometry::pca(c.X, 2)).alpha;
    min_ratio = std::min(min_ratio, pca_alpha / c.alpha_in);
    const auto P = affinity::input_affinities(c.X, {30.0});
    const auto Y = optimizer::run(P.joint, outlier_run_config(c.seed)).embedding;
    const double tsne_alpha = outliers::outlier_number(Y).alpha;
    max_tsne = std::max(max_tsne, tsne_alpha);
    ok = ok && pca_alpha >= 0.5 * c.alpha_in && tsne_alpha <= 3.2;
  }
  return {ok, fmt("min PCA alpha_out/alpha_in %.3f (min 0.5), max t-SNE alpha_out %.4f (max 3.2)", min_ratio,
                  max_tsne)};
}

Outcome index_oracles() {
  std::mt19937_64 rng(909);
  double dev = 0.0;
  double dunn_dev = 0.0;
  std::uniform_int_distribution<int> size(6, 30);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = size(rng);
    const int k = std::min<int>(2 + trial % 4, static_cast<int>(n / 2));
    const auto X = random_dataset(n, dim(rng), rng);
    const auto labels = random_labels(n, k, rng);
    const Partition part(labels, k);
    const double ch = oracle::calinski_harabasz(X.points(), labels);
    dev = std::max({dev, std::abs(saliency::silhouette(X, part) - oracle::silhouette(X.points(), labels)),
                    std::abs(saliency::calinski_harabasz(X, part) - ch) / std::max(1.0, std::abs(ch)),
                    std::abs(saliency::dunn(X, part) - oracle::dunn(X.points(), labels))});

    const double C = unit(rng);
    double inter = std::numeric_limits<double>::infinity();
    double intra = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double d = oracle::dist(X.points(), i, j);
        if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
          intra = std::max(intra, d);
        } else {
          inter = std::min(inter, d);
        }
      }
    }
    const double closed = std::sqrt((1.0 - C) * inter * inter + C) / std::sqrt((1.0 - C) * intra * intra + C);
    dunn_dev = std::max(dunn_dev, std::abs(saliency::dunn(invariance::interpolate_g(X, C), part) - closed));
  }
  return {dev <= 1e-10 && dunn_dev <= 1e-8,
          fmt("max index deviation %.3g (tol 1e-10), Dunn under g(C) deviation %.3g (tol 1e-8)", dev, dunn_dev)};
}

Outcome hull_oracle() {
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<int> size(1, 20);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double dev = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = size(rng);
    const Index d = dim(rng);
    const Matrix S = oracle::random_matrix(m, d, rng);
    // half the queries are drawn near the cloud, half well outside it
    const Vector p = oracle::random_matrix(d, 1, rng).col(0) * (trial % 2 == 0 ? 0.5 : 3.0);
    dev = std::max(dev, std::abs(outliers::dist_to_hull(p, Dataset(S)) - oracle::hull_distance(p, S)));
  }
  return {dev <= 1e-6, fmt("max deviation %.3g (tol 1e-6)", dev)};
}

Outcome gradient_check() {
  std::mt19937_64 rng(1111);
  std::uniform_int_distribution<int> size(3, 8);
  double dev = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = size(rng);
    const auto X = random_dataset(n, 3, rng);
    const auto P = affinity::input_affinities(X, affinity::PerplexityConfig::clipped(2.0, n)).joint;
    const auto Y = random_dataset(n, 2, rng);
    dev = std::max(dev, max_abs_diff(optimizer::gradient(P, Y), oracle::fd_gradient(P.entries(), Y.points(), 1e-5)));
  }
  return {dev <= 1e-5, fmt("max |analytic - finite difference| %.3g (tol 1e-5)", dev)};
}

Outcome round_trips() {
  std::mt19937_64 rng(1212);
  double mds_dev = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto X = random_dataset(25, 6, rng);
    const auto D = geometry::pairwise_sq_dists(X);
    const auto back = geometry::pairwise_sq_dists(geometry::classical_mds(D, 6));
    mds_dev = std::max(mds_dev, max_abs_diff(D.entries(), back.entries()) / D.max_entry());
  }

  const auto mix = injection::sample_mixture(injection::MixtureSpec::two_clusters(4, 5.0, 1.0, 6), 12);
  const auto ids = widen(mix.labels);
  const auto parsed = io::parse_csv(io::format_csv(mix.data, &ids), {false, true});
  const bool csv_ok = parsed.data.points() == mix.data.points() && parsed.raw_labels == ids;

  report::Report r;
  r.command = "embed";
  r.config = {{"perplexity", 30.0}, {"seed", 4}};
  r.metrics["embedding"] = {"kmeans", 0.75, 123.5, std::numeric_limits<double>::infinity()};
  r.stationarity = report::StationarityCertificate{3e-6, 1e-5, true};
  outliers::OutlierReport o;
  o.alpha = 0.1;
  o.witness_index = 3;
  o.margin = 0.25;
  o.bulk_diameter = 2.5;
  o.min_dist_to_bulk = 0.3;
  o.bound = 2.9;
  o.p_mass = 0.01;
  r.outlier = o;
  r.checks.push_back({"q_row_mass_bound", 1e-17, 1e-12, true});
  r.trace = report::TraceSummary{1000, 4.2, 0.31, 2e-6};
  r.values["final_kl"] = 0.1 / 3.0;
  r.notes["p_fingerprint"] = "0123456789abcdef";
  const auto text = report::serialize(r);
  const auto again = report::parse(text);
  const bool report_ok = again == r && report::serialize(again) == text;

  return {mds_dev <= 1e-8 && csv_ok && report_ok,
          fmt("MDS relative deviation %.3g (tol 1e-8), CSV exact %s, report exact %s", mds_dev, csv_ok ? "yes" : "no",
              report_ok ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::vector<int> known;
  app.add_option("--only", only, "Run just these criteria")->check(CLI::Range(1, 12));
  app.add_option("--known-failure", known, "Criteria whose failure does not fail the run")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  std::vector<OutlierCase> cases;
  auto outlier_data = [&]() -> const std::vector<OutlierCase>& {
    if (cases.empty()) cases = outlier_cases();
    return cases;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"P invariance under shift and scale", p_invariance},
      {"impostor indistinguishability", impostor_indistinguishable},
      {"exact two-cluster minimizer", exact_minimizer},
      {"impostor saliency gap", saliency_gap},
      {"perturbation instability", perturbation_instability},
      {"poison point", poison_point},
      {"outlier suppression bound", [&] { return outlier_suppression(outlier_data()); }},
      {"PCA contrast", [&] { return pca_contrast(outlier_data()); }},
      {"index oracles", index_oracles},
      {"hull distance oracle", hull_oracle},
      {"gradient correctness", gradient_check},
      {"round trips", round_trips},
  };

  int unexpected = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[c].second();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool tolerated = std::find(known.begin(), known.end(), id) != known.end();
    if (!out.passed && !tolerated) ++unexpected;
    std::cout << (out.passed ? "PASS" : "FAIL") << " " << id << " " << criteria[c].first << ": " << out.detail
              << fmt(" [%.1f s]", secs) << (!out.passed && tolerated ? " (known failure)" : "") << std::endl;
  }
  return unexpected == 0 ? 0 : 1;
}
