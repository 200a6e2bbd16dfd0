#include "tsf/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using tsf::commands::AttackKind;
using tsf::commands::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_input) {
  auto* in = sub->add_option("input", cfg.input, "input CSV");
  if (needs_input) in->required()->check(CLI::ExistingFile);
  sub->add_flag("--header", cfg.header, "first CSV row is a header");
  sub->add_flag("--labels-col", cfg.labels_col, "last CSV column holds integer labels");
  sub->add_option("--out", cfg.output, "output CSV");
  sub->add_option("--report", cfg.report, "report path (JSON); printed to stdout when omitted");
  sub->add_option("--svg", cfg.svg, "scatter plot path");
  sub->add_option("--perplexity", cfg.perplexity, "perplexity, clipped into (1, n-1)");
  sub->add_option("--iters", cfg.iters, "gradient descent iterations");
  sub->add_option("--lr", cfg.lr, "learning rate");
  sub->add_option("--momentum", cfg.momentum, "momentum after early exaggeration");
  sub->add_option("--exaggeration", cfg.exaggeration, "early exaggeration factor");
  sub->add_option("--exaggeration-iters", cfg.exaggeration_iters, "early exaggeration iterations");
  sub->add_option("--dim", cfg.dim, "embedding dimension");
  sub->add_option("--tol", cfg.tol, "stationarity tolerance on the max gradient entry");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--eps", cfg.eps, "impostor / perturbation size");
  sub->add_option("--k", cfg.k, "cluster count for k-means labels");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"t-SNE forensics: embeddings, impostors, saliency indices, outliers and attacks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsf::report::kToolVersion));

  RunConfig cfg;

  add_common(app.add_subcommand("embed", "run t-SNE on a CSV"), cfg, true);
  add_common(app.add_subcommand("impostor", "build the impostor of a CSV dataset"), cfg, true);
  add_common(app.add_subcommand("metrics", "silhouette, Calinski-Harabasz and Dunn indices"), cfg, true);
  add_common(app.add_subcommand("verify", "invariance and bound checks on a dataset"), cfg, true);

  auto* outlier = app.add_subcommand("outlier", "alpha-outlier number of an embedding");
  add_common(outlier, cfg, true);
  outlier->add_option("--index", cfg.index, "score only this row");

  auto* attack = app.add_subcommand("attack", "inject poison points or outliers");
  add_common(attack, cfg, true);
  auto* pm = attack->add_flag_callback("--poison-mean", [&] { cfg.attack = AttackKind::poison_mean; },
                                       "one point at the dataset mean");
  auto* pk = attack->add_flag_callback("--poison-kmeans", [&] { cfg.attack = AttackKind::poison_kmeans; },
                                       "points averaging a centroid with sampled members");
  auto* po = attack->add_flag_callback("--outliers", [&] { cfg.attack = AttackKind::outliers; },
                                       "Gaussian outliers far from the data");
  pm->excludes(pk)->excludes(po);
  pk->excludes(po);
  attack->add_option("--count", cfg.count, "points to inject");
  attack->add_option("--m", cfg.m, "sampled members per poison point");
  auto* ratio = attack->add_option("--stddev-ratio", cfg.stddev_ratio, "outlier spread relative to the diameter");
  attack->add_option("--stddev", cfg.stddev_abs, "absolute outlier spread")->excludes(ratio);

  auto* generate = app.add_subcommand("generate", "synthetic datasets");
  add_common(generate, cfg, false);
  auto* s = generate->add_option("--simplex", cfg.simplex, "regular simplex with N vertices");
  auto* ps = generate->add_option("--perturbed-simplex", cfg.perturbed_simplex, "perturbed simplex with N points");
  auto* mx = generate->add_option("--mixture", cfg.mixture_clusters, "Gaussian mixture with N clusters");
  s->excludes(ps)->excludes(mx);
  ps->excludes(mx);
  generate->add_option("--per-cluster", cfg.per_cluster, "points per mixture cluster");
  generate->add_option("--mix-dim", cfg.mixture_dim, "mixture dimension");
  generate->add_option("--separation", cfg.separation, "distance between mixture means");
  generate->add_option("--stddev", cfg.stddev, "per-coordinate mixture stddev");

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  return tsf::commands::run_command(cfg, std::cout, std::cerr);
}
