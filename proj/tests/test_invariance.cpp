#include "fixtures.hpp"
#include "oracles.hpp"

#include "tsf/affinity.hpp"
#include "tsf/geometry.hpp"
#include "tsf/injection.hpp"
#include "tsf/invariance.hpp"
#include "tsf/optimizer.hpp"
#include "tsf/saliency.hpp"

#include <doctest.h>

using namespace tsf;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::pair<double, double> off_diagonal_range(const SquaredDistanceMatrix& D) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index i = 0; i < D.size(); ++i) {
    for (Index j = 0; j < D.size(); ++j) {
      if (i == j) continue;
      lo = std::min(lo, D(i, j));
      hi = std::max(hi, D(i, j));
    }
  }
  return {lo, hi};
}

Dataset two_blobs(std::mt19937_64& rng, Index per, Index dim, double sep) {
  Matrix X = oracle::random_matrix(2 * per, dim, rng, 0.5);
  X.bottomRows(per).col(0).array() += sep;
  return Dataset(X);
}

}  // namespace

TEST_CASE("additive shift of squared distances") {
  const auto D = geometry::pairwise_sq_dists(Dataset::from_values({0.0, 1.0}));
  CHECK(max_diff(invariance::shift_sq_dists(D, 0.0).entries(), D.entries()) == 0.0);
  const auto shifted = invariance::shift_sq_dists(D, 3.0);
  CHECK(shifted(0, 1) == 4.0);
  CHECK(shifted(0, 0) == 0.0);
  CHECK_THROWS_AS(invariance::shift_sq_dists(D, -2.0), Error);
  CHECK(invariance::shift_sq_dists(D, -0.5)(0, 1) == 0.5);

  std::mt19937_64 rng(30);
  const auto R = geometry::pairwise_sq_dists(Dataset(oracle::random_matrix(12, 3, rng)));
  CHECK(geometry::schoenberg_embeddable(invariance::shift_sq_dists(R, 7.0), 1e-8));
}

TEST_CASE("realized shifts") {
  std::mt19937_64 rng(31);
  const Dataset X(oracle::random_matrix(9, 3, rng));
  const auto D = geometry::pairwise_sq_dists(X);
  SUBCASE("C = 0 reproduces the distances") {
    CHECK(max_diff(geometry::pairwise_sq_dists(invariance::realize_shift(X, 0.0)).entries(), D.entries()) <= 1e-8);
  }
  SUBCASE("distances grow by exactly C") {
    const auto Y = invariance::realize_shift(X, 5.0);
    CHECK(Y.dim() == 8);
    CHECK(max_diff(geometry::pairwise_sq_dists(Y).entries(), invariance::shift_sq_dists(D, 5.0).entries()) <= 1e-8);
  }
  SUBCASE("unit simplex shifted by one has squared side two") {
    const auto Y = invariance::realize_shift(injection::regular_simplex(4), 1.0);
    const auto [lo, hi] = off_diagonal_range(geometry::pairwise_sq_dists(Y));
    CHECK(lo == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(hi == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("P is unchanged") {
    const auto P = affinity::input_affinities(X, {3.0});
    const auto Pc = affinity::input_affinities(invariance::realize_shift(X, 5.0), {3.0});
    CHECK(max_diff(P.joint.entries(), Pc.joint.entries()) <= 1e-9);
  }
  SUBCASE("shift then scale") {
    const auto Y = invariance::apply(X, {2.0, 3.0});
    CHECK(max_diff(geometry::pairwise_sq_dists(Y).entries(),
                   invariance::scale_sq_dists(invariance::shift_sq_dists(D, 2.0), 9.0).entries()) <= 1e-7);
    CHECK_THROWS_AS(invariance::apply(X, {0.0, 0.0}), Error);
    CHECK_THROWS_AS(invariance::apply(X, {std::numeric_limits<double>::infinity(), 1.0}), Error);
  }
}

TEST_CASE("interpolation g(C)") {
  SUBCASE("endpoints") {
    std::mt19937_64 rng(32);
    const Dataset X(oracle::random_matrix(7, 3, rng));
    const auto D = geometry::pairwise_sq_dists(X);
    CHECK(max_diff(geometry::pairwise_sq_dists(invariance::interpolate_g(X, 0.0)).entries(), D.entries()) <= 1e-8);
    const auto [lo, hi] = off_diagonal_range(geometry::pairwise_sq_dists(invariance::interpolate_g(X, 1.0)));
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("midpoint on a two-point line") {
    const auto D = invariance::interpolate_sq_dists(geometry::pairwise_sq_dists(Dataset::from_values({0.0, 2.0})), 0.5);
    CHECK(D(0, 1) == doctest::Approx(2.5));
  }
  SUBCASE("C outside [0, 1] is rejected") {
    const auto X = Dataset::from_values({0.0, 2.0});
    CHECK_THROWS_AS(invariance::interpolate_g(X, -0.1), Error);
    CHECK_THROWS_AS(invariance::interpolate_g(X, 1.1), Error);
  }
}

TEST_CASE("impostors") {
  SUBCASE("random data lands in the band and keeps P") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 5; ++trial) {
      const Dataset X(oracle::random_matrix(15, 4, rng, 1.0 + trial));
      const auto imp = invariance::make_impostor(X, 0.01);
      CHECK(imp.dim() == 14);
      const auto [lo, hi] = off_diagonal_range(geometry::pairwise_sq_dists(imp));
      CHECK(lo >= 1.0 - 1e-9);
      CHECK(hi <= 1.01 + 1e-9);
      const auto P = affinity::input_affinities(X, {4.0});
      const auto Pi = affinity::input_affinities(imp, {4.0});
      CHECK(max_diff(P.joint.entries(), Pi.joint.entries()) <= 1e-9);
    }
  }
  SUBCASE("binary two-cluster data gives two distance values") {
    const auto X = fixture::two_cluster_binary(8);
    const auto imp = invariance::make_impostor(X, 0.5);
    const auto D = geometry::pairwise_sq_dists(imp);
    for (Index i = 0; i < 8; ++i) {
      for (Index j = 0; j < 8; ++j) {
        if (i == j) continue;
        const double expected = (i < 4) == (j < 4) ? 1.0 : 1.5;
        CHECK(std::abs(D(i, j) - expected) <= 1e-9);
      }
    }
    const auto P = affinity::input_affinities(X, {4.5});
    const auto Pi = affinity::input_affinities(imp, {4.5});
    CHECK(max_diff(P.joint.entries(), Pi.joint.entries()) <= 1e-9);
  }
  SUBCASE("a regular simplex maps to a larger regular simplex") {
    const auto imp = invariance::make_impostor(injection::regular_simplex(6), 0.2);
    const auto [lo, hi] = off_diagonal_range(geometry::pairwise_sq_dists(imp));
    CHECK(lo == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1.2).epsilon(1e-9));
  }
  SUBCASE("rescaled impostor is in Delta_eps'") {
    std::mt19937_64 rng(34);
    for (double eps : {0.01, 0.3, 2.0}) {
      const auto D = geometry::pairwise_sq_dists(invariance::make_impostor(Dataset(oracle::random_matrix(10, 3, rng)), eps));
      const auto scaled = invariance::scale_sq_dists(D, 1.0 / (1.0 + eps / 2.0));
      CHECK(invariance::in_delta(scaled, eps / (2.0 + eps), 1e-12));
      CHECK_FALSE(invariance::in_delta(scaled, eps / (2.0 + eps) / 10.0));
    }
  }
  SUBCASE("coincident points are rejected") {
    CHECK_THROWS_AS(invariance::make_impostor(Dataset::from_values({1.0, 1.0, 1.0}), 0.1), Error);
    CHECK_THROWS_AS(invariance::make_impostor(Dataset::from_values({0.0, 1.0}), 0.0), Error);
  }
  SUBCASE("stationary points are shared") {
    const auto X = fixture::two_cluster_binary(10);
    const auto P = affinity::input_affinities(X, {6.0});
    const auto Y = fixture::two_cluster_minimizer(10, P.sigmas[0]);
    const auto Pi = affinity::input_affinities(invariance::make_impostor(X, 0.05), {6.0});
    REQUIRE(optimizer::is_stationary(P.joint, Y, 1e-6));
    CHECK(optimizer::is_stationary(Pi.joint, Y, 1e-6));
  }
  SUBCASE("silhouette collapses with eps") {
    std::mt19937_64 rng(35);
    const auto X = two_blobs(rng, 10, 5, 8.0);
    const Partition part(fixture::two_cluster_labels(20), 2);
    CHECK(saliency::silhouette(X, part) > 0.5);
    CHECK(std::abs(saliency::silhouette(invariance::make_impostor(X, 0.01), part)) <= 0.01);
  }
}

TEST_CASE("saliency under interpolation") {
  std::mt19937_64 rng(36);
  const auto X = two_blobs(rng, 6, 3, 6.0);
  const Partition part(fixture::two_cluster_labels(12), 2);
  const double s0 = saliency::silhouette(X, part);

  SUBCASE("endpoints and monotone magnitude") {
    CHECK(std::abs(saliency::silhouette(invariance::interpolate_g(X, 0.0), part) - s0) <= 1e-8);
    CHECK(std::abs(saliency::silhouette(invariance::interpolate_g(X, 1.0), part)) <= 1e-8);
    double prev = std::abs(s0);
    for (int step = 1; step <= 20; ++step) {
      const double s = std::abs(saliency::silhouette(invariance::interpolate_g(X, step / 20.0), part));
      CHECK(s <= prev + 1e-9);
      prev = s;
    }
  }
  SUBCASE("any fraction of the silhouette is reachable") {
    for (double frac : {0.5, 0.1, 0.01}) {
      const double target = frac * s0;
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (saliency::silhouette(invariance::interpolate_g(X, mid), part) > target ? lo : hi) = mid;
      }
      CHECK(std::abs(saliency::silhouette(invariance::interpolate_g(X, 0.5 * (lo + hi)), part) - target) <= 1e-4);
    }
  }
  SUBCASE("Calinski-Harabasz covers (1, CH(X)]") {
    const double ch0 = saliency::calinski_harabasz(X, part);
    REQUIRE(ch0 > 2.0);
    for (double target : {1.0 + 1e-3, 0.5 * (1.0 + ch0), ch0 - 1e-3}) {
      double lo = 0.0;
      double hi = 1.0 - 1e-12;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (saliency::calinski_harabasz(invariance::interpolate_g(X, mid), part) > target ? lo : hi) = mid;
      }
      const double got = saliency::calinski_harabasz(invariance::interpolate_g(X, 0.5 * (lo + hi)), part);
      CHECK(got == doctest::Approx(target).epsilon(1e-4));
    }
  }
  SUBCASE("Dunn closed form") {
    const Matrix& P = X.points();
    double m = std::numeric_limits<double>::infinity();
    double M = 0.0;
    for (Index i = 0; i < 12; ++i) {
      for (Index j = i + 1; j < 12; ++j) {
        const double d2 = oracle::dist(P, i, j) * oracle::dist(P, i, j);
        if (part[i] == part[j]) M = std::max(M, d2);
        else m = std::min(m, d2);
      }
    }
    for (double C : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      const double expected = std::sqrt((1 - C) * m + C) / std::sqrt((1 - C) * M + C);
      CHECK(std::abs(saliency::dunn(invariance::interpolate_g(X, C), part) - expected) <= 1e-8);
    }
  }
}
