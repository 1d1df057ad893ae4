#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "riskscope/kmeans.hpp"

using namespace riskscope;
using namespace riskscope::cluster;

TEST_CASE("k equal to distinct points zeroes the inertia") {
  const std::vector<double> pts{0.0, 1.0, 5.0, 9.0};
  KmeansParams p;
  p.k = 4;
  p.seed = 1;
  const auto r = kmeans(pts, 4, 1, p);
  CHECK(r.inertia == 0.0);
  std::set<int> ids(r.assignments.begin(), r.assignments.end());
  CHECK(ids.size() == 4);
}

TEST_CASE("two separated blobs are recovered exactly") {
  const std::vector<double> pts{0.0, 0.1, 10.0, 10.1};
  KmeansParams p;
  p.k = 2;
  p.seed = 3;
  const auto r = kmeans(pts, 4, 1, p);
  CHECK(r.assignments[0] == r.assignments[1]);
  CHECK(r.assignments[2] == r.assignments[3]);
  CHECK(r.assignments[0] != r.assignments[2]);
  std::vector<double> mus = r.centroids;
  std::sort(mus.begin(), mus.end());
  CHECK(mus[0] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(mus[1] == doctest::Approx(10.05).epsilon(1e-12));
  // enumerated over all 2-partitions, this is the optimum
  CHECK(r.inertia == doctest::Approx(testutil::enumerate_min_inertia(pts, 4, 1, 2)).epsilon(1e-12));
}

TEST_CASE("identical points collapse to one centroid in one iteration") {
  const std::vector<double> pts{2.5, 2.5, 2.5};
  KmeansParams p;
  p.k = 1;
  p.seed = 5;
  const auto r = kmeans(pts, 3, 1, p);
  CHECK(r.inertia == 0.0);
  CHECK(r.iterations == 1);
}

TEST_CASE("k above the distinct-point count is rejected") {
  const std::vector<double> pts{1.0, 1.0, 2.0};
  KmeansParams p;
  p.k = 3;
  try {
    kmeans(pts, 3, 1, p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::k_exceeds_distinct_points);
  }
}

TEST_CASE("lloyd invariants on random instances") {
  Rng rng(81);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 12 + rng.uniform_index(60);
    const std::size_t d = 1 + rng.uniform_index(4);
    std::vector<double> pts(n * d);
    for (auto& v : pts) v = rng.uniform01();
    KmeansParams p;
    p.k = 2 + static_cast<int>(rng.uniform_index(3));
    p.seed = 1000 + static_cast<std::uint64_t>(trial);
    p.restarts = 4;
    const auto r = kmeans(pts, n, d, p);

    for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] * (1.0 + 1e-12) + 1e-12);

    // fixed point: reassigning to the nearest centroid changes nothing
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < p.k; ++c) {
        double dist = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff =
              pts[i * d + j] - r.centroids[static_cast<std::size_t>(c) * d + j];
          dist += diff * diff;
        }
        if (dist < best) {
          best = dist;
          arg = c;
        }
      }
      CHECK(arg == r.assignments[i]);
    }

    // the winner is at least as good as the first restart alone
    KmeansParams single = p;
    single.restarts = 1;
    CHECK(r.inertia <= kmeans(pts, n, d, single).inertia + 1e-12);

    // determinism
    const auto again = kmeans(pts, n, d, p);
    CHECK(again.assignments == r.assignments);
    CHECK(again.centroids == r.centroids);
    CHECK(again.inertia == r.inertia);
  }
}

TEST_CASE("three-point two-cluster instances attain the enumerated optimum") {
  Rng rng(83);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> pts(3);
    for (auto& v : pts) v = rng.uniform01() * 10.0;
    std::set<double> distinct(pts.begin(), pts.end());
    if (distinct.size() < 2) continue;
    KmeansParams p;
    p.k = 2;
    p.seed = 2000 + static_cast<std::uint64_t>(trial);
    const auto r = kmeans(pts, 3, 1, p);
    const double best = testutil::enumerate_min_inertia(pts, 3, 1, 2);
    CHECK(r.inertia == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("labeling by mean envscore, with the tie rule") {
  macroindex::EnvScoreTable scores;
  scores.rows = {{"A", 0.2, 3, 2}, {"B", 0.4, 2, 2}, {"C", 0.6, 1, 2}};

  ClusterResult r;
  r.dims = 1;
  r.centroids = {0.0, 1.0, 2.0};
  r.assignments = {0, 1, 2};
  const std::vector<std::string> states{"A", "B", "C"};
  const auto labels = label_clusters(r, states, scores);
  CHECK(labels.names.at(0) == "Low");
  CHECK(labels.names.at(1) == "Moderate");
  CHECK(labels.names.at(2) == "High");
  CHECK_FALSE(labels.tie_broken);

  macroindex::EnvScoreTable tied;
  tied.rows = {{"A", 0.4, 1, 2}, {"B", 0.4, 2, 2}, {"C", 0.1, 3, 2}};
  const auto tied_labels = label_clusters(r, states, tied);
  CHECK(tied_labels.tie_broken);
  CHECK(tied_labels.names.at(0) == "Moderate");  // smaller id ranks lower on ties
  CHECK(tied_labels.names.at(1) == "High");
  CHECK(tied_labels.names.at(2) == "Low");
}

TEST_CASE("downstream labels are invariant to cluster id permutation") {
  Rng rng(85);
  const std::size_t n = 24;
  std::vector<double> pts(n);
  std::vector<std::string> states;
  macroindex::EnvScoreTable scores;
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = rng.uniform01();
    states.push_back("S" + std::to_string(i));
  }
  KmeansParams p;
  p.k = 3;
  p.seed = 9;
  auto r = kmeans(pts, n, 1, p);
  for (std::size_t i = 0; i < n; ++i)
    scores.rows.push_back({states[i], pts[i], static_cast<int>(i) + 1, 1});

  const auto base = label_clusters(r, states, scores);
  std::map<std::string, std::string> by_state;
  for (std::size_t i = 0; i < n; ++i) by_state[states[i]] = base.names.at(r.assignments[i]);

  // permute ids 0->1->2->0
  ClusterResult permuted = r;
  for (auto& a : permuted.assignments) a = (a + 1) % 3;
  std::vector<double> c = r.centroids;
  permuted.centroids = {c[2], c[0], c[1]};
  const auto relabeled = label_clusters(permuted, states, scores);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(relabeled.names.at(permuted.assignments[i]) == by_state[states[i]]);
}

TEST_CASE("k=4 uses numeric labels") {
  const std::vector<double> pts{0.0, 1.0, 5.0, 9.0, 12.0};
  KmeansParams p;
  p.k = 4;
  p.seed = 2;
  const auto r = kmeans(pts, 5, 1, p);
  macroindex::EnvScoreTable scores;
  const std::vector<std::string> states{"A", "B", "C", "D", "E"};
  for (std::size_t i = 0; i < 5; ++i)
    scores.rows.push_back({states[i], pts[i] / 12.0, static_cast<int>(i + 1), 1});
  const auto labels = label_clusters(r, states, scores);
  for (const auto& [id, name] : labels.names) CHECK(name.rfind("cluster_", 0) == 0);
}
