#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "riskscope/error.hpp"
#include "riskscope/macroindex.hpp"

namespace riskscope::cluster {

struct KmeansParams {
  int k = 3;
  std::uint64_t seed = 0;
  int restarts = 10;
  double tol = 1e-8;  // max centroid shift
  int max_iter = 300;
};

struct ClusterResult {
  std::vector<int> assignments;    // per point, 0..k-1
  std::vector<double> centroids;   // k x d row-major
  std::size_t dims = 0;
  double inertia = 0.0;
  int iterations = 0;              // of the winning restart
  int restarts_used = 0;
  std::uint64_t seed = 0;
  std::vector<double> inertia_history;  // winning restart, one entry per Lloyd iteration
};

/// Lloyd iterations with k-means++ seeding per restart; the best restart by
/// (inertia, restart index) wins. Empty clusters are reseeded from the point
/// farthest from its assigned centroid. The per-iteration inertia decrease is
/// asserted in-engine. Deterministic for a fixed seed, any thread count.
ClusterResult kmeans(std::span<const double> points, std::size_t n, std::size_t d,
                     const KmeansParams& params);

enum class VulnerabilityLabel { low, moderate, high };
const char* vulnerability_name(VulnerabilityLabel label);

struct ClusterLabeling {
  std::map<int, std::string> names;       // cluster id -> label text
  std::vector<double> mean_scores;        // per cluster id
  bool tie_broken = false;
};

/// For k=3, order clusters by mean member EnvScore into Low/Moderate/High;
/// other k get numeric labels. Ties order by smaller cluster id and are
/// flagged.
ClusterLabeling label_clusters(const ClusterResult& result,
                               std::span<const std::string> point_states,
                               const macroindex::EnvScoreTable& scores);

}  // namespace riskscope::cluster
