#include "riskscope/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <set>

#include "riskscope/parallel.hpp"
#include "riskscope/rng.hpp"

namespace riskscope::cluster {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

struct RestartOutcome {
  std::vector<int> assign;
  std::vector<double> centroids;
  double inertia = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
};

// nearest centroid; ties to the lowest cluster index
int nearest(const double* x, const std::vector<double>& centroids, std::size_t k, std::size_t d,
            double* dist_out = nullptr) {
  int best = 0;
  double best_d = sq_dist(x, centroids.data(), d);
  for (std::size_t c = 1; c < k; ++c) {
    const double dd = sq_dist(x, centroids.data() + c * d, d);
    if (dd < best_d) {
      best_d = dd;
      best = static_cast<int>(c);
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

RestartOutcome run_restart(std::span<const double> pts, std::size_t n, std::size_t d,
                           const KmeansParams& params, std::uint64_t restart_seed) {
  const auto k = static_cast<std::size_t>(params.k);
  Rng rng(restart_seed);

  // k-means++ seeding
  std::vector<double> centroids(k * d);
  {
    const std::size_t first = rng.uniform_index(n);
    std::copy_n(pts.data() + first * d, d, centroids.data());
    std::vector<double> dist2(n);
    for (std::size_t c = 1; c < k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t cc = 0; cc < c; ++cc)
          best = std::min(best, sq_dist(pts.data() + i * d, centroids.data() + cc * d, d));
        dist2[i] = best;
        total += best;
      }
      std::size_t chosen;
      if (total > 0.0) {
        const double target = rng.uniform01() * total;
        double acc = 0.0;
        chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          acc += dist2[i];
          if (acc >= target) {
            chosen = i;
            break;
          }
        }
      } else {
        chosen = rng.uniform_index(n);  // all remaining points coincide
      }
      std::copy_n(pts.data() + chosen * d, d, centroids.data() + c * d);
    }
  }

  RestartOutcome out;
  out.assign.assign(n, 0);
  std::vector<double> dist(n, 0.0);

  const std::size_t nb = par::block_count(n);
  std::vector<double> block_sums(nb * k * d);
  std::vector<std::size_t> block_counts(nb * k);
  std::vector<double> block_inertia(nb);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);

  double prev_inertia = std::numeric_limits<double>::infinity();

  // assignment + per-block partial sums, folded in block order
  auto assign_pass = [&]() -> double {
    std::fill(block_sums.begin(), block_sums.end(), 0.0);
    std::fill(block_counts.begin(), block_counts.end(), std::size_t{0});
    std::fill(block_inertia.begin(), block_inertia.end(), 0.0);
    par::for_each_block(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
      double* bs = block_sums.data() + b * k * d;
      std::size_t* bcnt = block_counts.data() + b * k;
      double acc = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double* x = pts.data() + i * d;
        const int c = nearest(x, centroids, k, d, &dist[i]);
        out.assign[i] = c;
        acc += dist[i];
        bcnt[static_cast<std::size_t>(c)] += 1;
        double* s = bs + static_cast<std::size_t>(c) * d;
        for (std::size_t j = 0; j < d; ++j) s[j] += x[j];
      }
      block_inertia[b] = acc;
    });
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    double inertia = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      inertia += block_inertia[b];
      for (std::size_t j = 0; j < k * d; ++j) sums[j] += block_sums[b * k * d + j];
      for (std::size_t c = 0; c < k; ++c) counts[c] += block_counts[b * k + c];
    }
    // Lloyd guarantee, checked in-engine (small slack for roundoff)
    if (!(inertia <= prev_inertia * (1.0 + 1e-12) + 1e-12)) {
      assert(false && "Lloyd inertia increased within a restart");
      raise(Errc::numerical_degeneracy, "Lloyd inertia increased within a restart");
    }
    prev_inertia = inertia;
    out.history.push_back(inertia);
    out.inertia = inertia;
    return inertia;
  };

  for (int iter = 0; iter < params.max_iter; ++iter) {
    assign_pass();
    out.iterations = iter + 1;

    // empty-cluster repair: reseed from the farthest point
    bool repaired = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i)
        if (dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      std::copy_n(pts.data() + far * d, d, centroids.data() + c * d);
      dist[far] = 0.0;
      repaired = true;
    }
    if (repaired) continue;  // re-assign against repaired centroids before updating means

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double* mu = centroids.data() + c * d;
      double delta = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double next = sums[c * d + j] / static_cast<double>(counts[c]);
        const double diff = next - mu[j];
        delta += diff * diff;
        mu[j] = next;
      }
      shift = std::max(shift, std::sqrt(delta));
    }
    if (shift < params.tol) break;
  }
  // one more pass so the reported assignment is a fixed point of the final
  // centroids and the inertia matches the (assignment, centroid) pair
  assign_pass();

  out.centroids = std::move(centroids);
  return out;
}

}  // namespace

ClusterResult kmeans(std::span<const double> points, std::size_t n, std::size_t d,
                     const KmeansParams& params) {
  if (d < 1 || n == 0 || points.size() != n * d)
    raise(Errc::bad_config, "kmeans: bad point matrix shape");
  if (params.k < 1) raise(Errc::bad_config, "kmeans: k must be positive");

  std::set<std::vector<double>> distinct;
  for (std::size_t i = 0; i < n; ++i)
    distinct.insert(std::vector<double>(points.begin() + static_cast<long>(i * d),
                                        points.begin() + static_cast<long>((i + 1) * d)));
  if (static_cast<std::size_t>(params.k) > distinct.size())
    raise(Errc::k_exceeds_distinct_points,
          "k=" + std::to_string(params.k) + " exceeds " + std::to_string(distinct.size()) +
              " distinct points");

  const int restarts = std::max(params.restarts, 1);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  par::for_each_index(static_cast<std::size_t>(restarts), [&](std::size_t r) {
    outcomes[r] = run_restart(points, n, d, params, seed_mix(params.seed, r));
  });

  std::size_t winner = 0;  // ties by (inertia, restart index)
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].inertia < outcomes[winner].inertia) winner = r;

  ClusterResult result;
  result.assignments = std::move(outcomes[winner].assign);
  result.centroids = std::move(outcomes[winner].centroids);
  result.dims = d;
  result.inertia = outcomes[winner].inertia;
  result.iterations = outcomes[winner].iterations;
  result.restarts_used = restarts;
  result.seed = params.seed;
  result.inertia_history = std::move(outcomes[winner].history);
  return result;
}

const char* vulnerability_name(VulnerabilityLabel label) {
  switch (label) {
    case VulnerabilityLabel::low: return "Low";
    case VulnerabilityLabel::moderate: return "Moderate";
    case VulnerabilityLabel::high: return "High";
  }
  return "?";
}

ClusterLabeling label_clusters(const ClusterResult& result,
                               std::span<const std::string> point_states,
                               const macroindex::EnvScoreTable& scores) {
  const int k = result.centroids.empty() ? 0
                                         : static_cast<int>(result.centroids.size() / result.dims);
  ClusterLabeling out;
  out.mean_scores.assign(static_cast<std::size_t>(k), 0.0);
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < result.assignments.size(); ++i) {
    const macroindex::EnvScoreRow* row = scores.find(point_states[i]);
    if (row == nullptr) continue;
    out.mean_scores[static_cast<std::size_t>(result.assignments[i])] += row->score;
    counts[static_cast<std::size_t>(result.assignments[i])] += 1;
  }
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > 0) out.mean_scores[c] /= static_cast<double>(counts[c]);

  std::vector<int> order(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) order[static_cast<std::size_t>(c)] = c;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = out.mean_scores[static_cast<std::size_t>(a)];
    const double sb = out.mean_scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa < sb;
    return a < b;  // documented tie rule: smaller id ranks lower
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (out.mean_scores[static_cast<std::size_t>(order[i])] ==
        out.mean_scores[static_cast<std::size_t>(order[i - 1])])
      out.tie_broken = true;

  if (k == 3) {
    out.names[order[0]] = vulnerability_name(VulnerabilityLabel::low);
    out.names[order[1]] = vulnerability_name(VulnerabilityLabel::moderate);
    out.names[order[2]] = vulnerability_name(VulnerabilityLabel::high);
  } else {
    for (std::size_t i = 0; i < order.size(); ++i)
      out.names[order[i]] = "cluster_" + std::to_string(i);
  }
  return out;
}

}  // namespace riskscope::cluster
