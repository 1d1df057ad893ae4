#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskscope/features.hpp"
#include "riskscope/fsutil.hpp"
#include "riskscope/rng.hpp"

namespace testutil {

inline std::string source_path(const std::string& rel) {
  return std::string(RISKSCOPE_SOURCE_DIR) + "/" + rel;
}

inline std::string fixture_path(const std::string& name) { return source_path("fixtures/" + name); }

inline nlohmann::json load_expected() {
  return nlohmann::json::parse(riskscope::fsutil::read_text(fixture_path("expected.json")));
}

/// Dense matrix from explicit rows; every column its own group unless
/// group_of is given.
inline riskscope::FeatureMatrix make_matrix(const std::vector<std::vector<double>>& rows,
                                            const std::vector<std::string>& groups = {}) {
  riskscope::FeatureMatrix X;
  X.n = rows.size();
  X.d = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < X.d; ++c) {
    const std::string g = groups.empty() ? "f" + std::to_string(c) : groups[c];
    X.column_meta.push_back({"f" + std::to_string(c), riskscope::ColumnKind::numeric, g});
  }
  for (const auto& r : rows) X.values.insert(X.values.end(), r.begin(), r.end());
  return X;
}

inline riskscope::FeatureMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  riskscope::Rng rng(seed);
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& r : rows)
    for (auto& v : r) v = rng.uniform01();
  return make_matrix(rows);
}

/// AUC by exhaustive positive-negative pair counting: wins + half ties.
inline double auc_pair_counting(std::span<const double> scores, std::span<const int> y) {
  double wins = 0.0, ties = 0.0;
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    ++np;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 1) continue;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) ties += 1.0;
    }
  }
  for (int v : y) nn += v == 1 ? 0u : 1u;
  return (wins + 0.5 * ties) / (static_cast<double>(np) * static_cast<double>(nn));
}

/// Minimal inertia over every assignment of n points to k non-empty groups.
inline double enumerate_min_inertia(std::span<const double> pts, std::size_t n, std::size_t d,
                                    int k) {
  std::vector<int> assign(n, 0);
  double best = std::numeric_limits<double>::infinity();
  const auto total = static_cast<std::size_t>(std::pow(k, static_cast<double>(n)));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % static_cast<std::size_t>(k));
      c /= static_cast<std::size_t>(k);
    }
    std::vector<double> mu(static_cast<std::size_t>(k) * d, 0.0);
    std::vector<double> cnt(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      cnt[static_cast<std::size_t>(assign[i])] += 1.0;
      for (std::size_t j = 0; j < d; ++j)
        mu[static_cast<std::size_t>(assign[i]) * d + j] += pts[i * d + j];
    }
    bool ok = true;
    for (double v : cnt) ok = ok && v > 0.0;
    if (!ok) continue;
    for (int g = 0; g < k; ++g)
      for (std::size_t j = 0; j < d; ++j) mu[static_cast<std::size_t>(g) * d + j] /= cnt[static_cast<std::size_t>(g)];
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = pts[i * d + j] - mu[static_cast<std::size_t>(assign[i]) * d + j];
        inertia += diff * diff;
      }
    best = std::min(best, inertia);
  }
  return best;
}

}  // namespace testutil
