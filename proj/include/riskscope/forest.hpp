#pragma once

#include <cstdint>

#include "riskscope/tree.hpp"

namespace riskscope::learn {

struct ForestParams {
  int trees = 300;
  int max_depth = 6;
  int min_leaf = 5;
  int features_per_split = 0;  // 0: floor(sqrt(d))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

/// Bagged gini trees; leaves hold class-1 fractions and the ensemble predicts
/// their arithmetic mean.
struct Forest {
  std::vector<Tree> trees;
  ForestParams params;

  double predict(std::span<const double> x) const;
};

/// Trees are trained in parallel; each draws from its own seed_mix stream so
/// the result is bit-identical for any thread count.
Forest fit_forest(const FeatureMatrix& X, const LabelVector& y, const ForestParams& params);

}  // namespace riskscope::learn
