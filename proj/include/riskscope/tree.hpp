#pragma once

#include <span>
#include <vector>

#include "riskscope/features.hpp"
#include "riskscope/rng.hpp"

namespace riskscope::learn {

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // x[feature] < threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf: class-1 fraction (gini) or weight -G/(H+lambda) (boost)
  int depth = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  bool degenerate = false;      // all rows identical: a single leaf, flagged not failed

  double predict(std::span<const double> x) const;
  int leaf_count() const;
  int max_node_depth() const;
};

enum class SplitCriterion { gini, boost_gain };
enum class GrowthStrategy { level_wise, leaf_wise };

struct TreeParams {
  int max_depth = 6;
  int min_leaf = 1;
  SplitCriterion criterion = SplitCriterion::gini;
  double lambda = 1.0;  // L2 on leaf weights (boost mode)
  double gamma = 0.0;   // minimum structure-score gain to split (boost mode)
  GrowthStrategy growth = GrowthStrategy::level_wise;
};

/// Greedy exact split search: candidate thresholds are midpoints of sorted
/// unique values; candidate features are scored in parallel and reduced in
/// feature order; ties break to the lowest feature index, then the lowest
/// threshold. Deterministic for fixed inputs.
Tree fit_tree_gini(const FeatureMatrix& X, const LabelVector& y, const TreeParams& params);

Tree fit_tree_boost(const FeatureMatrix& X, std::span<const double> grad,
                    std::span<const double> hess, const TreeParams& params);

/// Full-control entry point used by the forest: explicit row multiset and
/// optional per-split feature subsampling from the caller's RNG.
Tree fit_tree_rows(const FeatureMatrix& X, const TreeParams& params,
                   std::vector<std::size_t> rows, const LabelVector* y,
                   std::span<const double> grad, std::span<const double> hess,
                   Rng* feature_rng = nullptr, int features_per_split = 0);

}  // namespace riskscope::learn
