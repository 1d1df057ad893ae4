#pragma once

#include "riskscope/tree.hpp"

namespace riskscope::learn {

struct GbdtParams {
  int rounds = 200;
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_leaf = 1;
  double lambda = 1.0;  // L2 on leaf weights
  double gamma = 0.0;   // minimum split gain
  GrowthStrategy growth = GrowthStrategy::level_wise;
};

/// Additive logistic-loss boosting with second-order leaf weights
/// w* = -G/(H+lambda). Prediction is sigma(F0 + lr * sum of stage outputs).
struct BoostedEnsemble {
  double base_score = 0.0;  // F0 = logit(mean(y))
  std::vector<Tree> stages;
  GbdtParams params;
  std::vector<double> train_log_loss;  // entry 0 is the loss at F0, then one per round

  double raw_score(std::span<const double> x) const;
  double predict(std::span<const double> x) const;
};

BoostedEnsemble fit_gbdt(const FeatureMatrix& X, const LabelVector& y, const GbdtParams& params);

}  // namespace riskscope::learn
