#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "riskscope/error.hpp"

namespace riskscope::eval {

struct SplitIndices {
  std::vector<std::size_t> train_ids;  // sorted ascending
  std::vector<std::size_t> test_ids;   // sorted ascending
  std::uint64_t seed = 0;
  bool stratified = true;
};

/// Seeded Fisher-Yates 70/30 split; |train| = floor(0.7*n) unstratified, or
/// the sum of per-class floors when stratified.
SplitIndices split_70_30(std::size_t n, std::span<const int> labels, std::uint64_t seed,
                         bool stratified);

struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

/// Probability scores are thresholded at 0.5; a score of exactly 0.5 counts
/// as a positive call.
double accuracy(std::span<const double> scores, std::span<const int> y,
                ConfusionCounts* counts = nullptr, double threshold = 0.5);

/// Mann-Whitney rank statistic with average ranks on ties; equals the
/// trapezoidal area under the ROC curve.
double roc_auc(std::span<const double> scores, std::span<const int> y);

}  // namespace riskscope::eval
