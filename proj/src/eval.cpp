#include "riskscope/eval.hpp"

#include <algorithm>
#include <numeric>

#include "riskscope/rng.hpp"

namespace riskscope::eval {

SplitIndices split_70_30(std::size_t n, std::span<const int> labels, std::uint64_t seed,
                         bool stratified) {
  if (n < 10) raise(Errc::too_few_rows, "need at least 10 rows to split, have " + std::to_string(n));
  if (stratified && labels.size() != n)
    raise(Errc::length_mismatch, "labels must cover all rows for a stratified split");

  SplitIndices out;
  out.seed = seed;
  out.stratified = stratified;
  Rng rng(seed);

  auto take = [&](std::vector<std::size_t> ids) {
    rng.shuffle(ids.begin(), ids.end());
    const std::size_t k = static_cast<std::size_t>(0.7 * static_cast<double>(ids.size()));
    out.train_ids.insert(out.train_ids.end(), ids.begin(), ids.begin() + static_cast<long>(k));
    out.test_ids.insert(out.test_ids.end(), ids.begin() + static_cast<long>(k), ids.end());
  };

  if (stratified) {
    std::vector<std::size_t> class0, class1;
    for (std::size_t i = 0; i < n; ++i) (labels[i] == 1 ? class1 : class0).push_back(i);
    take(std::move(class0));
    take(std::move(class1));
  } else {
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    take(std::move(ids));
  }
  std::sort(out.train_ids.begin(), out.train_ids.end());
  std::sort(out.test_ids.begin(), out.test_ids.end());
  return out;
}

double accuracy(std::span<const double> scores, std::span<const int> y, ConfusionCounts* counts,
                double threshold) {
  if (scores.size() != y.size()) raise(Errc::length_mismatch, "scores and labels differ in length");
  ConfusionCounts local;
  ConfusionCounts& c = counts ? *counts : local;
  c = ConfusionCounts{};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    const bool truth = y[i] == 1;
    if (pred && truth) ++c.tp;
    else if (pred && !truth) ++c.fp;
    else if (!pred && truth) ++c.fn;
    else ++c.tn;
  }
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(scores.size());
}

double roc_auc(std::span<const double> scores, std::span<const int> y) {
  if (scores.size() != y.size()) raise(Errc::length_mismatch, "scores and labels differ in length");
  const std::size_t n = scores.size();
  std::size_t npos = 0;
  for (int v : y) npos += v == 1 ? 1u : 0u;
  const std::size_t nneg = n - npos;
  if (npos == 0 || nneg == 0) raise(Errc::single_class_input, "AUC needs both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // average ranks over tie groups, summed for positives
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k)
      if (y[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j;
  }
  const double np = static_cast<double>(npos);
  const double nn = static_cast<double>(nneg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace riskscope::eval
