#include "riskscope/forest.hpp"

#include <cmath>
#include <numeric>

#include "riskscope/parallel.hpp"

namespace riskscope::learn {

double Forest::predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

Forest fit_forest(const FeatureMatrix& X, const LabelVector& y, const ForestParams& params) {
  if (params.trees < 1) raise(Errc::bad_config, "forest needs at least one tree");
  if (y.y.size() != X.n) raise(Errc::length_mismatch, "labels do not match feature rows");

  int fps = params.features_per_split;
  if (fps <= 0) fps = static_cast<int>(std::floor(std::sqrt(static_cast<double>(X.d))));

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.criterion = SplitCriterion::gini;

  Forest forest;
  forest.params = params;
  forest.trees.resize(static_cast<std::size_t>(params.trees));

  par::for_each_index(static_cast<std::size_t>(params.trees), [&](std::size_t t) {
    Rng rng(seed_mix(params.seed, t));
    std::vector<std::size_t> rows(X.n);
    if (params.bootstrap) {
      for (auto& r : rows) r = rng.uniform_index(X.n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees[t] = fit_tree_rows(X, tp, std::move(rows), &y, {}, {}, &rng, fps);
  });
  return forest;
}

}  // namespace riskscope::learn
