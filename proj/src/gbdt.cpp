#include "riskscope/gbdt.hpp"

#include <algorithm>
#include <cmath>

#include "riskscope/logistic.hpp"
#include "riskscope/parallel.hpp"

namespace riskscope::learn {

double BoostedEnsemble::raw_score(std::span<const double> x) const {
  double f = base_score;
  for (const auto& t : stages) f += params.learning_rate * t.predict(x);
  return f;
}

double BoostedEnsemble::predict(std::span<const double> x) const { return sigmoid(raw_score(x)); }

BoostedEnsemble fit_gbdt(const FeatureMatrix& X, const LabelVector& y, const GbdtParams& params) {
  const std::size_t n = X.n;
  if (y.y.size() != n) raise(Errc::length_mismatch, "labels do not match feature rows");
  if (params.rounds < 0) raise(Errc::bad_config, "rounds must be non-negative");
  const auto pos = static_cast<std::size_t>(std::count(y.y.begin(), y.y.end(), 1));
  if (pos == 0 || pos == n) raise(Errc::single_class_input, "labels contain a single class");

  BoostedEnsemble model;
  model.params = params;
  model.base_score = logit(static_cast<double>(pos) / static_cast<double>(n));

  TreeParams tp;
  tp.criterion = SplitCriterion::boost_gain;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  tp.lambda = params.lambda;
  tp.gamma = params.gamma;
  tp.growth = params.growth;

  std::vector<double> score(n, model.base_score);
  std::vector<double> prob(n), grad(n), hess(n);

  auto refresh = [&] {
    par::for_each_index(n, [&](std::size_t i) {
      prob[i] = sigmoid(score[i]);
      grad[i] = prob[i] - static_cast<double>(y.y[i]);
      hess[i] = prob[i] * (1.0 - prob[i]);
    });
  };

  refresh();
  model.train_log_loss.push_back(log_loss(prob, y.y));

  for (int round = 0; round < params.rounds; ++round) {
    bool any_curvature = false;
    for (std::size_t i = 0; i < n && !any_curvature; ++i) any_curvature = hess[i] >= 1e-12;
    if (!any_curvature)
      raise(Errc::numerical_degeneracy,
            "all hessians below 1e-12 at round " + std::to_string(round));

    Tree tree = fit_tree_boost(X, grad, hess, tp);
    par::for_each_index(n, [&](std::size_t i) {
      score[i] += params.learning_rate * tree.predict(X.row(i));
    });
    model.stages.push_back(std::move(tree));

    refresh();
    model.train_log_loss.push_back(log_loss(prob, y.y));
  }
  return model;
}

}  // namespace riskscope::learn
