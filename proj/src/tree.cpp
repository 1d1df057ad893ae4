#include "riskscope/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "riskscope/parallel.hpp"

namespace riskscope::learn {

double Tree::predict(std::span<const double> x) const {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

int Tree::leaf_count() const {
  int c = 0;
  for (const auto& n : nodes) c += n.feature < 0 ? 1 : 0;
  return c;
}

int Tree::max_node_depth() const {
  int d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

namespace {

constexpr double kNoGain = -std::numeric_limits<double>::infinity();

// Per-node aggregate for either criterion. In gini mode (g,h) store
// (positive count, total count); in boost mode the gradient/hessian sums.
struct Stats {
  double a = 0.0;
  double b = 0.0;
};

struct NodeTask {
  std::vector<std::size_t> rows;
  Stats total;
  int node_id = 0;
  int depth = 0;
};

struct SplitChoice {
  double gain = kNoGain;
  int feature = -1;
  double threshold = 0.0;
};

class Builder {
public:
  Builder(const FeatureMatrix& X, const TreeParams& params, const LabelVector* y,
          std::span<const double> grad, std::span<const double> hess, Rng* rng,
          int features_per_split)
      : X_(X), params_(params), y_(y), grad_(grad), hess_(hess), rng_(rng),
        features_per_split_(features_per_split) {}

  Tree build(std::vector<std::size_t> rows);

private:
  Stats row_stats(std::span<const std::size_t> rows) const {
    Stats s;
    if (params_.criterion == SplitCriterion::gini) {
      for (std::size_t r : rows) {
        s.a += static_cast<double>(y_->y[r]);
        s.b += 1.0;
      }
    } else {
      for (std::size_t r : rows) {
        s.a += grad_[r];
        s.b += hess_[r];
      }
    }
    return s;
  }

  double leaf_value(const Stats& s) const {
    if (params_.criterion == SplitCriterion::gini) return s.b > 0.0 ? s.a / s.b : 0.0;
    return -s.a / (s.b + params_.lambda);
  }

  // gini: weighted impurity decrease; boost: structure-score improvement.
  double split_gain(const Stats& left, const Stats& right, const Stats& total) const {
    if (params_.criterion == SplitCriterion::gini) {
      auto impurity = [](const Stats& s) {
        const double p = s.a / s.b;
        return 2.0 * p * (1.0 - p);
      };
      return impurity(total) - (left.b * impurity(left) + right.b * impurity(right)) / total.b;
    }
    auto score = [&](const Stats& s) { return s.a * s.a / (s.b + params_.lambda); };
    return 0.5 * (score(left) + score(right) - score(total));
  }

  bool gain_acceptable(double gain) const {
    return params_.criterion == SplitCriterion::gini ? gain > 0.0 : gain > params_.gamma;
  }

  SplitChoice best_split_for_feature(int feature, std::span<const std::size_t> rows,
                                     const Stats& total) const;
  SplitChoice best_split(const NodeTask& task, std::span<const int> features) const;
  std::vector<int> candidate_features();

  const FeatureMatrix& X_;
  const TreeParams& params_;
  const LabelVector* y_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  Rng* rng_;
  int features_per_split_;
};

SplitChoice Builder::best_split_for_feature(int feature, std::span<const std::size_t> rows,
                                            const Stats& total) const {
  const std::size_t n = rows.size();
  thread_local std::vector<std::pair<double, std::size_t>> sorted;
  sorted.clear();
  sorted.reserve(n);
  for (std::size_t r : rows) sorted.emplace_back(X_.at(r, static_cast<std::size_t>(feature)), r);
  std::sort(sorted.begin(), sorted.end());

  SplitChoice best;
  best.feature = feature;
  Stats left;
  std::size_t left_n = 0;
  std::size_t i = 0;
  while (i < n) {
    // absorb the whole tie group
    const double v = sorted[i].first;
    while (i < n && sorted[i].first == v) {
      const std::size_t r = sorted[i].second;
      if (params_.criterion == SplitCriterion::gini) {
        left.a += static_cast<double>(y_->y[r]);
        left.b += 1.0;
      } else {
        left.a += grad_[r];
        left.b += hess_[r];
      }
      ++left_n;
      ++i;
    }
    if (i == n) break;  // no value to the right
    const std::size_t right_n = n - left_n;
    if (left_n < static_cast<std::size_t>(params_.min_leaf) ||
        right_n < static_cast<std::size_t>(params_.min_leaf))
      continue;
    Stats right{total.a - left.a, total.b - left.b};
    const double gain = split_gain(left, right, total);
    if (gain > best.gain) {
      best.gain = gain;
      best.threshold = 0.5 * (v + sorted[i].first);
    }
  }
  return best;
}

std::vector<int> Builder::candidate_features() {
  const int d = static_cast<int>(X_.d);
  std::vector<int> all(static_cast<std::size_t>(d));
  std::iota(all.begin(), all.end(), 0);
  if (rng_ == nullptr || features_per_split_ <= 0 || features_per_split_ >= d) return all;
  // partial Fisher-Yates, then sorted so the scan order stays ascending
  for (int i = 0; i < features_per_split_; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) +
                          rng_->uniform_index(static_cast<std::size_t>(d - i));
    std::swap(all[static_cast<std::size_t>(i)], all[j]);
  }
  all.resize(static_cast<std::size_t>(features_per_split_));
  std::sort(all.begin(), all.end());
  return all;
}

SplitChoice Builder::best_split(const NodeTask& task, std::span<const int> features) const {
  std::vector<SplitChoice> per_feature(features.size());
  par::for_each_index(features.size(), [&](std::size_t fi) {
    per_feature[fi] = best_split_for_feature(features[fi], task.rows, task.total);
  });
  SplitChoice best;
  for (const auto& c : per_feature)
    if (c.gain > best.gain) best = c;  // ascending feature scan: lowest index wins ties
  return best;
}

Tree Builder::build(std::vector<std::size_t> rows) {
  Tree tree;
  if (rows.empty()) {
    tree.nodes.push_back(TreeNode{});
    tree.degenerate = true;
    return tree;
  }

  bool all_identical = true;
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < X_.d && all_identical; ++c)
      all_identical = X_.at(r, c) == X_.at(rows[0], c);
    if (!all_identical) break;
  }
  tree.degenerate = all_identical;

  struct Pending {
    NodeTask task;
    SplitChoice choice;
    std::vector<int> features;
    bool expandable = false;
  };

  auto make_task = [&](std::vector<std::size_t> r, int node_id, int depth) {
    NodeTask t;
    t.total = row_stats(r);
    t.rows = std::move(r);
    t.node_id = node_id;
    t.depth = depth;
    return t;
  };

  auto evaluate = [&](NodeTask task) {
    Pending p;
    p.features = candidate_features();
    const bool depth_ok = params_.growth == GrowthStrategy::level_wise
                              ? task.depth < params_.max_depth
                              : true;
    const bool size_ok = task.rows.size() >= 2 * static_cast<std::size_t>(params_.min_leaf);
    if (depth_ok && size_ok) {
      p.choice = best_split(task, p.features);
      p.expandable = p.choice.feature >= 0 && std::isfinite(p.choice.gain) &&
                     gain_acceptable(p.choice.gain);
    }
    p.task = std::move(task);
    return p;
  };

  tree.nodes.push_back(TreeNode{});
  tree.nodes[0].depth = 0;
  tree.nodes[0].value = leaf_value(row_stats(rows));

  const std::size_t max_leaves =
      params_.growth == GrowthStrategy::leaf_wise
          ? (params_.max_depth >= 30 ? std::numeric_limits<std::size_t>::max()
                                     : (std::size_t{1} << params_.max_depth))
          : std::numeric_limits<std::size_t>::max();

  std::vector<Pending> frontier;
  frontier.push_back(evaluate(make_task(std::move(rows), 0, 0)));
  std::size_t leaves = 1;

  while (true) {
    // pick the next node to split
    std::size_t pick = frontier.size();
    if (params_.growth == GrowthStrategy::level_wise) {
      for (std::size_t i = 0; i < frontier.size(); ++i)
        if (frontier[i].expandable) {
          pick = i;
          break;  // creation order = breadth-first
        }
    } else {
      double best_gain = kNoGain;
      for (std::size_t i = 0; i < frontier.size(); ++i)
        if (frontier[i].expandable && frontier[i].choice.gain > best_gain) {
          best_gain = frontier[i].choice.gain;
          pick = i;  // strict > keeps the earliest-created node on ties
        }
      if (leaves >= max_leaves) pick = frontier.size();
    }
    if (pick == frontier.size()) break;

    Pending p = std::move(frontier[pick]);
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(p.task.rows.size());
    for (std::size_t r : p.task.rows) {
      if (X_.at(r, static_cast<std::size_t>(p.choice.feature)) < p.choice.threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }

    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(p.task.node_id)];
    parent.feature = p.choice.feature;
    parent.threshold = p.choice.threshold;
    parent.left = left_id;
    parent.right = right_id;

    for (int side = 0; side < 2; ++side) {
      auto& child_rows = side == 0 ? left_rows : right_rows;
      TreeNode child;
      child.depth = p.task.depth + 1;
      NodeTask t = make_task(std::move(child_rows), side == 0 ? left_id : right_id,
                             p.task.depth + 1);
      child.value = leaf_value(t.total);
      tree.nodes.push_back(child);
      frontier.push_back(evaluate(std::move(t)));
    }
    ++leaves;  // one leaf became two
  }
  return tree;
}

}  // namespace

Tree fit_tree_rows(const FeatureMatrix& X, const TreeParams& params, std::vector<std::size_t> rows,
                   const LabelVector* y, std::span<const double> grad,
                   std::span<const double> hess, Rng* feature_rng, int features_per_split) {
  if (params.criterion == SplitCriterion::gini && y == nullptr)
    raise(Errc::bad_config, "gini criterion needs labels");
  if (params.criterion == SplitCriterion::boost_gain &&
      (grad.size() != X.n || hess.size() != X.n))
    raise(Errc::length_mismatch, "gradient/hessian length must match rows");
  Builder builder(X, params, y, grad, hess, feature_rng, features_per_split);
  return builder.build(std::move(rows));
}

Tree fit_tree_gini(const FeatureMatrix& X, const LabelVector& y, const TreeParams& params) {
  if (y.y.size() != X.n) raise(Errc::length_mismatch, "labels do not match feature rows");
  std::vector<std::size_t> rows(X.n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_tree_rows(X, params, std::move(rows), &y, {}, {});
}

Tree fit_tree_boost(const FeatureMatrix& X, std::span<const double> grad,
                    std::span<const double> hess, const TreeParams& params) {
  TreeParams p = params;
  p.criterion = SplitCriterion::boost_gain;
  std::vector<std::size_t> rows(X.n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return fit_tree_rows(X, p, std::move(rows), nullptr, grad, hess);
}

}  // namespace riskscope::learn
