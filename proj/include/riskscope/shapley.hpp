#pragma once

#include <functional>

#include "riskscope/model.hpp"

namespace riskscope::shap {

struct Attribution {
  double base = 0.0;        // expected prediction over the background
  std::vector<double> phi;  // one entry per feature group
  double prediction = 0.0;  // base + sum(phi) within 1e-9
  std::vector<std::string> groups;
};

using PredictFn = std::function<double(std::span<const double>)>;

/// Exact Shapley values by full subset enumeration over feature groups
/// (one-hot members are marginalized jointly). The value of a coalition is
/// the mean prediction over background rows with absent groups replaced by
/// the background row's values.
Attribution shapley_exact(const PredictFn& predict, std::span<const double> x,
                          const FeatureMatrix& background, int max_d = 12);

Attribution shapley_exact(const learn::ModelArtifact& model, std::span<const double> x,
                          const FeatureMatrix& background, int max_d = 12);

struct ImportanceEntry {
  std::string group;
  double mean_abs_phi = 0.0;
};

/// Mean |phi| per group over a sample of attributions, ranked descending;
/// ties break alphabetically.
std::vector<ImportanceEntry> global_importance(std::span<const Attribution> attributions);

}  // namespace riskscope::shap
