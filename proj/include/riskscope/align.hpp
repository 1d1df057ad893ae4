#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskscope/kmeans.hpp"
#include "riskscope/macroindex.hpp"

namespace riskscope::align {

/// Arithmetic mean of individual predicted probabilities; the constant
/// reference broadcast to every state.
double national_mean_risk(std::span<const double> predictions);

enum class AssocMethod { pearson, spearman };

struct Association {
  AssocMethod method = AssocMethod::pearson;
  double statistic = 0.0;
  bool defined = false;  // false when either series has zero variance
};

Association cross_scale_association(std::span<const double> a, std::span<const double> b,
                                    AssocMethod method);

struct OverlayRow {
  std::string state;
  double national_risk = 0.0;
  double env_score = 0.0;
  int env_rank = 0;
  std::string cluster_label;
  std::vector<std::optional<double>> indicators;  // raw values, overlay column order
};

struct AlignmentReport {
  std::vector<std::string> indicator_names;
  std::vector<OverlayRow> rows;           // top_n by EnvScore descending
  double national_risk = 0.0;
  Association association;                // EnvScore vs the broadcast reference
  std::vector<std::string> dropped_states;  // present in some inputs but not all
};

/// Join EnvScore, cluster labels and selected raw indicators over the
/// intersection of state sets; sort by EnvScore descending (ties by state
/// code) and keep the top_n rows.
AlignmentReport overlay_table(const macroindex::EnvScoreTable& scores,
                              const std::map<std::string, std::string>& cluster_labels,
                              const StateIndicatorTable& indicators,
                              std::span<const std::string> indicator_names, double national_risk,
                              std::size_t top_n);

}  // namespace riskscope::align
