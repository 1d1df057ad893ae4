#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskscope/cohort.hpp"
#include "riskscope/error.hpp"

namespace riskscope {

enum class ColumnKind { numeric, one_hot };

struct ColumnMeta {
  std::string name;   // e.g. "age_years" or "race_eth=Mexican American"
  ColumnKind kind = ColumnKind::numeric;
  std::string group;  // source variable; one-hot members share a group
};

/// Dense row-major feature matrix. One-hot members of a group sum to 1 per
/// row; all values finite.
struct FeatureMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;  // n * d
  std::vector<ColumnMeta> column_meta;

  double at(std::size_t row, std::size_t col) const { return values[row * d + col]; }
  double& at(std::size_t row, std::size_t col) { return values[row * d + col]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * d, d}; }

  std::vector<std::string> group_names() const;  // unique, in column order
  std::vector<std::vector<std::size_t>> group_columns() const;
};

struct LabelVector {
  std::vector<int> y;  // values in {0,1}
};

/// Encode the cohort: numeric age/income/household/education columns plus
/// one-hot groups for sex, race_eth and nativity.
FeatureMatrix encode_features(const Cohort& cohort);
LabelVector labels_of(const Cohort& cohort);

bool same_layout(const std::vector<ColumnMeta>& a, const std::vector<ColumnMeta>& b);

}  // namespace riskscope
