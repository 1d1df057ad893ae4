#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riskscope/error.hpp"

namespace riskscope {

enum class Role { predictor, outcome_input, id, weight_kg, height_cm };
enum class VarKind { numeric, category, ordered };
enum class Direction { vulnerability_increasing, vulnerability_decreasing };
enum class MissingPolicy { drop, impute_median };

struct VariableSpec {
  std::string source;  // column name in the raw file, e.g. RIDAGEYR
  Role role = Role::predictor;
  std::string target;  // cohort field name
  VarKind kind = VarKind::numeric;
  std::map<double, std::string> levels;  // category code -> label
  std::vector<double> missing_codes;     // numeric sentinels treated as missing
};

struct IndicatorSpec {
  std::string name;  // column name in the macro CSVs
  std::string unit;  // recorded verbatim
  Direction direction = Direction::vulnerability_increasing;
};

/// Variable roles, recode rules and missing-code sentinels for the micro
/// files, plus the indicator direction map for the macro files. Loaded from
/// one JSON document.
struct Schema {
  int version = 1;
  std::vector<VariableSpec> variables;
  std::vector<IndicatorSpec> indicators;
  MissingPolicy missing_policy = MissingPolicy::drop;

  static Schema load_file(const std::string& path);
  static Schema from_json_text(const std::string& text, const std::string& origin);

  const VariableSpec* find_variable(const std::string& target_or_source) const;
  const VariableSpec& variable_by_role(Role role) const;  // unique roles only
  const IndicatorSpec* find_indicator(const std::string& name) const;
};

}  // namespace riskscope
