#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riskscope/schema.hpp"
#include "riskscope/table.hpp"

namespace riskscope {

/// State-level values for the schema-declared environmental indicators.
struct StateIndicatorTable {
  struct Indicator {
    std::string name;
    std::string unit;
    Direction direction = Direction::vulnerability_increasing;
    std::vector<std::optional<double>> values;  // per state; nullopt = missing
    std::vector<double> coverage;               // fraction of source rows with a value
  };

  std::vector<std::string> states;  // sorted ascending
  std::vector<Indicator> indicators;

  std::optional<std::size_t> state_index(const std::string& code) const;
  const Indicator* find(const std::string& name) const;
};

enum class AggMethod { mean, weighted_mean };

/// Collapse county rows to one row per state. Indicator columns are the
/// schema indicators present in the table; Missing cells are ignored and the
/// per-state coverage fraction is recorded.
StateIndicatorTable aggregate_to_state(const RawTable& county_table, const std::string& key_column,
                                       const Schema& schema, AggMethod method = AggMethod::mean,
                                       const std::string& weight_column = "");

/// Union of two tables: combined state set, concatenated indicators.
StateIndicatorTable merge_state_tables(const StateIndicatorTable& a, const StateIndicatorTable& b);

std::string state_table_to_csv(const StateIndicatorTable& table);
StateIndicatorTable state_table_from_csv(const RawTable& table, const Schema& schema);

}  // namespace riskscope
