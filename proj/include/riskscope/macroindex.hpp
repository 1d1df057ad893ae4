#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskscope/state_table.hpp"

namespace riskscope::macroindex {

/// Min-max scaled indicator columns, direction-aligned so that higher always
/// means more vulnerable; provenance records the applied transform.
struct NormalizedTable {
  struct Column {
    std::string name;
    Direction direction = Direction::vulnerability_increasing;
    double raw_min = 0.0;
    double raw_max = 0.0;
    std::vector<std::optional<double>> z;  // per state, in [0,1]
  };
  struct Excluded {
    std::string name;
    std::string reason;  // "constant" | "all_missing"
  };

  std::vector<std::string> states;
  std::vector<Column> columns;
  std::vector<Excluded> excluded;
};

NormalizedTable minmax_normalize(const StateIndicatorTable& table);

struct EnvScoreRow {
  std::string state;
  double score = 0.0;       // mean of the state's present aligned Z values
  int rank = 0;             // 1 = most vulnerable
  int indicators_used = 0;  // coverage
};

/// Rows sorted descending by score; ties ordered by state code.
struct EnvScoreTable {
  std::vector<EnvScoreRow> rows;

  const EnvScoreRow* find(const std::string& state) const;
};

EnvScoreTable envscore(const NormalizedTable& norm);

struct ColumnStats {
  double min = 0.0, max = 0.0, mean = 0.0, std = 0.0;
};

/// Population standard deviation (N divisor) unless sample=true.
ColumnStats descriptive_stats(std::span<const double> values, bool sample = false);

}  // namespace riskscope::macroindex
