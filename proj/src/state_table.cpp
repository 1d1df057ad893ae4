#include "riskscope/state_table.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "riskscope/csv.hpp"
#include "riskscope/log.hpp"

namespace riskscope {

std::optional<std::size_t> StateIndicatorTable::state_index(const std::string& code) const {
  auto it = std::lower_bound(states.begin(), states.end(), code);
  if (it != states.end() && *it == code) return static_cast<std::size_t>(it - states.begin());
  return std::nullopt;
}

const StateIndicatorTable::Indicator* StateIndicatorTable::find(const std::string& name) const {
  for (const auto& ind : indicators)
    if (ind.name == name) return &ind;
  return nullptr;
}

StateIndicatorTable aggregate_to_state(const RawTable& county_table, const std::string& key_column,
                                       const Schema& schema, AggMethod method,
                                       const std::string& weight_column) {
  const std::size_t key_col = county_table.column_index(key_column);
  std::size_t weight_col = 0;
  if (method == AggMethod::weighted_mean) {
    if (weight_column.empty())
      raise(Errc::bad_config, "weighted_mean aggregation needs a weight column");
    weight_col = county_table.column_index(weight_column);
  }

  struct ColBinding {
    const IndicatorSpec* spec;
    std::size_t column;
  };
  std::vector<ColBinding> cols;
  for (const auto& ind : schema.indicators) {
    if (auto c = county_table.find_column(ind.name)) cols.push_back({&ind, *c});
  }
  if (cols.empty())
    raise(Errc::missing_column, "no schema indicator columns present in the county table");

  auto state_of = [&](std::size_t r) -> std::optional<std::string> {
    const Cell& c = county_table.at(r, key_col);
    if (is_text(c)) return text_value(c);
    if (is_numeric(c)) return format_double(numeric_value(c));  // numeric FIPS-style keys
    return std::nullopt;
  };

  // group row indices per state, preserving input order within a state
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < county_table.row_count(); ++r)
    if (auto s = state_of(r)) groups[*s].push_back(r);

  StateIndicatorTable out;
  for (const auto& [state, rows] : groups) out.states.push_back(state);

  for (const auto& binding : cols) {
    StateIndicatorTable::Indicator ind;
    ind.name = binding.spec->name;
    ind.unit = binding.spec->unit;
    ind.direction = binding.spec->direction;
    for (const auto& [state, rows] : groups) {
      double sum = 0.0, wsum = 0.0;
      std::size_t present = 0;
      for (std::size_t r : rows) {
        const Cell& c = county_table.at(r, binding.column);
        if (!is_numeric(c)) continue;
        double w = 1.0;
        if (method == AggMethod::weighted_mean) {
          const Cell& wc = county_table.at(r, weight_col);
          if (!is_numeric(wc)) continue;
          w = numeric_value(wc);
        }
        sum += w * numeric_value(c);
        wsum += w;
        ++present;
      }
      ind.coverage.push_back(rows.empty() ? 0.0
                                          : static_cast<double>(present) /
                                                static_cast<double>(rows.size()));
      if (present == 0) {
        ind.values.push_back(std::nullopt);
      } else {
        if (method == AggMethod::weighted_mean && wsum == 0.0)
          raise(Errc::zero_total_weight,
                "state '" + state + "' indicator '" + ind.name + "' has zero total weight");
        ind.values.push_back(sum / wsum);
      }
    }
    out.indicators.push_back(std::move(ind));
  }
  return out;
}

StateIndicatorTable merge_state_tables(const StateIndicatorTable& a, const StateIndicatorTable& b) {
  StateIndicatorTable out;
  out.states = a.states;
  for (const auto& s : b.states)
    if (!std::binary_search(out.states.begin(), out.states.end(), s)) out.states.push_back(s);
  std::sort(out.states.begin(), out.states.end());

  auto remap = [&](const StateIndicatorTable& src) {
    for (const auto& ind : src.indicators) {
      StateIndicatorTable::Indicator copy;
      copy.name = ind.name;
      copy.unit = ind.unit;
      copy.direction = ind.direction;
      copy.values.assign(out.states.size(), std::nullopt);
      copy.coverage.assign(out.states.size(), 0.0);
      for (std::size_t i = 0; i < src.states.size(); ++i) {
        const auto j = out.state_index(src.states[i]);
        copy.values[*j] = ind.values[i];
        copy.coverage[*j] = ind.coverage[i];
      }
      out.indicators.push_back(std::move(copy));
    }
  };
  remap(a);
  remap(b);
  return out;
}

std::string state_table_to_csv(const StateIndicatorTable& table) {
  std::ostringstream out;
  out << "state";
  for (const auto& ind : table.indicators)
    out << ',' << csv_quote(ind.name) << ',' << csv_quote(ind.name + "__coverage");
  out << '\n';
  for (std::size_t s = 0; s < table.states.size(); ++s) {
    out << csv_quote(table.states[s]);
    for (const auto& ind : table.indicators) {
      out << ',';
      if (ind.values[s]) out << format_double(*ind.values[s]);
      out << ',' << format_double(ind.coverage[s]);
    }
    out << '\n';
  }
  return out.str();
}

StateIndicatorTable state_table_from_csv(const RawTable& table, const Schema& schema) {
  StateIndicatorTable out;
  const std::size_t c_state = table.column_index("state");
  for (std::size_t r = 0; r < table.row_count(); ++r)
    out.states.push_back(is_text(table.at(r, c_state))
                             ? text_value(table.at(r, c_state))
                             : format_double(numeric_value(table.at(r, c_state))));
  if (!std::is_sorted(out.states.begin(), out.states.end()))
    raise(Errc::bad_config, "state column must be sorted in a persisted indicator table");

  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const std::string& name = table.column_names()[c];
    if (name == "state" || name.ends_with("__coverage")) continue;
    const IndicatorSpec* spec = schema.find_indicator(name);
    if (spec == nullptr) {
      logging::warn("indicator '" + name + "' not in schema; skipped");
      continue;
    }
    StateIndicatorTable::Indicator ind;
    ind.name = name;
    ind.unit = spec->unit;
    ind.direction = spec->direction;
    auto cov_col = table.find_column(name + "__coverage");
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      const Cell& cell = table.at(r, c);
      ind.values.push_back(is_numeric(cell) ? std::optional<double>(numeric_value(cell))
                                            : std::nullopt);
      ind.coverage.push_back(cov_col && is_numeric(table.at(r, *cov_col))
                                 ? numeric_value(table.at(r, *cov_col))
                                 : 1.0);
    }
    out.indicators.push_back(std::move(ind));
  }
  return out;
}

}  // namespace riskscope
