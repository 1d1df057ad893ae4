#include "riskscope/table.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace riskscope {

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

RawTable::RawTable(std::vector<std::string> column_names) : names_(std::move(column_names)) {
  upper_names_.reserve(names_.size());
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    std::string u = to_upper(n);
    if (!seen.insert(u).second) raise(Errc::bad_config, "duplicate column name '" + n + "'");
    upper_names_.push_back(std::move(u));
  }
}

std::optional<std::size_t> RawTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  const std::string u = to_upper(name);
  for (std::size_t i = 0; i < upper_names_.size(); ++i)
    if (upper_names_[i] == u) return i;
  return std::nullopt;
}

std::size_t RawTable::column_index(std::string_view name) const {
  auto idx = find_column(name);
  if (!idx) raise(Errc::missing_column, "column '" + std::string(name) + "' not found");
  return *idx;
}

void RawTable::append_row(std::vector<Cell> row) {
  if (row.size() != names_.size())
    raise(Errc::ragged_row, "row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(names_.size()));
  cells_.insert(cells_.end(), std::make_move_iterator(row.begin()),
                std::make_move_iterator(row.end()));
}

RawTable merge_on_id(const std::vector<RawTable>& tables, const std::string& id_column) {
  if (tables.empty()) raise(Errc::bad_config, "merge_on_id: no tables");
  std::vector<std::string> names{id_column};
  for (const auto& t : tables) {
    const std::size_t id_col = t.column_index(id_column);
    for (std::size_t c = 0; c < t.column_count(); ++c)
      if (c != id_col) names.push_back(t.column_names()[c]);
  }
  RawTable out(std::move(names));  // duplicate-name check happens here

  const RawTable& base = tables.front();
  const std::size_t base_id = base.column_index(id_column);

  // id -> row index per secondary table
  std::vector<std::unordered_map<double, std::size_t>> index(tables.size());
  for (std::size_t t = 1; t < tables.size(); ++t) {
    const std::size_t idc = tables[t].column_index(id_column);
    for (std::size_t r = 0; r < tables[t].row_count(); ++r) {
      const Cell& c = tables[t].at(r, idc);
      if (is_numeric(c)) index[t].emplace(numeric_value(c), r);
    }
  }

  for (std::size_t r = 0; r < base.row_count(); ++r) {
    const Cell& idc = base.at(r, base_id);
    if (!is_numeric(idc)) continue;
    const double id = numeric_value(idc);

    std::vector<std::size_t> rows(tables.size(), 0);
    bool found = true;
    for (std::size_t t = 1; t < tables.size(); ++t) {
      auto it = index[t].find(id);
      if (it == index[t].end()) {
        found = false;
        break;
      }
      rows[t] = it->second;
    }
    if (!found) continue;

    std::vector<Cell> row;
    row.push_back(idc);
    rows[0] = r;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      const std::size_t idcol = tables[t].column_index(id_column);
      for (std::size_t c = 0; c < tables[t].column_count(); ++c)
        if (c != idcol) row.push_back(tables[t].at(rows[t], c));
    }
    out.append_row(std::move(row));
  }
  return out;
}

}  // namespace riskscope
