#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "riskscope/error.hpp"

namespace riskscope {

struct Numeric {
  double value;
};

/// SAS-style missing cell; code is '.', 'A'..'Z' or '_'.
struct Missing {
  char code = '.';
};

struct Text {
  std::string value;
};

using Cell = std::variant<Numeric, Missing, Text>;

inline bool is_numeric(const Cell& c) { return std::holds_alternative<Numeric>(c); }
inline bool is_missing(const Cell& c) { return std::holds_alternative<Missing>(c); }
inline bool is_text(const Cell& c) { return std::holds_alternative<Text>(c); }
inline double numeric_value(const Cell& c) { return std::get<Numeric>(c).value; }
inline char missing_code(const Cell& c) { return std::get<Missing>(c).code; }
inline const std::string& text_value(const Cell& c) { return std::get<Text>(c).value; }

/// Row-major cell table with unique column names (uniqueness checked after
/// uppercasing, mirroring the XPORT name convention).
class RawTable {
public:
  explicit RawTable(std::vector<std::string> column_names);

  const std::vector<std::string>& column_names() const { return names_; }
  std::size_t column_count() const { return names_.size(); }
  std::size_t row_count() const { return cells_.size() / (names_.empty() ? 1 : names_.size()); }

  /// Exact-name lookup first, then case-insensitive.
  std::optional<std::size_t> find_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;  // raises MissingColumn

  void append_row(std::vector<Cell> row);

  const Cell& at(std::size_t row, std::size_t col) const { return cells_[row * names_.size() + col]; }
  Cell& at(std::size_t row, std::size_t col) { return cells_[row * names_.size() + col]; }

private:
  std::vector<std::string> names_;
  std::vector<std::string> upper_names_;
  std::vector<Cell> cells_;
};

std::string to_upper(std::string_view s);

/// Inner join of tables on a shared numeric id column; used to combine the
/// per-topic NHANES files before cohort construction. Rows with a missing id
/// are dropped. Non-id column names must not collide across tables.
RawTable merge_on_id(const std::vector<RawTable>& tables, const std::string& id_column);

}  // namespace riskscope
