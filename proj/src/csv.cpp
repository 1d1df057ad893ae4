#include "riskscope/csv.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace riskscope {

namespace {

Cell classify_cell(const std::string& raw) {
  if (raw.empty()) return Missing{'.'};
  // full-string numeric parse; anything else stays text
  const char* begin = raw.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin + raw.size() && errno != ERANGE && std::isfinite(v)) return Numeric{v};
  return Cell{Text{raw}};
}

}  // namespace

RawTable parse_csv(std::string_view bytes, const CsvOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> current;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool any_field = false;

  auto end_field = [&] {
    current.push_back(field);
    field.clear();
    field_was_quoted = false;
    any_field = true;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(current));
    current.clear();
    any_field = false;
  };

  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const char c = bytes[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && bytes[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        // closing quote must be followed by delimiter, newline, or EOF
        if (i < n && bytes[i] != options.delimiter && bytes[i] != '\n' && bytes[i] != '\r')
          raise(Errc::quote_error,
                "unexpected character after closing quote at byte " + std::to_string(i));
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty())
        raise(Errc::quote_error, "quote inside unquoted field at byte " + std::to_string(i));
      in_quotes = true;
      field_was_quoted = true;
      ++i;
      continue;
    }
    if (c == options.delimiter) {
      end_field();
      ++i;
      continue;
    }
    if (c == '\r') {
      if (i + 1 < n && bytes[i + 1] == '\n') ++i;
      end_row();
      ++i;
      continue;
    }
    if (c == '\n') {
      end_row();
      ++i;
      continue;
    }
    field.push_back(c);
    ++i;
  }
  if (in_quotes) raise(Errc::quote_error, "unterminated quoted field at end of input");
  if (any_field || !field.empty() || field_was_quoted) end_row();

  if (rows.empty()) raise(Errc::bad_config, "empty CSV input");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (options.header) {
    names = rows[0];
    first_data = 1;
  } else {
    for (std::size_t c = 0; c < rows[0].size(); ++c) names.push_back("C" + std::to_string(c + 1));
  }

  RawTable table(std::move(names));
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    if (rows[r].size() != table.column_count())
      raise(Errc::ragged_row, "row " + std::to_string(r + 1) + " has " +
                                  std::to_string(rows[r].size()) + " fields, expected " +
                                  std::to_string(table.column_count()));
    std::vector<Cell> cells;
    cells.reserve(rows[r].size());
    for (const auto& f : rows[r]) cells.push_back(classify_cell(f));
    table.append_row(std::move(cells));
  }
  return table;
}

RawTable read_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_csv(text, options);
}

std::string format_double(double v) {
  // shortest representation that parses back to the same double
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  assert(res.ec == std::errc());
  return std::string(buf, res.ptr);
}

std::string csv_quote(std::string_view field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

}  // namespace riskscope
