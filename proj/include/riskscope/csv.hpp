#pragma once

#include <string>
#include <string_view>

#include "riskscope/table.hpp"

namespace riskscope {

struct CsvOptions {
  char delimiter = ',';
  bool header = true;  // without a header, columns are named C1..Cn
};

/// RFC-4180 parser. Cells that parse fully as finite numbers become Numeric,
/// empty cells become Missing("."), everything else Text.
RawTable parse_csv(std::string_view bytes, const CsvOptions& options = {});

RawTable read_csv_file(const std::string& path, const CsvOptions& options = {});

/// RFC-4180 quoting; numbers written in shortest round-trip form.
std::string csv_quote(std::string_view field);
std::string format_double(double v);

}  // namespace riskscope
