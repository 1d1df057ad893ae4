#pragma once

#include <stdexcept>
#include <string>

namespace riskscope {

enum class Errc {
  // ingest / parsing
  malformed_header,
  truncated_record,
  unsupported_version,
  ragged_row,
  quote_error,
  missing_column,
  empty_cohort,
  zero_total_weight,
  // growth
  non_positive_input,
  age_out_of_reference_range,
  // learn
  single_class_input,
  dimension_mismatch,
  layout_mismatch,
  numerical_degeneracy,
  too_few_rows,
  // eval
  length_mismatch,
  // explain
  too_many_features,
  empty_background,
  // macroindex
  all_missing,
  no_indicators,
  empty_column,
  // cluster
  k_exceeds_distinct_points,
  // align
  empty_predictions,
  key_mismatch,
  // cli / plumbing
  invalid_geojson,
  bad_config,
  io_error,
  missing_upstream,
};

const char* errc_name(Errc c) noexcept;

/// Library-wide exception: a stable error code plus a human-readable message
/// that names the offending file/column/row where applicable.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace riskscope
