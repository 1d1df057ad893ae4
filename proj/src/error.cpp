#include "riskscope/error.hpp"

namespace riskscope {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::truncated_record: return "TruncatedRecord";
    case Errc::unsupported_version: return "UnsupportedVersion";
    case Errc::ragged_row: return "RaggedRow";
    case Errc::quote_error: return "QuoteError";
    case Errc::missing_column: return "MissingColumn";
    case Errc::empty_cohort: return "EmptyCohort";
    case Errc::zero_total_weight: return "ZeroTotalWeight";
    case Errc::non_positive_input: return "NonPositiveInput";
    case Errc::age_out_of_reference_range: return "AgeOutOfReferenceRange";
    case Errc::single_class_input: return "SingleClassInput";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::layout_mismatch: return "LayoutMismatch";
    case Errc::numerical_degeneracy: return "NumericalDegeneracy";
    case Errc::too_few_rows: return "TooFewRows";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::too_many_features: return "TooManyFeatures";
    case Errc::empty_background: return "EmptyBackground";
    case Errc::all_missing: return "AllMissing";
    case Errc::no_indicators: return "NoIndicators";
    case Errc::empty_column: return "EmptyColumn";
    case Errc::k_exceeds_distinct_points: return "KExceedsDistinctPoints";
    case Errc::empty_predictions: return "EmptyPredictions";
    case Errc::key_mismatch: return "KeyMismatch";
    case Errc::invalid_geojson: return "InvalidGeoJson";
    case Errc::bad_config: return "BadConfig";
    case Errc::io_error: return "IoError";
    case Errc::missing_upstream: return "MissingUpstream";
  }
  return "UnknownError";
}

}  // namespace riskscope
