#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskscope/error.hpp"
#include "riskscope/forest.hpp"
#include "riskscope/gbdt.hpp"
#include "riskscope/kmeans.hpp"
#include "riskscope/logistic.hpp"
#include "riskscope/state_table.hpp"

namespace riskscope {

/// Everything a pipeline run needs: input paths, model parameters, explicit
/// seeds and the output directory. Loaded from JSON; individual keys may be
/// overridden with --set dotted.path=value.
struct PipelineConfig {
  // inputs
  std::vector<std::string> nhanes_paths;  // .xpt or .csv, joined on id_column
  std::string usda_csv;
  std::string epa_csv;
  std::string lms_csv;
  std::string schema_path;
  std::string boundaries_geojson;  // optional until cmd_map

  std::string id_column = "SEQN";
  std::string usda_state_key = "State";
  std::string epa_state_key = "State";
  std::string geojson_property = "name";

  AggMethod agg_method = AggMethod::mean;
  std::string agg_weight_column;

  std::string label_mode = "bmi_for_age_p95";  // or "adult_bmi30"

  std::uint64_t split_seed = 17;
  bool split_stratified = true;
  int eval_multi_seed = 0;

  learn::LogisticConfig logistic;
  learn::ForestParams forest;
  learn::GbdtParams gbdt;

  std::string explain_model = "gbdt_level";
  std::size_t explain_background_cap = 256;
  std::size_t explain_sample = 64;
  std::uint64_t explain_seed = 5;

  std::vector<std::string> envscore_indicators;  // empty: all schema indicators
  std::vector<std::string> cluster_features;     // empty: envscore indicators
  cluster::KmeansParams kmeans;

  std::string align_model = "gbdt_level";
  std::size_t align_top_n = 4;
  std::string align_risk_scope = "cohort";  // or "test"
  std::vector<std::string> align_indicators;

  std::string output_dir = "out";

  static PipelineConfig load(const std::string& path,
                             const std::vector<std::string>& set_overrides = {});

  /// Raises IoError naming the first referenced input that does not exist.
  void validate_inputs(bool need_boundaries = false) const;
};

}  // namespace riskscope
