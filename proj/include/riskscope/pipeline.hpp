#pragma once

#include "riskscope/config.hpp"

namespace riskscope::pipeline {

// Stable exit-code contract: 0 success, 2 parse, 3 schema, 4 degenerate data,
// 5 missing upstream artifact, 6 geo.
inline constexpr int kOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSchema = 3;
inline constexpr int kExitDegenerate = 4;
inline constexpr int kExitUpstream = 5;
inline constexpr int kExitGeo = 6;

int cmd_ingest(const PipelineConfig& config);
int cmd_train_eval(const PipelineConfig& config);
int cmd_explain(const PipelineConfig& config);
int cmd_envscore(const PipelineConfig& config);
int cmd_cluster(const PipelineConfig& config);
int cmd_align(const PipelineConfig& config);
int cmd_map(const PipelineConfig& config);
int cmd_all(const PipelineConfig& config);

int exit_code_for(const Error& e);

}  // namespace riskscope::pipeline
