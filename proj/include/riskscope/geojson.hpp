#pragma once

#include <map>
#include <string>

#include "riskscope/align.hpp"

namespace riskscope::geo {

struct StateAnnotation {
  double env_score = 0.0;
  int env_rank = 0;
  std::string cluster_label;
  double national_risk = 0.0;
};

struct AnnotateResult {
  std::string geojson;  // serialized FeatureCollection
  std::size_t matched = 0;
  std::size_t unmatched = 0;
  std::vector<std::string> unmatched_keys;
};

/// Inject env_score / env_rank / cluster_label / national_risk properties
/// into the features whose `state_property` value matches an annotated state.
/// Features without a match are passed through untouched and counted.
AnnotateResult annotate_choropleth(const std::string& boundary_geojson_text,
                                   const std::string& state_property,
                                   const std::map<std::string, StateAnnotation>& annotations);

}  // namespace riskscope::geo
