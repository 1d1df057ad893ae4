#include "riskscope/geojson.hpp"

#include <json.hpp>

#include "riskscope/log.hpp"

namespace riskscope::geo {

using nlohmann::json;

AnnotateResult annotate_choropleth(const std::string& boundary_geojson_text,
                                   const std::string& state_property,
                                   const std::map<std::string, StateAnnotation>& annotations) {
  json doc;
  try {
    doc = json::parse(boundary_geojson_text);
  } catch (const json::parse_error& e) {
    raise(Errc::invalid_geojson, std::string("boundary file: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    raise(Errc::invalid_geojson, "boundary file is not a GeoJSON FeatureCollection");

  AnnotateResult result;
  for (auto& feature : doc["features"]) {
    if (!feature.is_object() || feature.value("type", "") != "Feature")
      raise(Errc::invalid_geojson, "features array contains a non-Feature entry");
    if (!feature.contains("properties") || !feature["properties"].is_object())
      feature["properties"] = json::object();
    json& props = feature["properties"];

    std::string key;
    if (props.contains(state_property)) {
      if (props[state_property].is_string()) key = props[state_property].get<std::string>();
      else key = props[state_property].dump();
    }
    auto it = annotations.find(key);
    if (key.empty() || it == annotations.end()) {
      ++result.unmatched;
      result.unmatched_keys.push_back(key.empty() ? "<missing property>" : key);
      continue;
    }
    props["env_score"] = it->second.env_score;
    props["env_rank"] = it->second.env_rank;
    props["cluster_label"] = it->second.cluster_label;
    props["national_risk"] = it->second.national_risk;
    ++result.matched;
  }
  for (const auto& k : result.unmatched_keys)
    logging::warn("choropleth: no annotation for feature '" + k + "'");

  result.geojson = doc.dump(2) + "\n";
  return result;
}

}  // namespace riskscope::geo
