#include "riskscope/config.hpp"

#include <json.hpp>

#include "riskscope/fsutil.hpp"

namespace riskscope {

using nlohmann::json;

namespace {

void apply_override(json& doc, const std::string& expr) {
  const auto eq = expr.find('=');
  if (eq == std::string::npos)
    raise(Errc::bad_config, "--set expects key.path=value, got '" + expr + "'");
  const std::string path = expr.substr(0, eq);
  const std::string value = expr.substr(eq + 1);

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key =
        dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start);
    if (key.empty()) raise(Errc::bad_config, "--set path has an empty segment: '" + path + "'");
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

learn::GrowthStrategy growth_from_string(const std::string& s) {
  if (s == "level_wise") return learn::GrowthStrategy::level_wise;
  if (s == "leaf_wise") return learn::GrowthStrategy::leaf_wise;
  raise(Errc::bad_config, "unknown growth strategy '" + s + "'");
}

std::vector<std::string> string_list(const json& j) {
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path,
                                    const std::vector<std::string>& set_overrides) {
  json doc;
  try {
    doc = json::parse(fsutil::read_text(path));
  } catch (const json::parse_error& e) {
    raise(Errc::bad_config, path + ": " + e.what());
  }
  for (const auto& expr : set_overrides) apply_override(doc, expr);

  PipelineConfig c;
  const json inputs = doc.value("inputs", json::object());
  if (inputs.contains("nhanes")) c.nhanes_paths = string_list(inputs["nhanes"]);
  c.usda_csv = inputs.value("usda_csv", "");
  c.epa_csv = inputs.value("epa_csv", "");
  c.lms_csv = inputs.value("lms_csv", "");
  c.schema_path = inputs.value("schema", "");
  c.boundaries_geojson = inputs.value("boundaries_geojson", "");

  c.id_column = doc.value("id_column", c.id_column);
  const json sk = doc.value("state_key", json::object());
  c.usda_state_key = sk.value("usda", c.usda_state_key);
  c.epa_state_key = sk.value("epa", c.epa_state_key);
  c.geojson_property = sk.value("geojson_property", c.geojson_property);

  const json agg = doc.value("aggregation", json::object());
  const std::string method = agg.value("method", "mean");
  if (method == "mean") c.agg_method = AggMethod::mean;
  else if (method == "weighted_mean") c.agg_method = AggMethod::weighted_mean;
  else raise(Errc::bad_config, "unknown aggregation method '" + method + "'");
  c.agg_weight_column = agg.value("weight_column", "");

  c.label_mode = doc.value("label_mode", c.label_mode);
  if (c.label_mode != "bmi_for_age_p95" && c.label_mode != "adult_bmi30")
    raise(Errc::bad_config, "unknown label_mode '" + c.label_mode + "'");

  const json split = doc.value("split", json::object());
  c.split_seed = split.value("seed", c.split_seed);
  c.split_stratified = split.value("stratified", c.split_stratified);

  const json ev = doc.value("eval", json::object());
  c.eval_multi_seed = ev.value("multi_seed", 0);

  const json models = doc.value("models", json::object());
  if (models.contains("logistic")) {
    const json& m = models["logistic"];
    c.logistic.max_iter = m.value("max_iter", c.logistic.max_iter);
    c.logistic.tol = m.value("tol", c.logistic.tol);
    c.logistic.l2 = m.value("l2", c.logistic.l2);
  }
  if (models.contains("forest")) {
    const json& m = models["forest"];
    c.forest.trees = m.value("trees", c.forest.trees);
    c.forest.max_depth = m.value("max_depth", c.forest.max_depth);
    c.forest.min_leaf = m.value("min_leaf", c.forest.min_leaf);
    c.forest.features_per_split = m.value("features_per_split", c.forest.features_per_split);
    c.forest.bootstrap = m.value("bootstrap", c.forest.bootstrap);
    c.forest.seed = m.value("seed", c.forest.seed);
  }
  if (models.contains("gbdt")) {
    const json& m = models["gbdt"];
    c.gbdt.rounds = m.value("rounds", c.gbdt.rounds);
    c.gbdt.learning_rate = m.value("learning_rate", c.gbdt.learning_rate);
    c.gbdt.max_depth = m.value("max_depth", c.gbdt.max_depth);
    c.gbdt.min_leaf = m.value("min_leaf", c.gbdt.min_leaf);
    c.gbdt.lambda = m.value("lambda", c.gbdt.lambda);
    c.gbdt.gamma = m.value("gamma", c.gbdt.gamma);
    if (m.contains("growth")) c.gbdt.growth = growth_from_string(m["growth"].get<std::string>());
  }

  const json ex = doc.value("explain", json::object());
  c.explain_model = ex.value("model", c.explain_model);
  c.explain_background_cap = ex.value("background_cap", c.explain_background_cap);
  c.explain_sample = ex.value("sample", c.explain_sample);
  c.explain_seed = ex.value("seed", c.explain_seed);

  const json env = doc.value("envscore", json::object());
  if (env.contains("indicators")) c.envscore_indicators = string_list(env["indicators"]);

  const json cl = doc.value("cluster", json::object());
  c.kmeans.k = cl.value("k", c.kmeans.k);
  c.kmeans.seed = cl.value("seed", c.kmeans.seed);
  c.kmeans.restarts = cl.value("restarts", c.kmeans.restarts);
  c.kmeans.tol = cl.value("tol", c.kmeans.tol);
  c.kmeans.max_iter = cl.value("max_iter", c.kmeans.max_iter);
  if (cl.contains("features")) c.cluster_features = string_list(cl["features"]);

  const json al = doc.value("align", json::object());
  c.align_model = al.value("model", c.align_model);
  c.align_top_n = al.value("top_n", c.align_top_n);
  c.align_risk_scope = al.value("risk_scope", c.align_risk_scope);
  if (al.contains("indicators")) c.align_indicators = string_list(al["indicators"]);

  c.output_dir = doc.value("output_dir", c.output_dir);
  return c;
}

void PipelineConfig::validate_inputs(bool need_boundaries) const {
  std::vector<std::string> paths = nhanes_paths;
  paths.push_back(usda_csv);
  paths.push_back(epa_csv);
  paths.push_back(lms_csv);
  paths.push_back(schema_path);
  if (need_boundaries) paths.push_back(boundaries_geojson);
  for (const auto& p : paths) {
    if (p.empty()) raise(Errc::bad_config, "config is missing a required input path");
    if (!fsutil::exists(p)) raise(Errc::io_error, "input file does not exist: '" + p + "'");
  }
}

}  // namespace riskscope
