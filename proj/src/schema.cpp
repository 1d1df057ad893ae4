#include "riskscope/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace riskscope {

namespace {

using nlohmann::json;

const std::set<std::string> kAllowedPredictors = {
    "RIDAGEYR", "RIAGENDR", "RIDRETH3", "INDFMPIR", "DMDHHSIZ", "DMDHREDZ", "DMDBORN4"};

Role parse_role(const std::string& s, const std::string& origin) {
  if (s == "predictor") return Role::predictor;
  if (s == "outcome_input") return Role::outcome_input;
  if (s == "id") return Role::id;
  if (s == "weight_kg") return Role::weight_kg;
  if (s == "height_cm") return Role::height_cm;
  raise(Errc::bad_config, origin + ": unknown role '" + s + "'");
}

VarKind parse_kind(const std::string& s, const std::string& origin) {
  if (s == "numeric") return VarKind::numeric;
  if (s == "category") return VarKind::category;
  if (s == "ordered") return VarKind::ordered;
  raise(Errc::bad_config, origin + ": unknown variable kind '" + s + "'");
}

Direction parse_direction(const std::string& s, const std::string& origin) {
  if (s == "vulnerability_increasing") return Direction::vulnerability_increasing;
  if (s == "vulnerability_decreasing") return Direction::vulnerability_decreasing;
  raise(Errc::bad_config, origin + ": unknown direction '" + s + "'");
}

}  // namespace

Schema Schema::from_json_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::bad_config, origin + ": " + e.what());
  }

  Schema schema;
  schema.version = doc.value("version", 1);
  if (doc.contains("missing_policy")) {
    const std::string p = doc["missing_policy"].get<std::string>();
    if (p == "drop") schema.missing_policy = MissingPolicy::drop;
    else if (p == "impute_median") schema.missing_policy = MissingPolicy::impute_median;
    else raise(Errc::bad_config, origin + ": unknown missing_policy '" + p + "'");
  }

  int n_weight = 0, n_height = 0;
  for (const auto& v : doc.value("variables", json::array())) {
    VariableSpec spec;
    spec.source = v.at("source").get<std::string>();
    spec.role = parse_role(v.at("role").get<std::string>(), origin);
    spec.target = v.value("target", spec.source);
    spec.kind = parse_kind(v.value("kind", "numeric"), origin);
    if (v.contains("levels")) {
      for (auto it = v["levels"].begin(); it != v["levels"].end(); ++it)
        spec.levels.emplace(std::stod(it.key()), it.value().get<std::string>());
    }
    if (v.contains("missing_codes"))
      for (const auto& m : v["missing_codes"]) spec.missing_codes.push_back(m.get<double>());

    if (spec.role == Role::predictor && kAllowedPredictors.count(spec.source) == 0)
      raise(Errc::bad_config, origin + ": predictor '" + spec.source +
                                  "' is not in the supported NHANES predictor set");
    if (spec.role == Role::weight_kg) ++n_weight;
    if (spec.role == Role::height_cm) ++n_height;
    if (spec.kind == VarKind::category && spec.levels.empty())
      raise(Errc::bad_config, origin + ": category variable '" + spec.source + "' needs levels");
    schema.variables.push_back(std::move(spec));
  }
  if (n_weight != 1 || n_height != 1)
    raise(Errc::bad_config,
          origin + ": schema must declare exactly one weight_kg and one height_cm variable");

  for (const auto& ind : doc.value("indicators", json::array())) {
    IndicatorSpec spec;
    spec.name = ind.at("name").get<std::string>();
    spec.unit = ind.value("unit", "");
    spec.direction = parse_direction(ind.at("direction").get<std::string>(), origin);
    schema.indicators.push_back(std::move(spec));
  }
  return schema;
}

Schema Schema::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open schema '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path);
}

const VariableSpec* Schema::find_variable(const std::string& target_or_source) const {
  for (const auto& v : variables)
    if (v.target == target_or_source || v.source == target_or_source) return &v;
  return nullptr;
}

const VariableSpec& Schema::variable_by_role(Role role) const {
  for (const auto& v : variables)
    if (v.role == role) return v;
  raise(Errc::bad_config, "schema has no variable with the requested role");
}

const IndicatorSpec* Schema::find_indicator(const std::string& name) const {
  for (const auto& i : indicators)
    if (i.name == name) return &i;
  return nullptr;
}

}  // namespace riskscope
