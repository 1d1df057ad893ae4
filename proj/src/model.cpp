#include "riskscope/model.hpp"

#include <json.hpp>

#include "riskscope/parallel.hpp"

namespace riskscope::learn {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json tree_to_json(const Tree& tree, std::size_t node = 0) {
  const TreeNode& n = tree.nodes[node];
  if (n.feature < 0) return json::array({n.value});
  return json::array({n.feature, n.threshold,
                      tree_to_json(tree, static_cast<std::size_t>(n.left)),
                      tree_to_json(tree, static_cast<std::size_t>(n.right))});
}

int tree_from_json(const json& j, Tree* tree, int depth) {
  const int id = static_cast<int>(tree->nodes.size());
  tree->nodes.push_back(TreeNode{});
  tree->nodes.back().depth = depth;
  if (j.size() == 1) {
    tree->nodes[static_cast<std::size_t>(id)].value = j[0].get<double>();
    return id;
  }
  const int feature = j[0].get<int>();
  const double threshold = j[1].get<double>();
  const int left = tree_from_json(j[2], tree, depth + 1);
  const int right = tree_from_json(j[3], tree, depth + 1);
  TreeNode& n = tree->nodes[static_cast<std::size_t>(id)];
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  return id;
}

json layout_to_json(const std::vector<ColumnMeta>& layout) {
  json arr = json::array();
  for (const auto& c : layout)
    arr.push_back({{"name", c.name},
                   {"kind", c.kind == ColumnKind::numeric ? "numeric" : "one_hot"},
                   {"group", c.group}});
  return arr;
}

std::vector<ColumnMeta> layout_from_json(const json& arr) {
  std::vector<ColumnMeta> layout;
  for (const auto& c : arr)
    layout.push_back({c.at("name").get<std::string>(),
                      c.at("kind").get<std::string>() == "numeric" ? ColumnKind::numeric
                                                                   : ColumnKind::one_hot,
                      c.at("group").get<std::string>()});
  return layout;
}

}  // namespace

const char* ModelArtifact::kind() const {
  if (std::holds_alternative<LogisticModel>(model)) return "logistic";
  if (std::holds_alternative<Forest>(model)) return "forest";
  return "gbdt";
}

double predict_proba(const ModelArtifact& artifact, std::span<const double> x) {
  if (x.size() != artifact.layout.size())
    raise(Errc::dimension_mismatch, "feature vector has " + std::to_string(x.size()) +
                                        " entries, layout expects " +
                                        std::to_string(artifact.layout.size()));
  if (std::holds_alternative<LogisticModel>(artifact.model))
    return predict_logistic(std::get<LogisticModel>(artifact.model), x);
  if (std::holds_alternative<Forest>(artifact.model))
    return std::get<Forest>(artifact.model).predict(x);
  return std::get<BoostedEnsemble>(artifact.model).predict(x);
}

std::vector<double> predict_proba_matrix(const ModelArtifact& artifact, const FeatureMatrix& X) {
  if (!same_layout(artifact.layout, X.column_meta))
    raise(Errc::layout_mismatch, "feature matrix layout differs from the training layout");
  std::vector<double> out(X.n);
  par::for_each_index(X.n, [&](std::size_t i) { out[i] = predict_proba(artifact, X.row(i)); });
  return out;
}

std::string model_to_json(const ModelArtifact& artifact) {
  json doc;
  doc["format"] = "riskscope-model";
  doc["version"] = kFormatVersion;
  doc["kind"] = artifact.kind();
  doc["layout"] = layout_to_json(artifact.layout);

  if (const auto* lm = std::get_if<LogisticModel>(&artifact.model)) {
    doc["logistic"] = {{"intercept", lm->intercept},
                       {"coef", lm->coef},
                       {"converged", lm->converged},
                       {"iterations", lm->iterations}};
  } else if (const auto* rf = std::get_if<Forest>(&artifact.model)) {
    json trees = json::array();
    for (const auto& t : rf->trees) trees.push_back(tree_to_json(t));
    doc["forest"] = {{"trees", trees},
                     {"count", rf->trees.size()},
                     {"seed", rf->params.seed},
                     {"max_depth", rf->params.max_depth},
                     {"min_leaf", rf->params.min_leaf},
                     {"features_per_split", rf->params.features_per_split},
                     {"bootstrap", rf->params.bootstrap}};
  } else {
    const auto& gb = std::get<BoostedEnsemble>(artifact.model);
    json stages = json::array();
    for (const auto& t : gb.stages) stages.push_back(tree_to_json(t));
    doc["gbdt"] = {{"base_score", gb.base_score},
                   {"stages", stages},
                   {"learning_rate", gb.params.learning_rate},
                   {"lambda", gb.params.lambda},
                   {"gamma", gb.params.gamma},
                   {"max_depth", gb.params.max_depth},
                   {"min_leaf", gb.params.min_leaf},
                   {"growth", gb.params.growth == GrowthStrategy::level_wise ? "level_wise"
                                                                             : "leaf_wise"},
                   {"train_log_loss", gb.train_log_loss}};
  }
  return doc.dump(2) + "\n";
}

ModelArtifact model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::bad_config, std::string("model JSON: ") + e.what());
  }
  if (doc.value("format", "") != "riskscope-model" || doc.value("version", 0) != kFormatVersion)
    raise(Errc::bad_config, "not a supported model document");

  ModelArtifact artifact;
  artifact.layout = layout_from_json(doc.at("layout"));
  const std::string kind = doc.at("kind").get<std::string>();

  if (kind == "logistic") {
    LogisticModel lm;
    lm.intercept = doc["logistic"].at("intercept").get<double>();
    lm.coef = doc["logistic"].at("coef").get<std::vector<double>>();
    lm.converged = doc["logistic"].value("converged", true);
    lm.iterations = doc["logistic"].value("iterations", 0);
    artifact.model = std::move(lm);
  } else if (kind == "forest") {
    Forest rf;
    const json& f = doc["forest"];
    rf.params.seed = f.value("seed", std::uint64_t{0});
    rf.params.trees = static_cast<int>(f.at("trees").size());
    rf.params.max_depth = f.value("max_depth", 0);
    rf.params.min_leaf = f.value("min_leaf", 1);
    rf.params.features_per_split = f.value("features_per_split", 0);
    rf.params.bootstrap = f.value("bootstrap", true);
    for (const auto& tj : f.at("trees")) {
      Tree t;
      tree_from_json(tj, &t, 0);
      rf.trees.push_back(std::move(t));
    }
    artifact.model = std::move(rf);
  } else if (kind == "gbdt") {
    BoostedEnsemble gb;
    const json& g = doc["gbdt"];
    gb.base_score = g.at("base_score").get<double>();
    gb.params.learning_rate = g.at("learning_rate").get<double>();
    gb.params.lambda = g.value("lambda", 1.0);
    gb.params.gamma = g.value("gamma", 0.0);
    gb.params.max_depth = g.value("max_depth", 4);
    gb.params.min_leaf = g.value("min_leaf", 1);
    gb.params.growth = g.value("growth", "level_wise") == "leaf_wise"
                           ? GrowthStrategy::leaf_wise
                           : GrowthStrategy::level_wise;
    gb.params.rounds = static_cast<int>(g.at("stages").size());
    if (g.contains("train_log_loss"))
      gb.train_log_loss = g["train_log_loss"].get<std::vector<double>>();
    for (const auto& tj : g.at("stages")) {
      Tree t;
      tree_from_json(tj, &t, 0);
      gb.stages.push_back(std::move(t));
    }
    artifact.model = std::move(gb);
  } else {
    raise(Errc::bad_config, "unknown model kind '" + kind + "'");
  }
  return artifact;
}

}  // namespace riskscope::learn
