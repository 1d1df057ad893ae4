#include "riskscope/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "riskscope/rng.hpp"

#include <json.hpp>

#include "riskscope/align.hpp"
#include "riskscope/cohort.hpp"
#include "riskscope/csv.hpp"
#include "riskscope/eval.hpp"
#include "riskscope/fsutil.hpp"
#include "riskscope/geojson.hpp"
#include "riskscope/log.hpp"
#include "riskscope/model.hpp"
#include "riskscope/shapley.hpp"
#include "riskscope/xpt.hpp"

namespace riskscope::pipeline {

using nlohmann::json;

namespace {

std::string out_path(const PipelineConfig& c, const std::string& name) {
  return fsutil::join(c.output_dir, name);
}

[[noreturn]] void missing_upstream(const std::string& file, const std::string& command) {
  throw Error(Errc::missing_upstream,
              "'" + file + "' not found; run `riskscope " + command + "` first");
}

void require_upstream(const PipelineConfig& c, const std::string& name,
                      const std::string& command) {
  if (!fsutil::exists(out_path(c, name))) missing_upstream(out_path(c, name), command);
}

RawTable read_micro_file(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return read_csv_file(path);
  return read_xpt_file(path);
}

growth::LabelMode label_mode_of(const PipelineConfig& c) {
  return c.label_mode == "adult_bmi30" ? growth::LabelMode::adult_bmi_30
                                       : growth::LabelMode::bmi_for_age_p95;
}

std::vector<std::string> envscore_indicator_names(const PipelineConfig& c, const Schema& schema) {
  if (!c.envscore_indicators.empty()) return c.envscore_indicators;
  std::vector<std::string> names;
  for (const auto& ind : schema.indicators) names.push_back(ind.name);
  return names;
}

StateIndicatorTable filter_indicators(const StateIndicatorTable& table,
                                      const std::vector<std::string>& names) {
  StateIndicatorTable out;
  out.states = table.states;
  for (const auto& name : names) {
    const auto* ind = table.find(name);
    if (ind == nullptr)
      raise(Errc::missing_column, "indicator '" + name + "' not present in the state table");
    out.indicators.push_back(*ind);
  }
  return out;
}

FeatureMatrix submatrix(const FeatureMatrix& X, std::span<const std::size_t> rows) {
  FeatureMatrix out;
  out.column_meta = X.column_meta;
  out.n = rows.size();
  out.d = X.d;
  out.values.resize(out.n * out.d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(X.values.data() + rows[i] * X.d, X.d, out.values.data() + i * X.d);
  return out;
}

LabelVector sublabels(const LabelVector& y, std::span<const std::size_t> rows) {
  LabelVector out;
  out.y.reserve(rows.size());
  for (std::size_t r : rows) out.y.push_back(y.y[r]);
  return out;
}

struct LoadedCohort {
  Schema schema;
  Cohort cohort;
  FeatureMatrix X;
  LabelVector y;
};

LoadedCohort load_cohort_artifact(const PipelineConfig& c, const std::string& caller) {
  require_upstream(c, "cohort.csv", "ingest");
  LoadedCohort lc{Schema::load_file(c.schema_path), {}, {}, {}};
  const RawTable t = read_csv_file(out_path(c, "cohort.csv"));
  lc.cohort = cohort_from_csv(t, lc.schema);
  lc.X = encode_features(lc.cohort);
  lc.y = labels_of(lc.cohort);
  (void)caller;
  return lc;
}

const char* kModelIds[] = {"logistic", "forest", "gbdt_level", "gbdt_leaf"};

std::string model_file(const std::string& id) { return "model_" + id + ".json"; }

std::string display_name(const std::string& id) {
  if (id == "logistic") return "Logistic Regression";
  if (id == "forest") return "Random Forest";
  if (id == "gbdt_level") return "GBDT (level-wise)";
  if (id == "gbdt_leaf") return "GBDT (leaf-wise)";
  return id;
}

struct TrainedSet {
  std::map<std::string, learn::ModelArtifact> models;
};

TrainedSet train_all(const PipelineConfig& c, const FeatureMatrix& Xtr, const LabelVector& ytr) {
  TrainedSet set;
  set.models["logistic"] =
      learn::ModelArtifact{learn::fit_logistic(Xtr, ytr, c.logistic), Xtr.column_meta};
  set.models["forest"] =
      learn::ModelArtifact{learn::fit_forest(Xtr, ytr, c.forest), Xtr.column_meta};
  learn::GbdtParams level = c.gbdt;
  level.growth = learn::GrowthStrategy::level_wise;
  set.models["gbdt_level"] =
      learn::ModelArtifact{learn::fit_gbdt(Xtr, ytr, level), Xtr.column_meta};
  learn::GbdtParams leaf = c.gbdt;
  leaf.growth = learn::GrowthStrategy::leaf_wise;
  set.models["gbdt_leaf"] = learn::ModelArtifact{learn::fit_gbdt(Xtr, ytr, leaf), Xtr.column_meta};
  return set;
}

json stats_to_json(const macroindex::ColumnStats& st) {
  return {{"min", st.min}, {"max", st.max}, {"mean", st.mean}, {"std", st.std}};
}

std::string fmt3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::missing_upstream:
      return kExitUpstream;
    case Errc::malformed_header:
    case Errc::truncated_record:
    case Errc::unsupported_version:
    case Errc::ragged_row:
    case Errc::quote_error:
    case Errc::io_error:
      return kExitParse;
    case Errc::missing_column:
    case Errc::bad_config:
      return kExitSchema;
    case Errc::invalid_geojson:
      return kExitGeo;
    default:
      return kExitDegenerate;
  }
}

int cmd_ingest(const PipelineConfig& c) {
  c.validate_inputs();
  fsutil::ensure_dir(c.output_dir);

  const Schema schema = Schema::load_file(c.schema_path);
  const growth::GrowthReference ref = growth::GrowthReference::from_csv_file(c.lms_csv);

  std::vector<RawTable> micro;
  json input_checksums = json::object();
  for (const auto& p : c.nhanes_paths) {
    micro.push_back(read_micro_file(p));
    input_checksums[p] = fsutil::checksum_hex(fsutil::read_text(p));
  }
  for (const auto& p : {c.usda_csv, c.epa_csv, c.lms_csv, c.schema_path})
    input_checksums[p] = fsutil::checksum_hex(fsutil::read_text(p));

  const RawTable merged = micro.size() == 1 ? std::move(micro.front())
                                            : merge_on_id(micro, c.id_column);
  BuildCounts counts;
  const Cohort cohort = build_cohort(merged, schema, ref, &counts, label_mode_of(c));

  const RawTable usda = read_csv_file(c.usda_csv);
  const RawTable epa = read_csv_file(c.epa_csv);
  const StateIndicatorTable usda_states =
      aggregate_to_state(usda, c.usda_state_key, schema, c.agg_method, c.agg_weight_column);
  const StateIndicatorTable epa_states =
      aggregate_to_state(epa, c.epa_state_key, schema, c.agg_method, c.agg_weight_column);
  const StateIndicatorTable indicators = merge_state_tables(usda_states, epa_states);

  const std::string cohort_csv = cohort_to_csv(cohort);
  const std::string indicators_csv = state_table_to_csv(indicators);
  fsutil::write_text(out_path(c, "cohort.csv"), cohort_csv);
  fsutil::write_text(out_path(c, "indicators.csv"), indicators_csv);

  std::size_t positives = 0;
  for (const auto& r : cohort.records) positives += r.label == 1 ? 1u : 0u;

  json manifest;
  manifest["inputs"] = input_checksums;
  manifest["cohort"] = {{"input_rows", counts.input_rows},
                        {"kept", counts.kept},
                        {"dropped_by_reason", counts.dropped_by_reason},
                        {"imputed_cells", counts.imputed_cells},
                        {"label_positive", positives},
                        {"lms_checksum", ref.checksum()}};
  json per_indicator = json::array();
  for (const auto& ind : indicators.indicators) {
    double cov = 0.0;
    for (double v : ind.coverage) cov += v;
    per_indicator.push_back(
        {{"name", ind.name},
         {"unit", ind.unit},
         {"direction", ind.direction == Direction::vulnerability_increasing
                           ? "vulnerability_increasing"
                           : "vulnerability_decreasing"},
         {"coverage_mean", ind.coverage.empty() ? 0.0
                                                : cov / static_cast<double>(ind.coverage.size())}});
  }
  manifest["indicators"] = {{"states", indicators.states.size()},
                            {"columns", per_indicator}};
  manifest["outputs"] = {{"cohort.csv", fsutil::checksum_hex(cohort_csv)},
                         {"indicators.csv", fsutil::checksum_hex(indicators_csv)}};
  fsutil::write_text(out_path(c, "ingest_manifest.json"), manifest.dump(2) + "\n");
  logging::info("ingest: kept " + std::to_string(counts.kept) + " of " +
                std::to_string(counts.input_rows) + " rows");
  return kOk;
}

int cmd_train_eval(const PipelineConfig& c) {
  LoadedCohort lc = load_cohort_artifact(c, "train-eval");

  const auto run_once = [&](std::uint64_t seed) {
    const eval::SplitIndices split =
        eval::split_70_30(lc.X.n, lc.y.y, seed, c.split_stratified);
    const FeatureMatrix Xtr = submatrix(lc.X, split.train_ids);
    const LabelVector ytr = sublabels(lc.y, split.train_ids);
    const FeatureMatrix Xte = submatrix(lc.X, split.test_ids);
    const LabelVector yte = sublabels(lc.y, split.test_ids);

    TrainedSet set = train_all(c, Xtr, ytr);
    std::map<std::string, std::pair<double, double>> metrics;  // id -> (accuracy, auc)
    std::map<std::string, eval::ConfusionCounts> confusion;
    for (const auto& id : kModelIds) {
      const auto scores = learn::predict_proba_matrix(set.models[id], Xte);
      eval::ConfusionCounts cc;
      const double acc = eval::accuracy(scores, yte.y, &cc);
      const double auc = eval::roc_auc(scores, yte.y);
      metrics[id] = {acc, auc};
      confusion[id] = cc;
    }
    return std::tuple{std::move(set), std::move(metrics), std::move(confusion)};
  };

  auto [set, metrics, confusion] = run_once(c.split_seed);

  json doc;
  doc["split"] = {{"seed", c.split_seed},
                  {"stratified", c.split_stratified},
                  {"train_fraction", 0.7}};
  json jmodels = json::object();
  for (const auto& id : kModelIds) {
    const auto& cc = confusion[id];
    jmodels[id] = {{"display", display_name(id)},
                   {"accuracy", metrics[id].first},
                   {"auc", metrics[id].second},
                   {"confusion", {{"tp", cc.tp}, {"tn", cc.tn}, {"fp", cc.fp}, {"fn", cc.fn}}}};
  }
  doc["models"] = jmodels;

  if (c.eval_multi_seed > 0) {
    std::map<std::string, std::vector<double>> accs, aucs;
    for (int s = 0; s < c.eval_multi_seed; ++s) {
      auto [set2, m2, c2] = run_once(c.split_seed + 1 + static_cast<std::uint64_t>(s));
      for (const auto& id : kModelIds) {
        accs[id].push_back(m2[id].first);
        aucs[id].push_back(m2[id].second);
      }
    }
    json multi = json::object();
    for (const auto& id : kModelIds) {
      const auto a = macroindex::descriptive_stats(accs[id], true);
      const auto u = macroindex::descriptive_stats(aucs[id], true);
      multi[id] = {{"seeds", c.eval_multi_seed},
                   {"accuracy_mean", a.mean},
                   {"accuracy_std", a.std},
                   {"auc_mean", u.mean},
                   {"auc_std", u.std}};
    }
    doc["multi_seed"] = multi;
  }

  fsutil::write_text(out_path(c, "metrics.json"), doc.dump(2) + "\n");

  std::ostringstream md;
  md << "| Model | Accuracy | AUC |\n|---|---|---|\n";
  for (const auto& id : kModelIds)
    md << "| " << display_name(id) << " | " << fmt3(metrics[id].first) << " | "
       << fmt3(metrics[id].second) << " |\n";
  fsutil::write_text(out_path(c, "metrics.md"), md.str());

  for (const auto& id : kModelIds)
    fsutil::write_text(out_path(c, model_file(id)), learn::model_to_json(set.models[id]));

  std::ostringstream pred;
  pred << "id";
  for (const auto& id : kModelIds) pred << ",p_" << id;
  pred << '\n';
  std::map<std::string, std::vector<double>> full;
  for (const auto& id : kModelIds) full[id] = learn::predict_proba_matrix(set.models[id], lc.X);
  for (std::size_t i = 0; i < lc.X.n; ++i) {
    pred << format_double(lc.cohort.records[i].id);
    for (const auto& id : kModelIds) pred << ',' << format_double(full[id][i]);
    pred << '\n';
  }
  fsutil::write_text(out_path(c, "predictions.csv"), pred.str());
  return kOk;
}

int cmd_explain(const PipelineConfig& c) {
  LoadedCohort lc = load_cohort_artifact(c, "explain");
  require_upstream(c, model_file(c.explain_model), "train-eval");
  const learn::ModelArtifact model =
      learn::model_from_json(fsutil::read_text(out_path(c, model_file(c.explain_model))));
  if (!same_layout(model.layout, lc.X.column_meta))
    raise(Errc::layout_mismatch, "persisted model layout does not match the cohort encoding");

  const eval::SplitIndices split =
      eval::split_70_30(lc.X.n, lc.y.y, c.split_seed, c.split_stratified);

  // background: training rows, seeded sample capped at background_cap
  std::vector<std::size_t> bg_rows = split.train_ids;
  Rng rng(c.explain_seed);
  if (bg_rows.size() > c.explain_background_cap) {
    rng.shuffle(bg_rows.begin(), bg_rows.end());
    bg_rows.resize(c.explain_background_cap);
    std::sort(bg_rows.begin(), bg_rows.end());
  }
  const FeatureMatrix background = submatrix(lc.X, bg_rows);

  // explained rows: seeded sample of the test split
  std::vector<std::size_t> sample_rows = split.test_ids;
  if (sample_rows.size() > c.explain_sample) {
    rng.shuffle(sample_rows.begin(), sample_rows.end());
    sample_rows.resize(c.explain_sample);
    std::sort(sample_rows.begin(), sample_rows.end());
  }

  std::vector<shap::Attribution> attributions;
  std::ostringstream csv;
  csv << "row_id,feature,phi\n";
  for (std::size_t r : sample_rows) {
    shap::Attribution a = shap::shapley_exact(model, lc.X.row(r), background);
    for (std::size_t g = 0; g < a.groups.size(); ++g)
      csv << format_double(lc.cohort.records[r].id) << ',' << csv_quote(a.groups[g]) << ','
          << format_double(a.phi[g]) << '\n';
    attributions.push_back(std::move(a));
  }
  fsutil::write_text(out_path(c, "shap_attributions.csv"), csv.str());

  const auto importance = shap::global_importance(attributions);
  json doc;
  doc["model"] = c.explain_model;
  doc["background_rows"] = bg_rows.size();
  doc["sample_rows"] = sample_rows.size();
  json imp = json::array();
  for (const auto& e : importance)
    imp.push_back({{"group", e.group}, {"mean_abs_phi", e.mean_abs_phi}});
  doc["importance"] = imp;
  fsutil::write_text(out_path(c, "shap_importance.json"), doc.dump(2) + "\n");
  return kOk;
}

int cmd_envscore(const PipelineConfig& c) {
  require_upstream(c, "indicators.csv", "ingest");
  const Schema schema = Schema::load_file(c.schema_path);
  const StateIndicatorTable all =
      state_table_from_csv(read_csv_file(out_path(c, "indicators.csv")), schema);
  const StateIndicatorTable table = filter_indicators(all, envscore_indicator_names(c, schema));

  const macroindex::NormalizedTable norm = macroindex::minmax_normalize(table);
  const macroindex::EnvScoreTable scores = macroindex::envscore(norm);

  std::ostringstream csv;
  csv << "state,score,rank,indicators_used\n";
  for (const auto& r : scores.rows)
    csv << csv_quote(r.state) << ',' << format_double(r.score) << ',' << r.rank << ','
        << r.indicators_used << '\n';
  fsutil::write_text(out_path(c, "envscore.csv"), csv.str());

  std::ostringstream nz;
  nz << "state";
  for (const auto& col : norm.columns) nz << ',' << csv_quote(col.name);
  nz << '\n';
  for (std::size_t s = 0; s < norm.states.size(); ++s) {
    nz << csv_quote(norm.states[s]);
    for (const auto& col : norm.columns) {
      nz << ',';
      if (col.z[s]) nz << format_double(*col.z[s]);
    }
    nz << '\n';
  }
  fsutil::write_text(out_path(c, "normalized.csv"), nz.str());

  json prov;
  prov["std_convention"] = "population";
  json cols = json::array();
  for (const auto& col : norm.columns)
    cols.push_back({{"name", col.name},
                    {"direction", col.direction == Direction::vulnerability_increasing
                                      ? "vulnerability_increasing"
                                      : "vulnerability_decreasing"},
                    {"min", col.raw_min},
                    {"max", col.raw_max}});
  prov["indicators"] = cols;
  json excluded = json::array();
  for (const auto& e : norm.excluded)
    excluded.push_back({{"name", e.name}, {"reason", e.reason}});
  prov["excluded"] = excluded;
  fsutil::write_text(out_path(c, "envscore_provenance.json"), prov.dump(2) + "\n");

  // Table-style descriptive statistics over raw indicators and the composite
  json stats = json::object();
  std::ostringstream md;
  md << "| Variable | Min | Max | Mean | Std |\n|---|---|---|---|---|\n";
  for (const auto& ind : table.indicators) {
    std::vector<double> vals;
    for (const auto& v : ind.values)
      if (v) vals.push_back(*v);
    const auto st = macroindex::descriptive_stats(vals);
    stats[ind.name] = stats_to_json(st);
    md << "| " << ind.name << " | " << fmt3(st.min) << " | " << fmt3(st.max) << " | "
       << fmt3(st.mean) << " | " << fmt3(st.std) << " |\n";
  }
  {
    std::vector<double> vals;
    for (const auto& r : scores.rows) vals.push_back(r.score);
    const auto st = macroindex::descriptive_stats(vals);
    stats["EnvScore"] = stats_to_json(st);
    md << "| EnvScore | " << fmt3(st.min) << " | " << fmt3(st.max) << " | " << fmt3(st.mean)
       << " | " << fmt3(st.std) << " |\n";
  }
  fsutil::write_text(out_path(c, "descriptive_stats.json"), stats.dump(2) + "\n");
  fsutil::write_text(out_path(c, "descriptive_stats.md"), md.str());
  return kOk;
}

namespace {

std::map<std::string, std::string> read_cluster_labels(const PipelineConfig& c) {
  const RawTable t = read_csv_file(out_path(c, "clusters.csv"));
  const std::size_t cs = t.column_index("state"), cl = t.column_index("label");
  std::map<std::string, std::string> labels;
  for (std::size_t r = 0; r < t.row_count(); ++r)
    labels[text_value(t.at(r, cs))] =
        is_text(t.at(r, cl)) ? text_value(t.at(r, cl)) : format_double(numeric_value(t.at(r, cl)));
  return labels;
}

macroindex::EnvScoreTable read_envscore(const PipelineConfig& c) {
  const RawTable t = read_csv_file(out_path(c, "envscore.csv"));
  const std::size_t cs = t.column_index("state"), cv = t.column_index("score"),
                    cr = t.column_index("rank"), cu = t.column_index("indicators_used");
  macroindex::EnvScoreTable scores;
  for (std::size_t r = 0; r < t.row_count(); ++r)
    scores.rows.push_back({text_value(t.at(r, cs)), numeric_value(t.at(r, cv)),
                           static_cast<int>(numeric_value(t.at(r, cr))),
                           static_cast<int>(numeric_value(t.at(r, cu)))});
  return scores;
}

double read_national_risk(const PipelineConfig& c) {
  require_upstream(c, "predictions.csv", "train-eval");
  const RawTable t = read_csv_file(out_path(c, "predictions.csv"));
  const std::size_t col = t.column_index("p_" + c.align_model);
  std::vector<double> preds;

  std::vector<std::size_t> wanted;
  if (c.align_risk_scope == "test") {
    // reproduce the split over the persisted cohort
    require_upstream(c, "cohort.csv", "ingest");
    const Schema schema = Schema::load_file(c.schema_path);
    const Cohort cohort =
        cohort_from_csv(read_csv_file(out_path(c, "cohort.csv")), schema);
    const LabelVector y = labels_of(cohort);
    const auto split = eval::split_70_30(y.y.size(), y.y, c.split_seed, c.split_stratified);
    wanted = split.test_ids;
  }
  if (wanted.empty()) {
    for (std::size_t r = 0; r < t.row_count(); ++r)
      preds.push_back(numeric_value(t.at(r, col)));
  } else {
    for (std::size_t r : wanted) preds.push_back(numeric_value(t.at(r, col)));
  }
  return align::national_mean_risk(preds);
}

}  // namespace

int cmd_cluster(const PipelineConfig& c) {
  require_upstream(c, "envscore.csv", "envscore");
  require_upstream(c, "normalized.csv", "envscore");
  const RawTable nt = read_csv_file(out_path(c, "normalized.csv"));
  const macroindex::EnvScoreTable scores = read_envscore(c);

  std::vector<std::string> features = c.cluster_features;
  if (features.empty()) {
    for (std::size_t col = 1; col < nt.column_count(); ++col)
      features.push_back(nt.column_names()[col]);
  }

  const std::size_t c_state = nt.column_index("state");
  std::vector<std::string> states;
  std::vector<double> points;
  std::vector<std::string> incomplete;
  for (std::size_t r = 0; r < nt.row_count(); ++r) {
    std::vector<double> row;
    bool complete = true;
    for (const auto& f : features) {
      const Cell& cell = nt.at(r, nt.column_index(f));
      if (!is_numeric(cell)) {
        complete = false;
        break;
      }
      row.push_back(numeric_value(cell));
    }
    const std::string state = text_value(nt.at(r, c_state));
    if (!complete) {
      incomplete.push_back(state);
      continue;
    }
    states.push_back(state);
    points.insert(points.end(), row.begin(), row.end());
  }
  for (const auto& s : incomplete)
    logging::warn("cluster: state '" + s + "' lacks a complete feature vector; left unassigned");

  const cluster::ClusterResult result =
      cluster::kmeans(points, states.size(), features.size(), c.kmeans);
  const cluster::ClusterLabeling labeling = cluster::label_clusters(result, states, scores);

  std::ostringstream csv;
  csv << "state,cluster,label\n";
  std::map<std::string, std::pair<int, std::string>> by_state;
  for (std::size_t i = 0; i < states.size(); ++i)
    by_state[states[i]] = {result.assignments[i],
                           labeling.names.at(result.assignments[i])};
  for (const auto& s : incomplete) by_state[s] = {-1, "unassigned"};
  for (const auto& [state, cl] : by_state)
    csv << csv_quote(state) << ',' << cl.first << ',' << cl.second << '\n';
  fsutil::write_text(out_path(c, "clusters.csv"), csv.str());

  json doc;
  doc["k"] = c.kmeans.k;
  doc["seed"] = c.kmeans.seed;
  doc["restarts"] = result.restarts_used;
  doc["iterations"] = result.iterations;
  doc["inertia"] = result.inertia;
  doc["features"] = features;
  json cents = json::array();
  const std::size_t d = features.size();
  for (int cc = 0; cc < c.kmeans.k; ++cc) {
    json row = json::array();
    for (std::size_t j = 0; j < d; ++j)
      row.push_back(result.centroids[static_cast<std::size_t>(cc) * d + j]);
    cents.push_back(row);
  }
  doc["centroids"] = cents;
  doc["cluster_mean_envscore"] = labeling.mean_scores;
  json names = json::object();
  for (const auto& [id, name] : labeling.names) names[std::to_string(id)] = name;
  doc["labels"] = names;
  doc["tie_broken"] = labeling.tie_broken;
  fsutil::write_text(out_path(c, "centroids.json"), doc.dump(2) + "\n");
  return kOk;
}

int cmd_align(const PipelineConfig& c) {
  require_upstream(c, "envscore.csv", "envscore");
  require_upstream(c, "clusters.csv", "cluster");
  require_upstream(c, "indicators.csv", "ingest");
  const Schema schema = Schema::load_file(c.schema_path);
  const StateIndicatorTable indicators =
      state_table_from_csv(read_csv_file(out_path(c, "indicators.csv")), schema);
  const macroindex::EnvScoreTable scores = read_envscore(c);
  const auto cluster_labels = read_cluster_labels(c);
  const double risk = read_national_risk(c);

  std::vector<std::string> overlay_inds = c.align_indicators;
  if (overlay_inds.empty())
    for (const auto& ind : indicators.indicators) overlay_inds.push_back(ind.name);

  const align::AlignmentReport report = align::overlay_table(
      scores, cluster_labels, indicators, overlay_inds, risk, c.align_top_n);

  json doc;
  doc["national_risk"] = report.national_risk;
  doc["association"] = {{"method", "pearson"},
                        {"defined", report.association.defined}};
  if (report.association.defined) doc["association"]["statistic"] = report.association.statistic;
  doc["dropped_states"] = report.dropped_states;
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"state", r.state},
                {"national_risk", r.national_risk},
                {"env_score", r.env_score},
                {"env_rank", r.env_rank},
                {"cluster_label", r.cluster_label}};
    json inds = json::object();
    for (std::size_t i = 0; i < report.indicator_names.size(); ++i)
      inds[report.indicator_names[i]] =
          r.indicators[i] ? json(*r.indicators[i]) : json(nullptr);
    row["indicators"] = inds;
    rows.push_back(row);
  }
  doc["rows"] = rows;
  fsutil::write_text(out_path(c, "alignment.json"), doc.dump(2) + "\n");

  std::ostringstream csv;
  csv << "state,national_risk,env_score,env_rank,cluster_label";
  for (const auto& n : report.indicator_names) csv << ',' << csv_quote(n);
  csv << '\n';
  for (const auto& r : report.rows) {
    csv << csv_quote(r.state) << ',' << format_double(r.national_risk) << ','
        << format_double(r.env_score) << ',' << r.env_rank << ',' << csv_quote(r.cluster_label);
    for (const auto& v : r.indicators) {
      csv << ',';
      if (v) csv << format_double(*v);
    }
    csv << '\n';
  }
  fsutil::write_text(out_path(c, "alignment.csv"), csv.str());

  std::ostringstream md;
  md << "| State | National Risk | EnvScore |";
  for (const auto& n : report.indicator_names) md << ' ' << n << " |";
  md << "\n|---|---|---|";
  for (std::size_t i = 0; i < report.indicator_names.size(); ++i) md << "---|";
  md << '\n';
  for (const auto& r : report.rows) {
    md << "| " << r.state << " | " << fmt3(r.national_risk) << " | " << fmt3(r.env_score) << " |";
    for (const auto& v : r.indicators) md << ' ' << (v ? fmt3(*v) : std::string("-")) << " |";
    md << '\n';
  }
  md << "\nCross-scale association (EnvScore vs national reference): "
     << (report.association.defined ? fmt3(report.association.statistic)
                                    : std::string("undefined (zero-variance reference)"))
     << "\n";
  fsutil::write_text(out_path(c, "alignment.md"), md.str());
  return kOk;
}

int cmd_map(const PipelineConfig& c) {
  if (c.boundaries_geojson.empty())
    raise(Errc::bad_config, "config inputs.boundaries_geojson is required for map");
  if (!fsutil::exists(c.boundaries_geojson))
    raise(Errc::io_error, "input file does not exist: '" + c.boundaries_geojson + "'");
  require_upstream(c, "envscore.csv", "envscore");
  require_upstream(c, "clusters.csv", "cluster");
  require_upstream(c, "alignment.json", "align");

  const macroindex::EnvScoreTable scores = read_envscore(c);
  const auto cluster_labels = read_cluster_labels(c);
  const json alignment = json::parse(fsutil::read_text(out_path(c, "alignment.json")));
  const double risk = alignment.at("national_risk").get<double>();

  std::map<std::string, geo::StateAnnotation> annotations;
  for (const auto& r : scores.rows) {
    geo::StateAnnotation a;
    a.env_score = r.score;
    a.env_rank = r.rank;
    auto it = cluster_labels.find(r.state);
    a.cluster_label = it == cluster_labels.end() ? "unassigned" : it->second;
    a.national_risk = risk;
    annotations[r.state] = a;
  }

  const geo::AnnotateResult result = geo::annotate_choropleth(
      fsutil::read_text(c.boundaries_geojson), c.geojson_property, annotations);
  fsutil::write_text(out_path(c, "choropleth.geojson"), result.geojson);
  logging::info("map: " + std::to_string(result.matched) + " features annotated, " +
                std::to_string(result.unmatched) + " unmatched");
  return kOk;
}

int cmd_all(const PipelineConfig& c) {
  for (auto* step : {&cmd_ingest, &cmd_train_eval, &cmd_explain, &cmd_envscore, &cmd_cluster,
                     &cmd_align}) {
    const int rc = (*step)(c);
    if (rc != kOk) return rc;
  }
  if (!c.boundaries_geojson.empty()) return cmd_map(c);
  return kOk;
}

}  // namespace riskscope::pipeline
