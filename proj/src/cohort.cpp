#include "riskscope/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskscope/csv.hpp"
#include "riskscope/log.hpp"

namespace riskscope {

namespace {

struct VarBinding {
  const VariableSpec* spec = nullptr;
  std::size_t column = 0;
};

// cohort field order: the targets the pipeline knows how to encode
const char* kPredictorTargets[] = {"age_years",      "sex",       "race_eth",
                                   "income_poverty_ratio", "household_size", "education",
                                   "nativity"};

bool is_missing_per_schema(const Cell& cell, const VariableSpec& spec, double* out) {
  if (is_missing(cell)) return true;
  if (is_text(cell)) {
    // text in a coded column: try to match a level label
    if (spec.kind == VarKind::category) {
      for (const auto& [code, label] : spec.levels)
        if (label == text_value(cell)) {
          *out = code;
          return false;
        }
    }
    return true;
  }
  const double v = numeric_value(cell);
  for (double code : spec.missing_codes)
    if (v == code) return true;
  *out = v;
  return false;
}

std::vector<std::string> level_labels(const VariableSpec& spec) {
  std::vector<std::string> labels;
  for (const auto& [code, label] : spec.levels) labels.push_back(label);
  return labels;
}

int level_index(const VariableSpec& spec, double code) {
  int i = 0;
  for (const auto& [c, label] : spec.levels) {
    if (c == code) return i;
    ++i;
  }
  return -1;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Cohort build_cohort(const RawTable& table, const Schema& schema,
                    const growth::GrowthReference& ref, BuildCounts* counts,
                    growth::LabelMode mode) {
  BuildCounts local;
  BuildCounts& bc = counts ? *counts : local;
  bc.input_rows = table.row_count();

  std::map<std::string, VarBinding> by_target;
  VarBinding weight, height, id;
  for (const auto& spec : schema.variables) {
    VarBinding b{&spec, table.column_index(spec.source)};
    switch (spec.role) {
      case Role::predictor: by_target[spec.target] = b; break;
      case Role::weight_kg: weight = b; break;
      case Role::height_cm: height = b; break;
      case Role::id: id = b; break;
      case Role::outcome_input: break;  // e.g. a precomputed BMI column; recomputed here
    }
  }
  for (const char* t : kPredictorTargets)
    if (!by_target.count(t))
      raise(Errc::bad_config, std::string("schema is missing predictor target '") + t + "'");

  const VariableSpec& sex_spec = *by_target["sex"].spec;
  const VariableSpec& race_spec = *by_target["race_eth"].spec;
  const VariableSpec& nat_spec = *by_target["nativity"].spec;
  if (nat_spec.levels.size() != 2)
    raise(Errc::bad_config, "nativity must be binary (two levels)");

  struct Pending {
    CohortRecord rec;
    double weight_kg = 0, height_cm = 0;
    bool pir_missing = false, hh_missing = false, edu_missing = false;
  };
  std::vector<Pending> pending;
  const bool impute = schema.missing_policy == MissingPolicy::impute_median;
  auto drop = [&](const char* reason) { ++bc.dropped_by_reason[reason]; };

  for (std::size_t r = 0; r < table.row_count(); ++r) {
    Pending p;
    double v = 0;

    const VarBinding& age_b = by_target["age_years"];
    if (is_missing_per_schema(table.at(r, age_b.column), *age_b.spec, &v)) {
      drop("missing_predictor");
      continue;
    }
    if (v < 2.0 || v > 19.0) {
      drop("age_out_of_range");
      continue;
    }
    p.rec.age_years = v;

    if (id.spec && is_numeric(table.at(r, id.column)))
      p.rec.id = numeric_value(table.at(r, id.column));
    else
      p.rec.id = static_cast<double>(r + 1);

    if (is_missing_per_schema(table.at(r, weight.column), *weight.spec, &p.weight_kg) ||
        is_missing_per_schema(table.at(r, height.column), *height.spec, &p.height_cm)) {
      drop("missing_height_weight");
      continue;
    }
    if (!(p.weight_kg > 0.0) || !(p.height_cm > 0.0)) {
      drop("invalid_height_weight");
      continue;
    }

    const VarBinding& sex_b = by_target["sex"];
    if (is_missing_per_schema(table.at(r, sex_b.column), sex_spec, &v)) {
      drop("missing_predictor");
      continue;
    }
    {
      const int idx = level_index(sex_spec, v);
      if (idx < 0) {
        drop("unmapped_category");
        continue;
      }
      auto it = sex_spec.levels.find(v);
      if (it->second == "male") p.rec.sex = growth::Sex::male;
      else if (it->second == "female") p.rec.sex = growth::Sex::female;
      else raise(Errc::bad_config, "sex levels must be labeled male/female");
    }

    const VarBinding& race_b = by_target["race_eth"];
    if (is_missing_per_schema(table.at(r, race_b.column), race_spec, &v)) {
      drop("missing_predictor");
      continue;
    }
    {
      const int idx = level_index(race_spec, v);
      if (idx < 0) {
        drop("unmapped_category");
        continue;
      }
      p.rec.race_eth = idx;
    }

    const VarBinding& nat_b = by_target["nativity"];
    if (is_missing_per_schema(table.at(r, nat_b.column), nat_spec, &v)) {
      drop("missing_predictor");
      continue;
    }
    {
      const int idx = level_index(nat_spec, v);
      if (idx < 0) {
        drop("unmapped_category");
        continue;
      }
      p.rec.nativity = idx;
    }

    const VarBinding& pir_b = by_target["income_poverty_ratio"];
    if (is_missing_per_schema(table.at(r, pir_b.column), *pir_b.spec, &v)) {
      if (!impute) {
        drop("missing_predictor");
        continue;
      }
      p.pir_missing = true;
    } else if (v < 0.0) {
      drop("invalid_value");
      continue;
    } else {
      p.rec.income_poverty_ratio = v;
    }

    const VarBinding& hh_b = by_target["household_size"];
    if (is_missing_per_schema(table.at(r, hh_b.column), *hh_b.spec, &v)) {
      if (!impute) {
        drop("missing_predictor");
        continue;
      }
      p.hh_missing = true;
    } else if (v < 1.0) {
      drop("invalid_value");
      continue;
    } else {
      p.rec.household_size = static_cast<int>(v);
    }

    const VarBinding& edu_b = by_target["education"];
    if (is_missing_per_schema(table.at(r, edu_b.column), *edu_b.spec, &v)) {
      if (!impute) {
        drop("missing_predictor");
        continue;
      }
      p.edu_missing = true;
    } else {
      p.rec.education = static_cast<int>(v);
    }

    pending.push_back(p);
  }

  if (impute && !pending.empty()) {
    std::vector<double> pirs, hhs, edus;
    for (const auto& p : pending) {
      if (!p.pir_missing) pirs.push_back(p.rec.income_poverty_ratio);
      if (!p.hh_missing) hhs.push_back(p.rec.household_size);
      if (!p.edu_missing) edus.push_back(p.rec.education);
    }
    for (auto& p : pending) {
      if (p.pir_missing) {
        if (pirs.empty()) raise(Errc::all_missing, "income_poverty_ratio has no observed values");
        p.rec.income_poverty_ratio = median_of(pirs);
        ++bc.imputed_cells;
      }
      if (p.hh_missing) {
        if (hhs.empty()) raise(Errc::all_missing, "household_size has no observed values");
        p.rec.household_size = static_cast<int>(std::lround(median_of(hhs)));
        ++bc.imputed_cells;
      }
      if (p.edu_missing) {
        if (edus.empty()) raise(Errc::all_missing, "education has no observed values");
        p.rec.education = static_cast<int>(std::lround(median_of(edus)));
        ++bc.imputed_cells;
      }
    }
  }

  Cohort cohort;
  cohort.race_levels = level_labels(race_spec);
  cohort.nativity_levels = level_labels(nat_spec);
  cohort.records.reserve(pending.size());
  for (auto& p : pending) {
    p.rec.bmi = growth::bmi(p.weight_kg, p.height_cm);
    p.rec.label = growth::label_obesity(p.rec.sex, p.rec.age_years, p.rec.bmi, ref, mode);
    cohort.records.push_back(p.rec);
  }
  bc.kept = cohort.records.size();

  if (cohort.records.empty()) raise(Errc::empty_cohort, "no rows survived cohort cleaning");
  return cohort;
}

std::string cohort_to_csv(const Cohort& cohort) {
  std::ostringstream out;
  out << "id,age_years,sex,race_eth,income_poverty_ratio,household_size,education,nativity,bmi,"
         "label\n";
  for (const auto& r : cohort.records) {
    out << format_double(r.id) << ',' << format_double(r.age_years) << ','
        << (r.sex == growth::Sex::male ? "male" : "female") << ','
        << csv_quote(cohort.race_levels[static_cast<std::size_t>(r.race_eth)]) << ','
        << format_double(r.income_poverty_ratio) << ',' << r.household_size << ',' << r.education
        << ',' << csv_quote(cohort.nativity_levels[static_cast<std::size_t>(r.nativity)]) << ','
        << format_double(r.bmi) << ',' << r.label << '\n';
  }
  return out.str();
}

Cohort cohort_from_csv(const RawTable& table, const Schema& schema) {
  Cohort cohort;
  cohort.race_levels = level_labels(*schema.find_variable("race_eth"));
  cohort.nativity_levels = level_labels(*schema.find_variable("nativity"));

  auto col = [&](const char* n) { return table.column_index(n); };
  const std::size_t c_id = col("id"), c_age = col("age_years"), c_sex = col("sex"),
                    c_race = col("race_eth"), c_pir = col("income_poverty_ratio"),
                    c_hh = col("household_size"), c_edu = col("education"),
                    c_nat = col("nativity"), c_bmi = col("bmi"), c_label = col("label");

  auto text_index = [](const std::vector<std::string>& levels, const std::string& s) {
    auto it = std::find(levels.begin(), levels.end(), s);
    if (it == levels.end()) raise(Errc::bad_config, "unknown category label '" + s + "'");
    return static_cast<int>(it - levels.begin());
  };

  for (std::size_t r = 0; r < table.row_count(); ++r) {
    CohortRecord rec;
    rec.id = numeric_value(table.at(r, c_id));
    rec.age_years = numeric_value(table.at(r, c_age));
    rec.sex = text_value(table.at(r, c_sex)) == "male" ? growth::Sex::male : growth::Sex::female;
    rec.race_eth = text_index(cohort.race_levels, text_value(table.at(r, c_race)));
    rec.income_poverty_ratio = numeric_value(table.at(r, c_pir));
    rec.household_size = static_cast<int>(numeric_value(table.at(r, c_hh)));
    rec.education = static_cast<int>(numeric_value(table.at(r, c_edu)));
    rec.nativity = text_index(cohort.nativity_levels, text_value(table.at(r, c_nat)));
    rec.bmi = numeric_value(table.at(r, c_bmi));
    rec.label = static_cast<int>(numeric_value(table.at(r, c_label)));
    cohort.records.push_back(rec);
  }
  if (cohort.records.empty()) raise(Errc::empty_cohort, "cohort CSV has no rows");
  return cohort;
}

}  // namespace riskscope
