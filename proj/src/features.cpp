#include "riskscope/features.hpp"

#include <cmath>

namespace riskscope {

std::vector<std::string> FeatureMatrix::group_names() const {
  std::vector<std::string> out;
  for (const auto& c : column_meta)
    if (out.empty() || out.back() != c.group) {
      bool seen = false;
      for (const auto& g : out) seen = seen || g == c.group;
      if (!seen) out.push_back(c.group);
    }
  return out;
}

std::vector<std::vector<std::size_t>> FeatureMatrix::group_columns() const {
  const auto names = group_names();
  std::vector<std::vector<std::size_t>> cols(names.size());
  for (std::size_t c = 0; c < column_meta.size(); ++c)
    for (std::size_t g = 0; g < names.size(); ++g)
      if (column_meta[c].group == names[g]) cols[g].push_back(c);
  return cols;
}

FeatureMatrix encode_features(const Cohort& cohort) {
  FeatureMatrix m;
  m.column_meta.push_back({"age_years", ColumnKind::numeric, "age_years"});
  m.column_meta.push_back({"income_poverty_ratio", ColumnKind::numeric, "income_poverty_ratio"});
  m.column_meta.push_back({"household_size", ColumnKind::numeric, "household_size"});
  m.column_meta.push_back({"education", ColumnKind::numeric, "education"});
  m.column_meta.push_back({"sex=male", ColumnKind::one_hot, "sex"});
  m.column_meta.push_back({"sex=female", ColumnKind::one_hot, "sex"});
  for (const auto& level : cohort.race_levels)
    m.column_meta.push_back({"race_eth=" + level, ColumnKind::one_hot, "race_eth"});
  for (const auto& level : cohort.nativity_levels)
    m.column_meta.push_back({"nativity=" + level, ColumnKind::one_hot, "nativity"});

  m.n = cohort.records.size();
  m.d = m.column_meta.size();
  m.values.assign(m.n * m.d, 0.0);

  const std::size_t race_base = 6;
  const std::size_t nat_base = race_base + cohort.race_levels.size();
  for (std::size_t r = 0; r < m.n; ++r) {
    const CohortRecord& rec = cohort.records[r];
    m.at(r, 0) = rec.age_years;
    m.at(r, 1) = rec.income_poverty_ratio;
    m.at(r, 2) = static_cast<double>(rec.household_size);
    m.at(r, 3) = static_cast<double>(rec.education);
    m.at(r, 4) = rec.sex == growth::Sex::male ? 1.0 : 0.0;
    m.at(r, 5) = rec.sex == growth::Sex::female ? 1.0 : 0.0;
    m.at(r, race_base + static_cast<std::size_t>(rec.race_eth)) = 1.0;
    m.at(r, nat_base + static_cast<std::size_t>(rec.nativity)) = 1.0;
  }
  for (double v : m.values)
    if (!std::isfinite(v)) raise(Errc::bad_config, "non-finite feature value");
  return m;
}

LabelVector labels_of(const Cohort& cohort) {
  LabelVector lv;
  lv.y.reserve(cohort.records.size());
  for (const auto& r : cohort.records) lv.y.push_back(r.label);
  return lv;
}

bool same_layout(const std::vector<ColumnMeta>& a, const std::vector<ColumnMeta>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].kind != b[i].kind || a[i].group != b[i].group) return false;
  return true;
}

}  // namespace riskscope
