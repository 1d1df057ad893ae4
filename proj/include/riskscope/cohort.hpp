#pragma once

#include <map>
#include <string>
#include <vector>

#include "riskscope/growth.hpp"
#include "riskscope/schema.hpp"
#include "riskscope/table.hpp"

namespace riskscope {

struct CohortRecord {
  double id = 0;
  double age_years = 0;
  growth::Sex sex = growth::Sex::male;
  int race_eth = 0;  // index into Cohort::race_levels
  double income_poverty_ratio = 0;
  int household_size = 1;
  int education = 0;
  int nativity = 0;  // index into Cohort::nativity_levels
  double bmi = 0;
  int label = 0;
};

struct Cohort {
  std::vector<CohortRecord> records;
  std::vector<std::string> race_levels;
  std::vector<std::string> nativity_levels;
};

struct BuildCounts {
  std::size_t input_rows = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped_by_reason;
  std::size_t imputed_cells = 0;
};

/// Clean the merged micro table into the analysis cohort: keep ages [2,19],
/// resolve missing predictors per schema policy, compute BMI and the obesity
/// label. kept + sum(dropped) always equals the input row count.
Cohort build_cohort(const RawTable& table, const Schema& schema,
                    const growth::GrowthReference& ref, BuildCounts* counts = nullptr,
                    growth::LabelMode mode = growth::LabelMode::bmi_for_age_p95);

std::string cohort_to_csv(const Cohort& cohort);
Cohort cohort_from_csv(const RawTable& table, const Schema& schema);

}  // namespace riskscope
