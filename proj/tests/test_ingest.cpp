#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscope/cohort.hpp"
#include "riskscope/csv.hpp"
#include "riskscope/schema.hpp"
#include "riskscope/state_table.hpp"

using namespace riskscope;

namespace {

const Schema& fixture_schema() {
  static Schema s = Schema::load_file(testutil::fixture_path("schema.json"));
  return s;
}

const growth::GrowthReference& asset() {
  static growth::GrowthReference ref =
      growth::GrowthReference::from_csv_file(testutil::source_path("assets/lms_bmi_for_age.csv"));
  return ref;
}

// a micro table in schema layout; cells passed per column name
RawTable micro_table(const std::vector<std::map<std::string, Cell>>& rows) {
  std::vector<std::string> names = {"SEQN",     "RIDAGEYR", "RIAGENDR", "RIDRETH3", "INDFMPIR",
                                    "DMDHHSIZ", "DMDHREDZ", "DMDBORN4", "BMXWT",    "BMXHT"};
  RawTable t(names);
  for (const auto& row : rows) {
    std::vector<Cell> cells;
    for (const auto& n : names) {
      auto it = row.find(n);
      cells.push_back(it == row.end() ? Cell(Numeric{1.0}) : it->second);
    }
    t.append_row(std::move(cells));
  }
  return t;
}

std::map<std::string, Cell> child(double seqn, double age, double bmi_target_z) {
  const auto sex = growth::Sex::male;
  const auto row = asset().at(sex, growth::age_years_to_months(age));
  const double bmi = growth::lms_value_at(bmi_target_z, row);
  const double height = 140.0;
  const double weight = bmi * (height / 100.0) * (height / 100.0);
  return {
      {"SEQN", Numeric{seqn}},      {"RIDAGEYR", Numeric{age}},  {"RIAGENDR", Numeric{1.0}},
      {"RIDRETH3", Numeric{3.0}},   {"INDFMPIR", Numeric{2.5}},  {"DMDHHSIZ", Numeric{4.0}},
      {"DMDHREDZ", Numeric{2.0}},   {"DMDBORN4", Numeric{1.0}},  {"BMXWT", Numeric{weight}},
      {"BMXHT", Numeric{height}},
  };
}

}  // namespace

TEST_CASE("merge_on_id joins, drops missing ids, rejects collisions") {
  RawTable a({"ID", "X"});
  a.append_row({Numeric{1.0}, Numeric{10.0}});
  a.append_row({Numeric{2.0}, Numeric{20.0}});
  a.append_row({Missing{'.'}, Numeric{30.0}});
  RawTable b({"ID", "Y"});
  b.append_row({Numeric{2.0}, Numeric{200.0}});
  b.append_row({Numeric{1.0}, Numeric{100.0}});

  const RawTable m = merge_on_id({a, b}, "ID");
  REQUIRE(m.row_count() == 2);
  CHECK(m.column_names() == std::vector<std::string>{"ID", "X", "Y"});
  CHECK(numeric_value(m.at(0, 2)) == 100.0);
  CHECK(numeric_value(m.at(1, 2)) == 200.0);

  RawTable c({"ID", "X"});
  c.append_row({Numeric{1.0}, Numeric{5.0}});
  CHECK_THROWS_AS(merge_on_id({a, c}, "ID"), Error);
}

TEST_CASE("build_cohort drop reasons and count invariant") {
  std::vector<std::map<std::string, Cell>> rows;
  rows.push_back(child(1, 10, 0.0));
  auto too_old = child(2, 25, 0.0);
  rows.push_back(too_old);
  auto missing_pir = child(3, 9, 0.0);
  missing_pir["INDFMPIR"] = Missing{'.'};
  rows.push_back(missing_pir);
  auto sentinel_edu = child(4, 9, 0.0);
  sentinel_edu["DMDHREDZ"] = Numeric{9.0};
  rows.push_back(sentinel_edu);
  auto bad_race = child(5, 9, 0.0);
  bad_race["RIDRETH3"] = Numeric{42.0};
  rows.push_back(bad_race);
  auto no_height = child(6, 9, 0.0);
  no_height["BMXHT"] = Missing{'.'};
  rows.push_back(no_height);
  auto born_refused = child(7, 9, 0.0);
  born_refused["DMDBORN4"] = Numeric{77.0};
  rows.push_back(born_refused);

  BuildCounts counts;
  const Cohort cohort = build_cohort(micro_table(rows), fixture_schema(), asset(), &counts);
  CHECK(counts.input_rows == 7);
  CHECK(counts.kept == 1);
  CHECK(counts.dropped_by_reason.at("age_out_of_range") == 1);
  CHECK(counts.dropped_by_reason.at("missing_predictor") == 3);
  CHECK(counts.dropped_by_reason.at("unmapped_category") == 1);
  CHECK(counts.dropped_by_reason.at("missing_height_weight") == 1);
  std::size_t dropped = 0;
  for (const auto& [r, n] : counts.dropped_by_reason) dropped += n;
  CHECK(counts.kept + dropped == counts.input_rows);
  CHECK(cohort.records[0].age_years == 10.0);
}

TEST_CASE("labels by construction: two obese children out of ten") {
  std::vector<std::map<std::string, Cell>> rows;
  for (int i = 0; i < 10; ++i) {
    const double z = i < 2 ? 2.2 : -0.3;  // two children above the 95th percentile
    rows.push_back(child(100.0 + i, 4.0 + i, z));
  }
  const Cohort cohort = build_cohort(micro_table(rows), fixture_schema(), asset(), nullptr);
  int positives = 0;
  for (const auto& r : cohort.records) positives += r.label;
  CHECK(cohort.records.size() == 10);
  CHECK(positives == 2);
  CHECK(cohort.records[0].label == 1);
  CHECK(cohort.records[1].label == 1);
}

TEST_CASE("median imputation keeps rows and counts cells") {
  Schema schema = fixture_schema();
  schema.missing_policy = MissingPolicy::impute_median;
  std::vector<std::map<std::string, Cell>> rows;
  for (int i = 0; i < 4; ++i) {
    auto r = child(200.0 + i, 8, 0.0);
    r["INDFMPIR"] = Numeric{1.0 + i};  // 1,2,3,4 -> median 2.5
    rows.push_back(r);
  }
  auto holed = child(204, 8, 0.0);
  holed["INDFMPIR"] = Missing{'.'};
  rows.push_back(holed);

  BuildCounts counts;
  const Cohort cohort = build_cohort(micro_table(rows), schema, asset(), &counts);
  CHECK(counts.kept == 5);
  CHECK(counts.imputed_cells == 1);
  CHECK(cohort.records[4].income_poverty_ratio == 2.5);
}

TEST_CASE("empty cohort and missing column raise") {
  std::vector<std::map<std::string, Cell>> rows;
  rows.push_back(child(1, 30, 0.0));
  try {
    build_cohort(micro_table(rows), fixture_schema(), asset(), nullptr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_cohort);
  }

  RawTable missing_col({"SEQN", "RIDAGEYR"});
  missing_col.append_row({Numeric{1.0}, Numeric{10.0}});
  try {
    build_cohort(missing_col, fixture_schema(), asset(), nullptr);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_column);
  }
}

TEST_CASE("cohort csv round-trip") {
  std::vector<std::map<std::string, Cell>> rows;
  for (int i = 0; i < 6; ++i) rows.push_back(child(300.0 + i, 3.0 + 2 * i, i % 2 ? 1.9 : -0.2));
  const Cohort cohort = build_cohort(micro_table(rows), fixture_schema(), asset(), nullptr);
  const std::string csv = cohort_to_csv(cohort);
  const Cohort back = cohort_from_csv(parse_csv(csv), fixture_schema());
  REQUIRE(back.records.size() == cohort.records.size());
  for (std::size_t i = 0; i < back.records.size(); ++i) {
    CHECK(back.records[i].id == cohort.records[i].id);
    CHECK(back.records[i].bmi == cohort.records[i].bmi);
    CHECK(back.records[i].label == cohort.records[i].label);
    CHECK(back.records[i].race_eth == cohort.records[i].race_eth);
  }
}

TEST_CASE("aggregate_to_state: means, weights, coverage") {
  RawTable t({"State", "County", "PovertyRate", "Population"});
  t.append_row({Text{"Alpha"}, Text{"c1"}, Numeric{10.0}, Numeric{1.0}});
  t.append_row({Text{"Alpha"}, Text{"c2"}, Numeric{20.0}, Numeric{3.0}});
  t.append_row({Text{"Beta"}, Text{"c1"}, Numeric{7.0}, Numeric{2.0}});
  t.append_row({Text{"Beta"}, Text{"c2"}, Missing{'.'}, Numeric{5.0}});

  const StateIndicatorTable mean_table =
      aggregate_to_state(t, "State", fixture_schema(), AggMethod::mean);
  const auto* pov = mean_table.find("PovertyRate");
  REQUIRE(pov != nullptr);
  CHECK(*pov->values[*mean_table.state_index("Alpha")] == 15.0);
  CHECK(*pov->values[*mean_table.state_index("Beta")] == 7.0);
  CHECK(pov->coverage[*mean_table.state_index("Beta")] == 0.5);

  const StateIndicatorTable weighted =
      aggregate_to_state(t, "State", fixture_schema(), AggMethod::weighted_mean, "Population");
  CHECK(*weighted.find("PovertyRate")->values[*weighted.state_index("Alpha")] == 17.5);
}

TEST_CASE("zero total weight raises") {
  RawTable t({"State", "PovertyRate", "Population"});
  t.append_row({Text{"Alpha"}, Numeric{10.0}, Numeric{0.0}});
  try {
    aggregate_to_state(t, "State", fixture_schema(), AggMethod::weighted_mean, "Population");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_total_weight);
  }
}

TEST_CASE("mean equals equal-weight weighted mean within 1e-12") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    RawTable t({"State", "PovertyRate", "Population"});
    const int n = 2 + static_cast<int>(rng.uniform_index(8));
    for (int i = 0; i < n; ++i)
      t.append_row({Text{i % 2 ? "A" : "B"}, Numeric{rng.uniform01() * 30.0}, Numeric{2.5}});
    const auto plain = aggregate_to_state(t, "State", fixture_schema(), AggMethod::mean);
    const auto weighted =
        aggregate_to_state(t, "State", fixture_schema(), AggMethod::weighted_mean, "Population");
    for (std::size_t s = 0; s < plain.states.size(); ++s) {
      const auto a = plain.find("PovertyRate")->values[s];
      const auto b = weighted.find("PovertyRate")->values[s];
      CHECK(std::fabs(*a - *b) <= 1e-12);
    }
  }
}

TEST_CASE("fixture aggregation matches the independent recomputation") {
  const RawTable usda = read_csv_file(testutil::fixture_path("usda_counties.csv"));
  const auto table = aggregate_to_state(usda, "State", fixture_schema(), AggMethod::mean);
  const auto expected = testutil::load_expected()["macro"]["state_values_sample"];
  const auto* pov = table.find("PovertyRate");
  CHECK(*pov->values[*table.state_index("Mississippi")] ==
        doctest::Approx(expected["Mississippi/PovertyRate"].get<double>()).epsilon(1e-12));
  CHECK(*pov->values[*table.state_index("New Hampshire")] ==
        doctest::Approx(expected["New Hampshire/PovertyRate"].get<double>()).epsilon(1e-12));

  const RawTable epa = read_csv_file(testutil::fixture_path("epa_counties.csv"));
  const auto epa_table = aggregate_to_state(epa, "State", fixture_schema(), AggMethod::mean);
  CHECK(*epa_table.find("Days Ozone")->values[*epa_table.state_index("Mississippi")] ==
        doctest::Approx(expected["Mississippi/Days Ozone"].get<double>()).epsilon(1e-12));
}

TEST_CASE("state table csv round-trip") {
  const RawTable usda = read_csv_file(testutil::fixture_path("usda_counties.csv"));
  const auto table = aggregate_to_state(usda, "State", fixture_schema(), AggMethod::mean);
  const std::string csv = state_table_to_csv(table);
  const auto back = state_table_from_csv(parse_csv(csv), fixture_schema());
  CHECK(back.states == table.states);
  REQUIRE(back.indicators.size() == table.indicators.size());
  for (std::size_t i = 0; i < back.indicators.size(); ++i)
    for (std::size_t s = 0; s < back.states.size(); ++s)
      CHECK(back.indicators[i].values[s] == table.indicators[i].values[s]);
}

TEST_CASE("schema invariants enforced") {
  CHECK_THROWS_AS(Schema::from_json_text(R"({"variables": []})", "mem"), Error);
  const char* bad_predictor = R"({
    "variables": [
      {"source": "NOTAVAR", "role": "predictor", "target": "x"},
      {"source": "BMXWT", "role": "weight_kg"},
      {"source": "BMXHT", "role": "height_cm"}
    ]})";
  CHECK_THROWS_AS(Schema::from_json_text(bad_predictor, "mem"), Error);
}
