#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscope/csv.hpp"
#include "riskscope/macroindex.hpp"

using namespace riskscope;
using namespace riskscope::macroindex;

namespace {

StateIndicatorTable table_of(const std::vector<std::string>& states,
                             const std::vector<std::pair<std::string, std::vector<double>>>& cols,
                             const std::vector<Direction>& dirs) {
  StateIndicatorTable t;
  t.states = states;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    StateIndicatorTable::Indicator ind;
    ind.name = cols[c].first;
    ind.unit = "u";
    ind.direction = dirs[c];
    for (double v : cols[c].second) {
      if (std::isnan(v)) ind.values.push_back(std::nullopt);
      else ind.values.push_back(v);
      ind.coverage.push_back(1.0);
    }
    t.indicators.push_back(std::move(ind));
  }
  return t;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("min-max endpoints and the linear map") {
  const auto t = table_of({"A", "B", "C"}, {{"x", {10.0, 15.0, 20.0}}},
                          {Direction::vulnerability_increasing});
  const auto norm = minmax_normalize(t);
  REQUIRE(norm.columns.size() == 1);
  CHECK(*norm.columns[0].z[0] == 0.0);
  CHECK(*norm.columns[0].z[1] == 0.5);
  CHECK(*norm.columns[0].z[2] == 1.0);
  CHECK(norm.columns[0].raw_min == 10.0);
  CHECK(norm.columns[0].raw_max == 20.0);
}

TEST_CASE("vulnerability-decreasing indicators are flipped") {
  // the richest state ends at aligned Z = 0
  const auto t = table_of({"Poor", "Mid", "Rich"}, {{"income", {40000.0, 60000.0, 90000.0}}},
                          {Direction::vulnerability_decreasing});
  const auto norm = minmax_normalize(t);
  CHECK(*norm.columns[0].z[0] == 1.0);
  CHECK(*norm.columns[0].z[2] == 0.0);
}

TEST_CASE("constant and all-missing indicators are excluded, not divided by zero") {
  const auto t = table_of(
      {"A", "B"}, {{"const", {3.0, 3.0}}, {"gone", {kNan, kNan}}, {"ok", {1.0, 2.0}}},
      {Direction::vulnerability_increasing, Direction::vulnerability_increasing,
       Direction::vulnerability_increasing});
  const auto norm = minmax_normalize(t);
  CHECK(norm.columns.size() == 1);
  REQUIRE(norm.excluded.size() == 2);
  CHECK(norm.excluded[0].name == "const");
  CHECK(norm.excluded[0].reason == "constant");
  CHECK(norm.excluded[1].reason == "all_missing");
}

TEST_CASE("envscore means, coverage and ranking") {
  const auto t = table_of({"A", "B", "C"},
                          {{"x", {0.0, 5.0, 10.0}}, {"y", {10.0, kNan, 0.0}}},
                          {Direction::vulnerability_increasing,
                           Direction::vulnerability_increasing});
  const auto scores = envscore(minmax_normalize(t));
  REQUIRE(scores.rows.size() == 3);
  // A: (0 + 1)/2 = 0.5 ; B: (0.5)/1 ; C: (1 + 0)/2
  const auto* a = scores.find("A");
  const auto* b = scores.find("B");
  const auto* c = scores.find("C");
  CHECK(a->score == 0.5);
  CHECK(b->score == 0.5);
  CHECK(c->score == 0.5);
  CHECK(b->indicators_used == 1);
  // three-way tie: ranked by state code
  CHECK(scores.rows[0].state == "A");
  CHECK(scores.rows[0].rank == 1);
  CHECK(scores.rows[2].state == "C");
  CHECK(scores.rows[2].rank == 3);

  std::vector<int> ranks;
  for (const auto& r : scores.rows) ranks.push_back(r.rank);
  CHECK(ranks == std::vector<int>{1, 2, 3});
}

TEST_CASE("degenerate envscore inputs raise") {
  const auto t = table_of({"A", "B"}, {{"const", {3.0, 3.0}}},
                          {Direction::vulnerability_increasing});
  CHECK_THROWS_AS(envscore(minmax_normalize(t)), Error);
}

TEST_CASE("simple composite example") {
  const auto t = table_of({"A", "B"}, {{"x", {0.0, 1.0}}, {"y", {0.0, 1.0}}},
                          {Direction::vulnerability_increasing,
                           Direction::vulnerability_increasing});
  const auto scores = envscore(minmax_normalize(t));
  CHECK(scores.find("A")->score == 0.0);
  CHECK(scores.find("B")->score == 1.0);
}

TEST_CASE("descriptive statistics conventions") {
  const std::vector<double> constant{4.0, 4.0, 4.0};
  const auto st = descriptive_stats(constant);
  CHECK(st.std == 0.0);

  const std::vector<double> pair{0.0, 1.0};
  const auto p = descriptive_stats(pair);
  CHECK(p.mean == 0.5);
  CHECK(p.std == 0.5);  // population convention
  const auto s = descriptive_stats(pair, true);
  CHECK(s.std == doctest::Approx(std::sqrt(0.5)));

  CHECK_THROWS_AS(descriptive_stats(std::vector<double>{}), Error);
  const std::vector<double> with_nan{1.0, kNan, 3.0};
  CHECK(descriptive_stats(with_nan).mean == 2.0);
}

TEST_CASE("envscore lives in [0,1] on random tables") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ns = 2 + rng.uniform_index(10);
    const std::size_t ni = 1 + rng.uniform_index(5);
    StateIndicatorTable t;
    for (std::size_t s = 0; s < ns; ++s) t.states.push_back("S" + std::to_string(s));
    for (std::size_t i = 0; i < ni; ++i) {
      StateIndicatorTable::Indicator ind;
      ind.name = "I" + std::to_string(i);
      ind.direction = rng.uniform01() < 0.5 ? Direction::vulnerability_increasing
                                            : Direction::vulnerability_decreasing;
      for (std::size_t s = 0; s < ns; ++s) {
        ind.values.push_back(rng.uniform01() * 100.0 - 50.0);
        ind.coverage.push_back(1.0);
      }
      t.indicators.push_back(std::move(ind));
    }
    const auto norm = minmax_normalize(t);
    if (norm.columns.empty()) continue;
    for (const auto& col : norm.columns)
      for (const auto& z : col.z)
        if (z) {
          CHECK(*z >= 0.0);
          CHECK(*z <= 1.0);
        }
    for (const auto& row : envscore(norm).rows) {
      CHECK(row.score >= 0.0);
      CHECK(row.score <= 1.0);
    }
  }
}

TEST_CASE("positive affine transforms leave Z bit-identical on integer tables") {
  Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ns = 3 + rng.uniform_index(8);
    std::vector<double> raw(ns);
    for (auto& v : raw) v = static_cast<double>(rng.uniform_index(1000));
    raw[0] = -5.0;  // ensure a spread
    raw[1] = 997.0;
    const double a = std::ldexp(1.0, static_cast<int>(rng.uniform_index(9)) - 4);
    const double b = static_cast<double>(rng.uniform_index(100));

    std::vector<double> transformed(ns);
    for (std::size_t i = 0; i < ns; ++i) transformed[i] = a * raw[i] + b;

    std::vector<std::string> states;
    for (std::size_t s = 0; s < ns; ++s) states.push_back("S" + std::to_string(s));
    const auto t1 = table_of(states, {{"x", raw}}, {Direction::vulnerability_increasing});
    const auto t2 =
        table_of(states, {{"x", transformed}}, {Direction::vulnerability_increasing});
    const auto n1 = minmax_normalize(t1);
    const auto n2 = minmax_normalize(t2);
    for (std::size_t s = 0; s < ns; ++s) CHECK(*n1.columns[0].z[s] == *n2.columns[0].z[s]);
  }
}

TEST_CASE("monotonicity under fixed endpoints") {
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ns = 4 + rng.uniform_index(8);
    StateIndicatorTable t;
    for (std::size_t s = 0; s < ns; ++s) t.states.push_back("S" + std::to_string(s));
    for (int i = 0; i < 3; ++i) {
      StateIndicatorTable::Indicator ind;
      ind.name = "I" + std::to_string(i);
      ind.direction = Direction::vulnerability_increasing;
      for (std::size_t s = 0; s < ns; ++s) {
        ind.values.push_back(rng.uniform01());
        ind.coverage.push_back(1.0);
      }
      t.indicators.push_back(std::move(ind));
    }
    // force the endpoints of indicator 0 onto states 0 and 1
    t.indicators[0].values[0] = -1.0;
    t.indicators[0].values[1] = 2.0;

    const std::size_t target = 2 + rng.uniform_index(ns - 2);
    const double before = envscore(minmax_normalize(t)).find("S" + std::to_string(target))->score;
    const double old = *t.indicators[0].values[target];
    t.indicators[0].values[target] = old + (2.0 - old) * rng.uniform01();  // still <= max
    const double after = envscore(minmax_normalize(t)).find("S" + std::to_string(target))->score;
    CHECK(after >= before - 1e-15);
  }
}

TEST_CASE("fixture composite reproduces the independent recomputation") {
  const Schema schema = Schema::load_file(testutil::fixture_path("schema.json"));
  const RawTable usda = read_csv_file(testutil::fixture_path("usda_counties.csv"));
  const RawTable epa = read_csv_file(testutil::fixture_path("epa_counties.csv"));
  const auto merged =
      merge_state_tables(aggregate_to_state(usda, "State", schema, AggMethod::mean),
                         aggregate_to_state(epa, "State", schema, AggMethod::mean));
  const auto scores = envscore(minmax_normalize(merged));

  const auto expected = testutil::load_expected()["macro"];
  for (const auto& [state, value] : expected["envscore_by_state"].items())
    CHECK(scores.find(state)->score == doctest::Approx(value.get<double>()).epsilon(1e-12));

  // headline readbacks with the documented tolerance
  CHECK(std::fabs(scores.find("Mississippi")->score - 0.550) < 0.05);
  std::vector<std::string> top4;
  for (int i = 0; i < 4; ++i) top4.push_back(scores.rows[static_cast<std::size_t>(i)].state);
  std::sort(top4.begin(), top4.end());
  CHECK(top4 == std::vector<std::string>{"Alabama", "Arkansas", "Louisiana", "Mississippi"});

  std::vector<double> values;
  for (const auto& r : scores.rows) values.push_back(r.score);
  const auto st = descriptive_stats(values);
  CHECK(std::fabs(st.min - 0.157) < 0.05);
  CHECK(std::fabs(st.mean - 0.351) < 0.05);
  CHECK(std::fabs(st.std - 0.126) < 0.05);
}
