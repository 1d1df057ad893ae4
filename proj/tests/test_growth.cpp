#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscope/growth.hpp"

using namespace riskscope;
using namespace riskscope::growth;

namespace {
const GrowthReference& asset() {
  static GrowthReference ref =
      GrowthReference::from_csv_file(testutil::source_path("assets/lms_bmi_for_age.csv"));
  return ref;
}
constexpr double kZ95 = 1.6448536269514722;
}  // namespace

TEST_CASE("bmi basics") {
  CHECK(bmi(50.0, 200.0) == 12.5);
  CHECK(bmi(30.0, 100.0) == 30.0);
  CHECK_THROWS_AS(bmi(0.0, 150.0), Error);
  CHECK_THROWS_AS(bmi(50.0, -1.0), Error);
}

TEST_CASE("lms zscore closed cases") {
  LmsRow row{Sex::male, 120.5, 1.0, 20.0, 0.1};
  CHECK(lms_zscore(22.0, row) == doctest::Approx(1.0).epsilon(1e-12));
  for (double L : {-2.0, -0.5, 0.0, 0.7}) {
    LmsRow r{Sex::male, 120.5, L, 18.0, 0.12};
    CHECK(lms_zscore(18.0, r) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lms_zscore(0.0, row), Error);
}

TEST_CASE("lms branch continuity near L=0") {
  for (double x : {12.0, 17.3, 25.0}) {
    LmsRow almost{Sex::female, 60.5, 1e-6, 16.0, 0.09};
    LmsRow zero{Sex::female, 60.5, 0.0, 16.0, 0.09};
    CHECK(lms_zscore(x, almost) == doctest::Approx(lms_zscore(x, zero)).epsilon(1e-8));
    CHECK(lms_value_at(1.3, almost) == doctest::Approx(lms_value_at(1.3, zero)).epsilon(1e-8));
  }
}

TEST_CASE("percentile basics and frozen oracle value") {
  CHECK(percentile(0.0) == 50.0);
  // high-precision evaluation gives 94.999999999999994689...
  CHECK(percentile(kZ95) == doctest::Approx(95.0).epsilon(1e-8));
  CHECK(std::fabs(percentile(kZ95) - 95.0) < 1e-6);
  CHECK(percentile(9.0) > 99.999);
  CHECK(percentile(-9.0) < 0.001);
  double prev = -1.0;
  for (double z = -6.0; z <= 6.0; z += 0.125) {
    const double p = percentile(z);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("forward map then zscore recovers the percentile") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const double z = -3.0 + 6.0 * rng.uniform01();
    LmsRow row{Sex::male, 100.5, -2.5 + 3.0 * rng.uniform01(), 14.0 + 8.0 * rng.uniform01(),
               0.06 + 0.1 * rng.uniform01()};
    const double x = lms_value_at(z, row);
    CHECK(percentile(lms_zscore(x, row)) ==
          doctest::Approx(percentile(z)).epsilon(1e-9));
  }
}

TEST_CASE("asset row inverts the published-percentile measurement") {
  // x frozen from a 50-digit evaluation of the forward map at the exact 95th
  // percentile for the bundled male 120.5-month row
  const LmsRow row = asset().at(Sex::male, 120.5);
  CHECK(row.L == doctest::Approx(-2.111257));
  const double x95 = 19.272872739082793;
  CHECK(lms_zscore(x95, row) == doctest::Approx(kZ95).epsilon(1e-3));
  CHECK(std::fabs(lms_zscore(x95, row) - kZ95) < 1e-9);  // much tighter in practice
}

TEST_CASE("growth reference interpolation and range errors") {
  GrowthReference ref = GrowthReference::from_rows({
      {Sex::male, 24.0, -1.0, 16.0, 0.08},
      {Sex::male, 26.0, -2.0, 18.0, 0.10},
      {Sex::female, 24.0, -1.0, 16.0, 0.08},
      {Sex::female, 26.0, -1.5, 17.0, 0.09},
  });
  const LmsRow mid = ref.at(Sex::male, 25.0);
  CHECK(mid.L == doctest::Approx(-1.5));
  CHECK(mid.M == doctest::Approx(17.0));
  CHECK(mid.S == doctest::Approx(0.09));
  CHECK(ref.at(Sex::male, 26.0).M == 18.0);
  CHECK_THROWS_AS(ref.at(Sex::male, 23.9), Error);
  CHECK_THROWS_AS(ref.at(Sex::male, 26.1), Error);
}

TEST_CASE("asset covers the child age span for both sexes") {
  for (Sex s : {Sex::male, Sex::female}) {
    CHECK(asset().min_age_months(s) == 24.0);
    CHECK(asset().max_age_months(s) == 240.5);
    for (const auto& r : asset().rows(s)) {
      CHECK(r.M > 0.0);
      CHECK(r.S > 0.0);
    }
  }
  CHECK(asset().checksum() != 0);
}

TEST_CASE("age convention") {
  CHECK(age_years_to_months(2.0) == 24.5);
  CHECK(age_years_to_months(19.0) == 228.5);
  CHECK(age_years_to_months(10.9) == 131.5);  // floor(130.8) + 0.5
}

TEST_CASE("labeling boundary is inclusive and monotone in bmi") {
  CHECK(label_from_percentile(95.0) == 1);
  CHECK(label_from_percentile(94.99999999) == 0);
  CHECK(label_from_percentile(100.0) == 1);

  const LmsRow row = asset().at(Sex::female, 96.5);
  CHECK(label_obesity(Sex::female, 8.0, row.M, asset()) == 0);  // the median child
  const double x97 = lms_value_at(1.8807936081512509, row);     // 97th percentile
  CHECK(label_obesity(Sex::female, 8.0, x97, asset()) == 1);

  int prev = 0;
  for (double b = 10.0; b < 40.0; b += 0.05) {
    const int lab = label_obesity(Sex::female, 8.0, b, asset());
    CHECK(lab >= prev);
    prev = lab;
  }
}

TEST_CASE("adult labeling mode") {
  CHECK(label_obesity(Sex::male, 10.0, 30.0, asset(), LabelMode::adult_bmi_30) == 1);
  CHECK(label_obesity(Sex::male, 10.0, 29.9, asset(), LabelMode::adult_bmi_30) == 0);
}

TEST_CASE("forward-construction labels match the z threshold away from the line") {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const double age = 2.0 + rng.uniform_index(18);
    const Sex sex = rng.uniform01() < 0.5 ? Sex::male : Sex::female;
    double z = -3.0 + 6.0 * rng.uniform01();
    if (std::fabs(z - kZ95) < 1e-6) z += 1e-3;
    const LmsRow row = asset().at(sex, age_years_to_months(age));
    const double bmi_value = lms_value_at(z, row);
    CHECK(label_obesity(sex, age, bmi_value, asset()) == (z >= kZ95 ? 1 : 0));
  }
}
