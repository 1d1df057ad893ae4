#include "riskscope/growth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "riskscope/csv.hpp"

namespace riskscope::growth {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

GrowthReference GrowthReference::from_rows(std::vector<LmsRow> rows) {
  GrowthReference ref;
  for (auto& r : rows) {
    if (!(r.M > 0.0) || !(r.S > 0.0))
      raise(Errc::bad_config, "growth reference row at age " + std::to_string(r.age_months) +
                                  " has non-positive M or S");
    (r.sex == Sex::male ? ref.male_ : ref.female_).push_back(r);
  }
  for (auto* v : {&ref.male_, &ref.female_}) {
    std::sort(v->begin(), v->end(),
              [](const LmsRow& a, const LmsRow& b) { return a.age_months < b.age_months; });
    for (std::size_t i = 1; i < v->size(); ++i)
      if (!((*v)[i].age_months > (*v)[i - 1].age_months))
        raise(Errc::bad_config, "growth reference ages not strictly increasing near " +
                                    std::to_string((*v)[i].age_months));
    if (v->size() < 2) raise(Errc::bad_config, "growth reference needs at least 2 rows per sex");
  }
  return ref;
}

GrowthReference GrowthReference::from_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open growth reference '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  RawTable t = parse_csv(text);
  const std::size_t c_sex = t.column_index("sex");
  const std::size_t c_age = t.column_index("agemos");
  const std::size_t c_l = t.column_index("L");
  const std::size_t c_m = t.column_index("M");
  const std::size_t c_s = t.column_index("S");

  std::vector<LmsRow> rows;
  rows.reserve(t.row_count());
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    for (std::size_t c : {c_sex, c_age, c_l, c_m, c_s})
      if (!is_numeric(t.at(r, c)))
        raise(Errc::bad_config, path + ": non-numeric growth row " + std::to_string(r + 1));
    const int sex_code = static_cast<int>(numeric_value(t.at(r, c_sex)));
    if (sex_code != 1 && sex_code != 2)
      raise(Errc::bad_config, path + ": sex code must be 1 or 2 in row " + std::to_string(r + 1));
    rows.push_back(LmsRow{sex_code == 1 ? Sex::male : Sex::female,
                          numeric_value(t.at(r, c_age)), numeric_value(t.at(r, c_l)),
                          numeric_value(t.at(r, c_m)), numeric_value(t.at(r, c_s))});
  }
  GrowthReference ref = from_rows(std::move(rows));
  ref.checksum_ = fnv1a64(text.data(), text.size());
  return ref;
}

LmsRow GrowthReference::at(Sex sex, double age_months) const {
  const auto& rows = sex == Sex::male ? male_ : female_;
  if (age_months < rows.front().age_months || age_months > rows.back().age_months)
    raise(Errc::age_out_of_reference_range,
          "age " + std::to_string(age_months) + " months outside [" +
              std::to_string(rows.front().age_months) + ", " +
              std::to_string(rows.back().age_months) + "]");
  auto it = std::lower_bound(rows.begin(), rows.end(), age_months,
                             [](const LmsRow& r, double a) { return r.age_months < a; });
  if (it->age_months == age_months) return *it;
  const LmsRow& hi = *it;
  const LmsRow& lo = *(it - 1);
  const double w = (age_months - lo.age_months) / (hi.age_months - lo.age_months);
  return LmsRow{sex, age_months, lo.L + w * (hi.L - lo.L), lo.M + w * (hi.M - lo.M),
                lo.S + w * (hi.S - lo.S)};
}

double GrowthReference::min_age_months(Sex sex) const { return rows(sex).front().age_months; }
double GrowthReference::max_age_months(Sex sex) const { return rows(sex).back().age_months; }

double bmi(double weight_kg, double height_cm) {
  if (!(weight_kg > 0.0) || !(height_cm > 0.0))
    raise(Errc::non_positive_input, "weight and height must be positive");
  const double h = height_cm / 100.0;
  return weight_kg / (h * h);
}

double lms_zscore(double x, const LmsRow& row) {
  if (!(x > 0.0)) raise(Errc::non_positive_input, "measurement must be positive");
  if (std::fabs(row.L) > 1e-12)
    return (std::pow(x / row.M, row.L) - 1.0) / (row.L * row.S);
  return std::log(x / row.M) / row.S;
}

double lms_value_at(double z, const LmsRow& row) {
  if (std::fabs(row.L) > 1e-12)
    return row.M * std::pow(1.0 + row.L * row.S * z, 1.0 / row.L);
  return row.M * std::exp(row.S * z);
}

double percentile(double z) { return 100.0 * 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double age_years_to_months(double age_years) { return std::floor(age_years * 12.0) + 0.5; }

int label_obesity(Sex sex, double age_years, double bmi_value, const GrowthReference& ref,
                  LabelMode mode) {
  if (mode == LabelMode::adult_bmi_30) return bmi_value >= 30.0 ? 1 : 0;
  const LmsRow row = ref.at(sex, age_years_to_months(age_years));
  return label_from_percentile(percentile(lms_zscore(bmi_value, row)));
}

}  // namespace riskscope::growth
