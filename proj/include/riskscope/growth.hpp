#pragma once

#include <string>
#include <vector>

#include "riskscope/error.hpp"

namespace riskscope::growth {

enum class Sex { male = 1, female = 2 };

/// One growth-reference row: skewness L, median M, coefficient of variation S
/// at a given sex and age in months (half-month row convention).
struct LmsRow {
  Sex sex;
  double age_months;
  double L;
  double M;
  double S;
};

class GrowthReference {
public:
  /// CSV columns: sex (1=male, 2=female), agemos, L, M, S. Rows must be
  /// strictly increasing in agemos within each sex, M > 0, S > 0.
  static GrowthReference from_csv_file(const std::string& path);
  static GrowthReference from_rows(std::vector<LmsRow> rows);

  /// LMS parameters at (sex, age_months), linearly interpolated in age
  /// between bracketing rows. Raises AgeOutOfReferenceRange outside the
  /// covered span.
  LmsRow at(Sex sex, double age_months) const;

  double min_age_months(Sex sex) const;
  double max_age_months(Sex sex) const;

  /// FNV-1a 64 of the source CSV bytes; 0 when built from in-memory rows.
  std::uint64_t checksum() const { return checksum_; }

  const std::vector<LmsRow>& rows(Sex sex) const {
    return sex == Sex::male ? male_ : female_;
  }

private:
  std::vector<LmsRow> male_;
  std::vector<LmsRow> female_;
  std::uint64_t checksum_ = 0;
};

/// weight in kg, height in cm.
double bmi(double weight_kg, double height_cm);

/// z = ((x/M)^L - 1)/(L*S) for |L| > 1e-12, else ln(x/M)/S.
double lms_zscore(double x, const LmsRow& row);

/// Inverse of lms_zscore: the measurement sitting at z in the reference row.
double lms_value_at(double z, const LmsRow& row);

/// 100 * Phi(z). Phi is evaluated through the C library erfc, whose absolute
/// error is far below the 1e-10 contract.
double percentile(double z);

/// NHANES ages come in whole years; the reference rows use the half-month
/// convention, so age maps to floor(years*12) + 0.5.
double age_years_to_months(double age_years);

enum class LabelMode { bmi_for_age_p95, adult_bmi_30 };

inline int label_from_percentile(double pct) { return pct >= 95.0 ? 1 : 0; }

/// 1 iff BMI-for-age percentile >= 95 at the child's sex and age.
int label_obesity(Sex sex, double age_years, double bmi_value, const GrowthReference& ref,
                  LabelMode mode = LabelMode::bmi_for_age_p95);

std::uint64_t fnv1a64(const void* data, std::size_t len);

}  // namespace riskscope::growth
