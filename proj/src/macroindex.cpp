#include "riskscope/macroindex.hpp"

#include <algorithm>
#include <cmath>

#include "riskscope/log.hpp"

namespace riskscope::macroindex {

NormalizedTable minmax_normalize(const StateIndicatorTable& table) {
  NormalizedTable out;
  out.states = table.states;

  for (const auto& ind : table.indicators) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t present = 0;
    for (const auto& v : ind.values) {
      if (!v || !std::isfinite(*v)) continue;
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
      ++present;
    }
    if (present == 0) {
      out.excluded.push_back({ind.name, "all_missing"});
      logging::warn("indicator '" + ind.name + "' excluded: no values");
      continue;
    }
    if (!(hi > lo)) {
      out.excluded.push_back({ind.name, "constant"});
      logging::warn("indicator '" + ind.name + "' excluded: constant across states");
      continue;
    }

    NormalizedTable::Column col;
    col.name = ind.name;
    col.direction = ind.direction;
    col.raw_min = lo;
    col.raw_max = hi;
    const double range = hi - lo;
    for (const auto& v : ind.values) {
      if (!v || !std::isfinite(*v)) {
        col.z.push_back(std::nullopt);
        continue;
      }
      double z = (*v - lo) / range;
      if (ind.direction == Direction::vulnerability_decreasing) z = 1.0 - z;
      col.z.push_back(z);
    }
    out.columns.push_back(std::move(col));
  }
  return out;
}

const EnvScoreRow* EnvScoreTable::find(const std::string& state) const {
  for (const auto& r : rows)
    if (r.state == state) return &r;
  return nullptr;
}

EnvScoreTable envscore(const NormalizedTable& norm) {
  if (norm.columns.empty()) raise(Errc::no_indicators, "no indicators survived normalization");

  EnvScoreTable out;
  for (std::size_t s = 0; s < norm.states.size(); ++s) {
    double sum = 0.0;
    int used = 0;
    for (const auto& col : norm.columns) {
      if (!col.z[s]) continue;
      sum += *col.z[s];
      ++used;
    }
    if (used == 0) {
      logging::warn("state '" + norm.states[s] + "' has no indicator values; skipped");
      continue;
    }
    out.rows.push_back({norm.states[s], sum / static_cast<double>(used), 0, used});
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const EnvScoreRow& a, const EnvScoreRow& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.state < b.state;
  });
  for (std::size_t i = 0; i < out.rows.size(); ++i) out.rows[i].rank = static_cast<int>(i + 1);
  return out;
}

ColumnStats descriptive_stats(std::span<const double> values, bool sample) {
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.empty()) raise(Errc::empty_column, "no finite values in column");

  ColumnStats st;
  st.min = *std::min_element(finite.begin(), finite.end());
  st.max = *std::max_element(finite.begin(), finite.end());
  double sum = 0.0;
  for (double v : finite) sum += v;
  const double n = static_cast<double>(finite.size());
  st.mean = sum / n;
  double ss = 0.0;
  for (double v : finite) ss += (v - st.mean) * (v - st.mean);
  const double denom = sample ? std::max(n - 1.0, 1.0) : n;
  st.std = std::sqrt(ss / denom);
  return st;
}

}  // namespace riskscope::macroindex
