#include "riskscope/align.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "riskscope/log.hpp"

namespace riskscope::align {

double national_mean_risk(std::span<const double> predictions) {
  if (predictions.empty()) raise(Errc::empty_predictions, "no predictions to average");
  double sum = 0.0;
  for (double p : predictions) sum += p;
  return sum / static_cast<double>(predictions.size());
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    const double r = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

Association pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  Association out;
  out.method = AssocMethod::pearson;
  if (saa == 0.0 || sbb == 0.0) return out;  // zero variance: undefined, never NaN
  out.statistic = sab / std::sqrt(saa * sbb);
  out.defined = true;
  return out;
}

}  // namespace

Association cross_scale_association(std::span<const double> a, std::span<const double> b,
                                    AssocMethod method) {
  if (a.size() != b.size()) raise(Errc::length_mismatch, "state series differ in length");
  if (method == AssocMethod::pearson) return pearson(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  Association out = pearson(ra, rb);
  out.method = AssocMethod::spearman;
  return out;
}

AlignmentReport overlay_table(const macroindex::EnvScoreTable& scores,
                              const std::map<std::string, std::string>& cluster_labels,
                              const StateIndicatorTable& indicators,
                              std::span<const std::string> indicator_names, double national_risk,
                              std::size_t top_n) {
  AlignmentReport report;
  report.national_risk = national_risk;
  report.indicator_names.assign(indicator_names.begin(), indicator_names.end());

  std::set<std::string> in_scores, in_clusters, in_indicators;
  for (const auto& r : scores.rows) in_scores.insert(r.state);
  for (const auto& [s, l] : cluster_labels) in_clusters.insert(s);
  for (const auto& s : indicators.states) in_indicators.insert(s);

  std::set<std::string> common;
  for (const auto& s : in_scores)
    if (in_clusters.count(s) && in_indicators.count(s)) common.insert(s);
  for (const auto* set : {&in_scores, &in_clusters, &in_indicators})
    for (const auto& s : *set)
      if (!common.count(s)) report.dropped_states.push_back(s);
  std::sort(report.dropped_states.begin(), report.dropped_states.end());
  report.dropped_states.erase(
      std::unique(report.dropped_states.begin(), report.dropped_states.end()),
      report.dropped_states.end());
  if (!report.dropped_states.empty())
    logging::warn("overlay: " + std::to_string(report.dropped_states.size()) +
                  " state(s) missing from some inputs; continuing with the intersection");

  // EnvScoreTable rows are already descending by (score, state code)
  for (const auto& row : scores.rows) {
    if (report.rows.size() >= top_n) break;
    if (!common.count(row.state)) continue;
    OverlayRow o;
    o.state = row.state;
    o.national_risk = national_risk;
    o.env_score = row.score;
    o.env_rank = row.rank;
    o.cluster_label = cluster_labels.at(row.state);
    const std::size_t si = *indicators.state_index(row.state);
    for (const auto& name : report.indicator_names) {
      const auto* ind = indicators.find(name);
      if (ind == nullptr) {
        raise(Errc::key_mismatch, "overlay indicator '" + name + "' not present");
      }
      o.indicators.push_back(ind->values[si]);
    }
    report.rows.push_back(std::move(o));
  }

  // EnvScore vs the broadcast constant reference: honestly undefined
  std::vector<double> env, ref;
  for (const auto& row : scores.rows)
    if (common.count(row.state)) {
      env.push_back(row.score);
      ref.push_back(national_risk);
    }
  if (!env.empty())
    report.association = cross_scale_association(env, ref, AssocMethod::pearson);
  return report;
}

}  // namespace riskscope::align
