#include "riskscope/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "riskscope/parallel.hpp"

namespace riskscope::shap {

Attribution shapley_exact(const PredictFn& predict, std::span<const double> x,
                          const FeatureMatrix& background, int max_d) {
  if (background.n == 0) raise(Errc::empty_background, "background matrix has no rows");
  if (x.size() != background.d)
    raise(Errc::dimension_mismatch, "x has " + std::to_string(x.size()) + " entries, expected " +
                                        std::to_string(background.d));

  const auto group_cols = background.group_columns();
  const auto group_names = background.group_names();
  const int d = static_cast<int>(group_cols.size());
  if (d > max_d)
    raise(Errc::too_many_features,
          std::to_string(d) + " feature groups exceed the exact-enumeration cap of " +
              std::to_string(max_d));

  const std::size_t nmask = std::size_t{1} << d;
  const std::size_t nb = background.n;
  const std::size_t ncol = background.d;

  // v[mask]: mean prediction with groups in mask taken from x, the rest from
  // each background row in turn. The full coalition no longer depends on the
  // background, so it is evaluated once.
  std::vector<double> v(nmask, 0.0);
  par::for_each_index(nmask, [&](std::size_t mask) {
    std::vector<double> z(ncol);
    if (mask == nmask - 1) {
      std::copy(x.begin(), x.end(), z.begin());
      v[mask] = predict(z);
      return;
    }
    double sum = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      for (int g = 0; g < d; ++g) {
        const bool from_x = (mask >> g) & 1u;
        for (std::size_t c : group_cols[static_cast<std::size_t>(g)])
          z[c] = from_x ? x[c] : background.at(b, c);
      }
      sum += predict(z);
    }
    v[mask] = sum / static_cast<double>(nb);
  });

  // phi_g = sum over S not containing g of |S|!(d-|S|-1)!/d! * (v(S+g) - v(S))
  std::vector<double> weight(static_cast<std::size_t>(d));
  {
    std::vector<double> fact(static_cast<std::size_t>(d) + 1, 1.0);
    for (std::size_t i = 1; i <= static_cast<std::size_t>(d); ++i)
      fact[i] = fact[i - 1] * static_cast<double>(i);
    for (std::size_t s = 0; s < static_cast<std::size_t>(d); ++s)
      weight[s] = fact[s] * fact[static_cast<std::size_t>(d) - s - 1] /
                  fact[static_cast<std::size_t>(d)];
  }

  Attribution out;
  out.groups = group_names;
  out.phi.assign(static_cast<std::size_t>(d), 0.0);
  for (std::size_t mask = 0; mask < nmask; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (int g = 0; g < d; ++g) {
      if ((mask >> g) & 1u) continue;
      out.phi[static_cast<std::size_t>(g)] +=
          weight[size] * (v[mask | (std::size_t{1} << g)] - v[mask]);
    }
  }
  out.base = v[0];
  out.prediction = v[nmask - 1];
  return out;
}

Attribution shapley_exact(const learn::ModelArtifact& model, std::span<const double> x,
                          const FeatureMatrix& background, int max_d) {
  if (!same_layout(model.layout, background.column_meta))
    raise(Errc::layout_mismatch, "background layout differs from the training layout");
  return shapley_exact(
      [&model](std::span<const double> z) { return learn::predict_proba(model, z); }, x,
      background, max_d);
}

std::vector<ImportanceEntry> global_importance(std::span<const Attribution> attributions) {
  if (attributions.empty()) return {};
  const auto& groups = attributions.front().groups;
  std::vector<ImportanceEntry> entries;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (const auto& a : attributions) sum += std::fabs(a.phi[g]);
    entries.push_back({groups[g], sum / static_cast<double>(attributions.size())});
  }
  std::sort(entries.begin(), entries.end(), [](const ImportanceEntry& a, const ImportanceEntry& b) {
    if (a.mean_abs_phi != b.mean_abs_phi) return a.mean_abs_phi > b.mean_abs_phi;
    return a.group < b.group;
  });
  return entries;
}

}  // namespace riskscope::shap
