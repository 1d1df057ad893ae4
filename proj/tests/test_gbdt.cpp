#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "riskscope/gbdt.hpp"
#include "riskscope/logistic.hpp"

using namespace riskscope;
using namespace riskscope::learn;

namespace {

// Slow, self-contained re-derivation of one boosting round with stumps:
// exhaustive scan over every feature and midpoint threshold, leaf weights
// -G/(H+lambda), no shared code with the engine's tree builder.
struct OracleStump {
  bool split = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double w_left = 0.0, w_right = 0.0, w_root = 0.0;
};

OracleStump oracle_stump(const FeatureMatrix& X, const std::vector<double>& g,
                         const std::vector<double>& h, double lambda, double gamma) {
  OracleStump best;
  double gtot = 0.0, htot = 0.0;
  for (std::size_t i = 0; i < X.n; ++i) {
    gtot += g[i];
    htot += h[i];
  }
  best.w_root = -gtot / (htot + lambda);
  const double parent_score = gtot * gtot / (htot + lambda);

  double best_gain = gamma;  // must strictly exceed gamma
  for (std::size_t f = 0; f < X.d; ++f) {
    std::vector<double> values;
    for (std::size_t i = 0; i < X.n; ++i) values.push_back(X.at(i, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double thr = 0.5 * (values[k] + values[k + 1]);
      double gl = 0.0, hl = 0.0;
      for (std::size_t i = 0; i < X.n; ++i)
        if (X.at(i, f) < thr) {
          gl += g[i];
          hl += h[i];
        }
      const double gr = gtot - gl, hr = htot - hl;
      const double gain =
          0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent_score);
      if (gain > best_gain) {
        best_gain = gain;
        best.split = true;
        best.feature = f;
        best.threshold = thr;
        best.w_left = -gl / (hl + lambda);
        best.w_right = -gr / (hr + lambda);
      }
    }
  }
  return best;
}

std::vector<double> oracle_gbdt_losses(const FeatureMatrix& X, const LabelVector& y, int rounds,
                                       double lr, double lambda) {
  const std::size_t n = X.n;
  double pos = 0.0;
  for (int v : y.y) pos += v;
  const double f0 = std::log((pos / static_cast<double>(n)) / (1.0 - pos / static_cast<double>(n)));
  std::vector<double> score(n, f0);
  std::vector<double> losses;
  auto loss_now = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::clamp(1.0 / (1.0 + std::exp(-score[i])), 1e-15, 1.0 - 1e-15);
      total += y.y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(n);
  };
  losses.push_back(loss_now());
  for (int r = 0; r < rounds; ++r) {
    std::vector<double> g(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-score[i]));
      g[i] = p - y.y[i];
      h[i] = p * (1.0 - p);
    }
    const OracleStump stump = oracle_stump(X, g, h, lambda, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double out = stump.split
                             ? (X.at(i, stump.feature) < stump.threshold ? stump.w_left
                                                                         : stump.w_right)
                             : stump.w_root;
      score[i] += lr * out;
    }
    losses.push_back(loss_now());
  }
  return losses;
}

}  // namespace

TEST_CASE("zero learning rate freezes the prior") {
  const auto X = testutil::make_matrix({{0.0}, {1.0}, {2.0}, {3.0}});
  const LabelVector y{{0, 0, 1, 1}};
  GbdtParams p;
  p.rounds = 5;
  p.learning_rate = 0.0;
  const auto m = fit_gbdt(X, y, p);
  const double base = sigmoid(m.base_score);
  for (std::size_t i = 0; i < X.n; ++i) CHECK(m.predict(X.row(i)) == base);
  CHECK(base == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rounds=0 predicts the label mean") {
  const auto X = testutil::make_matrix({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}});
  const LabelVector y{{0, 0, 0, 1, 1}};
  GbdtParams p;
  p.rounds = 0;
  const auto m = fit_gbdt(X, y, p);
  CHECK(m.stages.empty());
  CHECK(m.predict(X.row(0)) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("one depth-1 round improves the loss on step data") {
  const auto X = testutil::make_matrix({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}});
  const LabelVector y{{0, 0, 0, 1, 1, 1}};
  GbdtParams p;
  p.rounds = 1;
  p.max_depth = 1;
  p.learning_rate = 0.5;
  const auto m = fit_gbdt(X, y, p);
  REQUIRE(m.train_log_loss.size() == 2);
  CHECK(m.train_log_loss[1] < m.train_log_loss[0]);
}

TEST_CASE("per-round losses match the exhaustive stump oracle") {
  const auto X = testutil::make_matrix({{0.1, 0.9},
                                        {0.2, 0.8},
                                        {0.35, 0.1},
                                        {0.4, 0.45},
                                        {0.55, 0.7},
                                        {0.6, 0.2},
                                        {0.8, 0.5},
                                        {0.9, 0.05}});
  const LabelVector y{{0, 1, 0, 1, 0, 1, 1, 0}};
  GbdtParams p;
  p.rounds = 3;
  p.learning_rate = 0.5;
  p.lambda = 1.0;
  p.max_depth = 1;
  p.min_leaf = 1;
  const auto m = fit_gbdt(X, y, p);
  const auto oracle = oracle_gbdt_losses(X, y, 3, 0.5, 1.0);
  REQUIRE(m.train_log_loss.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(m.train_log_loss[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
}

TEST_CASE("prediction equals the traced sum of stage leaves") {
  const auto X = testutil::make_matrix({{0.1, 0.9},
                                        {0.2, 0.8},
                                        {0.35, 0.1},
                                        {0.4, 0.45},
                                        {0.55, 0.7},
                                        {0.6, 0.2},
                                        {0.8, 0.5},
                                        {0.9, 0.05}});
  const LabelVector y{{0, 1, 0, 1, 0, 1, 1, 0}};
  GbdtParams p;
  p.rounds = 4;
  p.learning_rate = 0.3;
  p.max_depth = 2;
  const auto m = fit_gbdt(X, y, p);
  for (std::size_t i = 0; i < X.n; ++i) {
    double f = m.base_score;
    for (const auto& stage : m.stages) f += p.learning_rate * stage.predict(X.row(i));
    CHECK(m.predict(X.row(i)) == sigmoid(f));
    CHECK(m.predict(X.row(i)) >= 0.0);
    CHECK(m.predict(X.row(i)) <= 1.0);
  }
}

TEST_CASE("training loss is non-increasing with gamma=0 and min_leaf=1") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto X = testutil::random_matrix(50, 3, 500 + seed);
    LabelVector y;
    Rng rng(900 + seed);
    for (std::size_t i = 0; i < X.n; ++i)
      y.y.push_back(X.at(i, 0) + 0.2 * rng.uniform01() > 0.55 ? 1 : 0);
    y.y[0] = 0;
    y.y[1] = 1;
    GbdtParams p;
    p.rounds = 25;
    p.max_depth = 3;
    p.min_leaf = 1;
    p.gamma = 0.0;
    const auto m = fit_gbdt(X, y, p);
    for (std::size_t i = 1; i < m.train_log_loss.size(); ++i)
      CHECK(m.train_log_loss[i] <= m.train_log_loss[i - 1] + 1e-12);
  }
}

TEST_CASE("saturated hessians raise NumericalDegeneracy") {
  const auto X = testutil::make_matrix({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}});
  const LabelVector y{{0, 0, 0, 1, 1, 1}};
  GbdtParams p;
  p.rounds = 400;
  p.learning_rate = 80.0;  // blows straight past saturation
  p.max_depth = 2;
  try {
    fit_gbdt(X, y, p);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::numerical_degeneracy);
  }
}

TEST_CASE("single class rejected") {
  const auto X = testutil::make_matrix({{0.0}, {1.0}});
  CHECK_THROWS_AS(fit_gbdt(X, LabelVector{{1, 1}}, GbdtParams{}), Error);
}

TEST_CASE("leaf-wise and level-wise stay valid and can differ") {
  const auto X = testutil::random_matrix(200, 4, 71);
  LabelVector y;
  Rng rng(72);
  for (std::size_t i = 0; i < X.n; ++i)
    y.y.push_back((X.at(i, 0) > 0.5) != (X.at(i, 1) > 0.5) ? 1 : 0);
  GbdtParams level;
  level.rounds = 10;
  level.max_depth = 2;
  GbdtParams leaf = level;
  leaf.growth = GrowthStrategy::leaf_wise;
  const auto a = fit_gbdt(X, y, level);
  const auto b = fit_gbdt(X, y, leaf);
  CHECK(a.train_log_loss.back() < a.train_log_loss.front());
  CHECK(b.train_log_loss.back() < b.train_log_loss.front());
  for (const auto& s : b.stages) CHECK(s.leaf_count() <= 4);
}
