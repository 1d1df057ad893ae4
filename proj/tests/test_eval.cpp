#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscope/eval.hpp"

using namespace riskscope;
using namespace riskscope::eval;

TEST_CASE("split sizes and determinism") {
  std::vector<int> labels(10, 0);
  labels[1] = labels[4] = labels[7] = 1;
  const auto s1 = split_70_30(10, labels, 5, false);
  CHECK(s1.train_ids.size() == 7);
  CHECK(s1.test_ids.size() == 3);

  const auto s2 = split_70_30(10, labels, 5, false);
  CHECK(s1.train_ids == s2.train_ids);
  CHECK(s1.test_ids == s2.test_ids);

  // union is all indices, disjoint
  std::vector<std::size_t> all = s1.train_ids;
  all.insert(all.end(), s1.test_ids.begin(), s1.test_ids.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);

  CHECK_THROWS_AS(split_70_30(9, labels, 1, false), Error);
}

TEST_CASE("stratified split balances the classes") {
  // 100 rows, 40 positive: floor(0.7*60) + floor(0.7*40) = 42 + 28
  std::vector<int> labels(100, 0);
  for (int i = 0; i < 40; ++i) labels[static_cast<std::size_t>(i * 2)] = 1;
  const auto s = split_70_30(100, labels, 9, true);
  CHECK(s.train_ids.size() == 70);
  std::size_t pos = 0;
  for (auto i : s.train_ids) pos += labels[i] == 1 ? 1u : 0u;
  CHECK(pos == 28);  // train positive rate exactly 0.4
}

TEST_CASE("accuracy and the confusion counts") {
  const std::vector<int> y{1, 1, 0, 0, 1};
  const std::vector<double> perfect{0.9, 0.8, 0.1, 0.2, 0.7};
  CHECK(accuracy(perfect, y) == 1.0);

  // TP=2 TN=2 FP=1 FN=0 -> 0.8
  const std::vector<int> y2{1, 1, 0, 0, 0};
  const std::vector<double> p2{0.9, 0.8, 0.1, 0.2, 0.7};
  ConfusionCounts c;
  CHECK(accuracy(p2, y2, &c) == doctest::Approx(0.8));
  CHECK(c.tp == 2);
  CHECK(c.tn == 2);
  CHECK(c.fp == 1);
  CHECK(c.fn == 0);
  CHECK(c.tp + c.tn + c.fp + c.fn == y2.size());

  // all-negative predictor on 30% positive data
  std::vector<int> y3(10, 0);
  y3[0] = y3[1] = y3[2] = 1;
  const std::vector<double> zeros(10, 0.0);
  CHECK(accuracy(zeros, y3) == doctest::Approx(0.7));

  // a score of exactly 0.5 counts as positive
  const std::vector<int> y4{1};
  const std::vector<double> half{0.5};
  ConfusionCounts c4;
  accuracy(half, y4, &c4);
  CHECK(c4.tp == 1);

  const std::vector<double> too_long{0.1, 0.9};
  CHECK_THROWS_AS(accuracy(too_long, y4), Error);
}

TEST_CASE("majority-class accuracy equals prevalence") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 5 + rng.uniform_index(40);
    std::vector<int> y(n);
    std::size_t pos = 0;
    for (auto& v : y) {
      v = rng.uniform01() < 0.5 ? 1 : 0;
      pos += static_cast<std::size_t>(v);
    }
    const double prev = std::max(pos, n - pos) / static_cast<double>(n);
    const std::vector<double> constant(n, pos * 2 >= n ? 1.0 : 0.0);
    CHECK(accuracy(constant, y) == doctest::Approx(prev));
  }
}

TEST_CASE("roc auc: examples") {
  const std::vector<double> sep{0.1, 0.2, 0.8, 0.9};
  const std::vector<int> ysep{0, 0, 1, 1};
  CHECK(roc_auc(sep, ysep) == 1.0);

  const std::vector<double> same(6, 0.4);
  const std::vector<int> ysame{0, 1, 0, 1, 0, 1};
  CHECK(roc_auc(same, ysame) == 0.5);

  // verified by enumerating the four positive-negative pairs: 3 wins of 4
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y{0, 0, 1, 1};
  CHECK(roc_auc(s, y) == 0.75);

  CHECK_THROWS_AS(roc_auc(same, std::vector<int>(6, 1)), Error);
}

TEST_CASE("roc auc equals the pair-counting oracle exactly") {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.uniform_index(11);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (auto& v : s) v = static_cast<double>(rng.uniform_index(6)) / 5.0;  // force ties
    y[0] = 0;
    y[1] = 1;
    for (std::size_t i = 2; i < n; ++i) y[i] = rng.uniform01() < 0.5 ? 1 : 0;
    CHECK(roc_auc(s, y) == testutil::auc_pair_counting(s, y));
  }
}

TEST_CASE("roc auc invariances") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 4 + rng.uniform_index(20);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (auto& v : s) v = rng.uniform01();
    y[0] = 0;
    y[1] = 1;
    for (std::size_t i = 2; i < n; ++i) y[i] = rng.uniform01() < 0.4 ? 1 : 0;

    const double base = roc_auc(s, y);
    std::vector<double> warped(n), negated(n);
    for (std::size_t i = 0; i < n; ++i) {
      warped[i] = std::exp(3.0 * s[i]) + 7.0;  // strictly increasing transform
      negated[i] = -s[i];
    }
    CHECK(roc_auc(warped, y) == base);
    CHECK(base + roc_auc(negated, y) == 1.0);
  }
}
