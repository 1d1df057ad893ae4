// Compares the serial path (parallel kernels disabled) against the OpenMP
// path on synthetic workloads and checks that both produce identical bits.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "riskscope/eval.hpp"
#include "riskscope/forest.hpp"
#include "riskscope/gbdt.hpp"
#include "riskscope/kmeans.hpp"
#include "riskscope/logistic.hpp"
#include "riskscope/model.hpp"
#include "riskscope/parallel.hpp"
#include "riskscope/rng.hpp"
#include "riskscope/shapley.hpp"

namespace {

using riskscope::FeatureMatrix;
using riskscope::LabelVector;
using riskscope::Rng;

FeatureMatrix synthetic_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  FeatureMatrix X;
  X.n = n;
  X.d = d;
  X.values.resize(n * d);
  for (std::size_t c = 0; c < d; ++c)
    X.column_meta.push_back({"f" + std::to_string(c), riskscope::ColumnKind::numeric,
                             "f" + std::to_string(c)});
  Rng rng(seed);
  for (auto& v : X.values) v = rng.uniform01();
  return X;
}

LabelVector synthetic_labels(const FeatureMatrix& X, std::uint64_t seed) {
  LabelVector y;
  Rng rng(seed);
  for (std::size_t i = 0; i < X.n; ++i) {
    const double s = X.at(i, 0) + 0.5 * X.at(i, 1) - X.at(i, 2) + 0.3 * rng.uniform01();
    y.y.push_back(s > 0.4 ? 1 : 0);
  }
  return y;
}

double ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, const std::function<std::string()>& run) {
  riskscope::par::set_enabled(false);
  std::string serial_result;
  const double serial_ms = ms([&] { serial_result = run(); });

  riskscope::par::set_enabled(true);
  std::string parallel_result;
  const double parallel_ms = ms([&] { parallel_result = run(); });

  const bool identical = serial_result == parallel_result;
  std::printf("%-24s serial %9.1f ms   openmp %9.1f ms   speedup %5.2fx   bits %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "identical" : "DIFFER");
}

std::string doubles_key(std::span<const double> v) {
  return std::string(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", riskscope::par::worker_count());

  {
    const auto X = synthetic_matrix(60000, 20, 1);
    const auto y = synthetic_labels(X, 2);
    report("logistic fit", [&] {
      riskscope::learn::LogisticConfig cfg;
      cfg.l2 = 1e-3;
      const auto m = riskscope::learn::fit_logistic(X, y, cfg);
      auto key = doubles_key(m.coef);
      key += doubles_key({&m.intercept, 1});
      return key;
    });
  }
  {
    const auto X = synthetic_matrix(20000, 20, 3);
    const auto y = synthetic_labels(X, 4);
    report("gbdt 10 rounds", [&] {
      riskscope::learn::GbdtParams p;
      p.rounds = 10;
      p.max_depth = 5;
      const auto m = riskscope::learn::fit_gbdt(X, y, p);
      return doubles_key(m.train_log_loss);
    });
  }
  {
    const auto X = synthetic_matrix(8000, 16, 5);
    const auto y = synthetic_labels(X, 6);
    report("forest 48 trees", [&] {
      riskscope::learn::ForestParams p;
      p.trees = 48;
      p.max_depth = 8;
      p.min_leaf = 2;
      p.seed = 11;
      const auto f = riskscope::learn::fit_forest(X, y, p);
      std::string key;
      for (std::size_t i = 0; i < 64; ++i) key += doubles_key({&f.trees[i % 48].nodes[0].threshold, 1});
      return key;
    });
  }
  {
    const auto X = synthetic_matrix(60000, 8, 7);
    report("kmeans k=8", [&] {
      riskscope::cluster::KmeansParams p;
      p.k = 8;
      p.seed = 13;
      p.restarts = 6;
      const auto r = riskscope::cluster::kmeans(X.values, X.n, X.d, p);
      auto key = doubles_key(r.centroids);
      key += doubles_key({&r.inertia, 1});
      return key;
    });
  }
  {
    const auto X = synthetic_matrix(400, 10, 9);
    const auto y = synthetic_labels(X, 10);
    riskscope::learn::GbdtParams p;
    p.rounds = 20;
    riskscope::par::set_enabled(true);
    riskscope::learn::ModelArtifact model{riskscope::learn::fit_gbdt(X, y, p), X.column_meta};
    const auto background = synthetic_matrix(128, 10, 11);
    report("shapley d=10", [&] {
      const auto a = riskscope::shap::shapley_exact(model, X.row(0), background);
      return doubles_key(a.phi);
    });
  }
  return 0;
}
