#pragma once

#include <span>
#include <vector>

#include "riskscope/features.hpp"

namespace riskscope::learn {

struct LogisticModel {
  double intercept = 0.0;
  std::vector<double> coef;
  bool converged = true;
  int iterations = 0;
};

struct LogisticConfig {
  int max_iter = 100;
  double tol = 1e-8;  // convergence: gradient infinity norm
  double l2 = 0.0;    // (l2/2)*||beta||^2 penalty; intercept unpenalized
};

/// Penalized maximum likelihood via damped Newton (IRLS). On hitting
/// max_iter the best iterate is returned with converged=false.
LogisticModel fit_logistic(const FeatureMatrix& X, const LabelVector& y,
                           const LogisticConfig& config = {});

double predict_logistic(const LogisticModel& model, std::span<const double> x);

/// sigma(z) without overflow on large |z|.
double sigmoid(double z);
double logit(double p);

/// Mean logistic log-loss with clamped probabilities; deterministic
/// block-wise reduction.
double log_loss(std::span<const double> p, std::span<const int> y);

/// Gradient of the penalized negative log-likelihood at (intercept, coef);
/// exposed for the optimizer-invariant checks.
std::vector<double> logistic_gradient(const FeatureMatrix& X, const LabelVector& y,
                                      double intercept, std::span<const double> coef, double l2);

}  // namespace riskscope::learn
