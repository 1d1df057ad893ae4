#include "riskscope/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "riskscope/parallel.hpp"

namespace riskscope::learn {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double log_loss(std::span<const double> p, std::span<const int> y) {
  const double total = par::block_sum(p.size(), [&](std::size_t i) {
    const double pi = std::clamp(p[i], 1e-15, 1.0 - 1e-15);
    return y[i] == 1 ? -std::log(pi) : -std::log(1.0 - pi);
  });
  return total / static_cast<double>(p.size());
}

namespace {

// Solve A x = b for symmetric positive definite A (dense, row-major) by
// Cholesky; falls back to a slightly ridged retry when A is near-singular
// (happens at l2 = 0 with collinear one-hot blocks).
bool cholesky_solve(std::vector<double> A, std::vector<double> b, std::size_t m,
                    std::vector<double>* out) {
  for (std::size_t j = 0; j < m; ++j) {
    double diag = A[j * m + j];
    for (std::size_t k = 0; k < j; ++k) diag -= A[j * m + k] * A[j * m + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double L = std::sqrt(diag);
    A[j * m + j] = L;
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = A[i * m + j];
      for (std::size_t k = 0; k < j; ++k) v -= A[i * m + k] * A[j * m + k];
      A[i * m + j] = v / L;
    }
  }
  // forward then backward substitution
  for (std::size_t i = 0; i < m; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= A[i * m + k] * b[k];
    b[i] = v / A[i * m + i];
  }
  for (std::size_t ii = m; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double v = b[i];
    for (std::size_t k = i + 1; k < m; ++k) v -= A[k * m + i] * b[k];
    b[i] = v / A[i * m + i];
  }
  *out = std::move(b);
  return true;
}

struct GradHess {
  std::vector<double> grad;  // m = d+1 entries, intercept first
  std::vector<double> hess;  // m*m row-major
  double loss = 0.0;
};

// Penalized loss, gradient and Hessian in one pass. Per-block partials are
// folded in block order so the result is thread-count independent.
GradHess evaluate(const FeatureMatrix& X, const LabelVector& y, double b0,
                  std::span<const double> beta, double l2, bool want_hess) {
  const std::size_t n = X.n, d = X.d, m = d + 1;
  const std::size_t nb = par::block_count(n);
  const std::size_t hsize = want_hess ? m * m : 0;

  std::vector<double> pl(nb, 0.0);
  std::vector<double> pg(nb * m, 0.0);
  std::vector<double> ph(nb * hsize, 0.0);

  par::for_each_block(n, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
    double* g = pg.data() + blk * m;
    double* h = want_hess ? ph.data() + blk * hsize : nullptr;
    double loss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double* xi = X.values.data() + i * d;
      double z = b0;
      for (std::size_t j = 0; j < d; ++j) z += beta[j] * xi[j];
      const double p = sigmoid(z);
      const double pc = std::clamp(p, 1e-15, 1.0 - 1e-15);
      loss += y.y[i] == 1 ? -std::log(pc) : -std::log(1.0 - pc);
      const double r = p - static_cast<double>(y.y[i]);
      g[0] += r;
      for (std::size_t j = 0; j < d; ++j) g[1 + j] += r * xi[j];
      if (want_hess) {
        // lower triangle only; mirrored after the fold
        const double w = std::max(p * (1.0 - p), 1e-12);
        h[0] += w;
        for (std::size_t j = 0; j < d; ++j) {
          const double wx = w * xi[j];
          h[(1 + j) * m] += wx;
          for (std::size_t k = 0; k <= j; ++k) h[(1 + j) * m + (1 + k)] += wx * xi[k];
        }
      }
    }
    pl[blk] = loss;
  });

  GradHess out;
  out.grad.assign(m, 0.0);
  out.hess.assign(hsize, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    out.loss += pl[b];
    for (std::size_t j = 0; j < m; ++j) out.grad[j] += pg[b * m + j];
    for (std::size_t j = 0; j < hsize; ++j) out.hess[j] += ph[b * hsize + j];
  }
  // ridge on coefficients, not the intercept
  for (std::size_t j = 0; j < d; ++j) {
    out.loss += 0.5 * l2 * beta[j] * beta[j];
    out.grad[1 + j] += l2 * beta[j];
  }
  if (want_hess) {
    for (std::size_t j = 0; j < d; ++j) out.hess[(1 + j) * m + (1 + j)] += l2;
    // mirror the lower triangle
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) out.hess[i * m + j] = out.hess[j * m + i];
  }
  return out;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

std::vector<double> logistic_gradient(const FeatureMatrix& X, const LabelVector& y,
                                      double intercept, std::span<const double> coef, double l2) {
  return evaluate(X, y, intercept, coef, l2, false).grad;
}

LogisticModel fit_logistic(const FeatureMatrix& X, const LabelVector& y,
                           const LogisticConfig& config) {
  const std::size_t n = X.n, d = X.d, m = d + 1;
  if (y.y.size() != n) raise(Errc::length_mismatch, "labels do not match feature rows");
  if (n < d + 1)
    raise(Errc::too_few_rows, "need at least d+1 rows, have " + std::to_string(n));
  const auto pos = static_cast<std::size_t>(std::count(y.y.begin(), y.y.end(), 1));
  if (pos == 0 || pos == n) raise(Errc::single_class_input, "labels contain a single class");

  LogisticModel model;
  model.coef.assign(d, 0.0);

  GradHess cur = evaluate(X, y, model.intercept, model.coef, config.l2, true);
  int iter = 0;
  for (; iter < config.max_iter; ++iter) {
    if (inf_norm(cur.grad) < config.tol) break;

    std::vector<double> step;
    std::vector<double> H = cur.hess;
    bool ok = cholesky_solve(H, cur.grad, m, &step);
    if (!ok) {
      H = cur.hess;
      for (std::size_t j = 0; j < m; ++j) H[j * m + j] += 1e-8;
      ok = cholesky_solve(H, cur.grad, m, &step);
      if (!ok) break;
    }

    // damped Newton: halve until the penalized loss improves
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      double b0_try = model.intercept - scale * step[0];
      std::vector<double> beta_try(d);
      for (std::size_t j = 0; j < d; ++j) beta_try[j] = model.coef[j] - scale * step[1 + j];
      GradHess trial = evaluate(X, y, b0_try, beta_try, config.l2, true);
      if (trial.loss <= cur.loss) {
        model.intercept = b0_try;
        model.coef = std::move(beta_try);
        cur = std::move(trial);
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  model.iterations = iter;
  model.converged = inf_norm(cur.grad) < config.tol;
  return model;
}

double predict_logistic(const LogisticModel& model, std::span<const double> x) {
  if (x.size() != model.coef.size())
    raise(Errc::dimension_mismatch, "feature vector has " + std::to_string(x.size()) +
                                        " entries, model expects " +
                                        std::to_string(model.coef.size()));
  double z = model.intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += model.coef[j] * x[j];
  return sigmoid(z);
}

}  // namespace riskscope::learn
