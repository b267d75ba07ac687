#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "bvmlab/distributions.hpp"
#include "bvmlab/estimate.hpp"
#include "bvmlab/regression.hpp"
#include "bvmlab/rng.hpp"

namespace bvmlab {

/// Product-moment (pMoM) prior configuration: a N(0, tau sigma^2 A^{-1})
/// kernel multiplied by prod_i beta_i^{2r}. An empty A means the identity.
struct PMomConfig {
  int r = 1;
  double tau = 1.0;
  std::optional<MatrixXd> A; // empty => identity scale matrix
  double sigma2 = 1.0;

  void validate() const {
    if (r < 1) throw std::invalid_argument("PMomConfig: r must be a positive integer");
    if (!(tau > 0.0)) throw std::invalid_argument("PMomConfig: tau must be > 0");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("PMomConfig: sigma2 must be > 0");
    if (A && A->rows() != A->cols())
      throw std::invalid_argument("PMomConfig: A must be square");
  }

  MatrixXd scale_matrix(int p) const {
    if (!A) return MatrixXd::Identity(p, p);
    if (A->rows() != p) throw std::invalid_argument("PMomConfig: A dimension mismatch");
    return *A;
  }

  bool identity_scale(int p) const {
    return !A || A->isApprox(MatrixXd::Identity(p, p), 0.0);
  }
};

inline double log_double_factorial_odd(int r) {
  // log (2r-1)!! = log prod_{j=1..r} (2j-1)
  double acc = 0.0;
  for (int j = 1; j <= r; ++j) acc += std::log(2.0 * j - 1.0);
  return acc;
}

/// Monte Carlo estimate of E prod_i x_i^{2r} under N(mean, cov), with the
/// sample size doubled adaptively until the relative standard error drops
/// below rel_target (default 1%). Failing to get there by 10^7 samples is
/// an error.
inline EstimateWithError moment_constant(const VectorXd& mean, const MatrixXd& cov, int r,
                                         std::int64_t m, std::uint64_t seed,
                                         double rel_target = 0.01) {
  if (m < 10000) throw std::invalid_argument("moment_constant: need m >= 10^4");
  if (r < 1) throw std::invalid_argument("moment_constant: r must be >= 1");
  const int p = static_cast<int>(mean.size());
  const auto llt = spd_cholesky(cov, "moment_constant covariance");
  auto eng = make_engine(seed, 0x9047u);

  double sum = 0.0, sumsq = 0.0;
  std::int64_t total = 0;
  constexpr std::int64_t cap = 10000000;
  std::int64_t batch = m;
  for (;;) {
    for (std::int64_t i = 0; i < batch; ++i) {
      const VectorXd x = mean + llt.matrixL() * standard_normal_vector(eng, p);
      double term = 1.0;
      for (int j = 0; j < p; ++j) {
        const double sq = x[j] * x[j];
        for (int k = 0; k < r; ++k) term *= sq;
      }
      sum += term;
      sumsq += term * term;
    }
    total += batch;
    const double mean_v = sum / total;
    const double var = std::max(0.0, (sumsq - total * mean_v * mean_v) / (total - 1));
    const double se = std::sqrt(var / total);
    if (mean_v > 0.0 && se <= rel_target * mean_v) return {mean_v, se, total};
    if (total >= cap) {
      std::ostringstream msg;
      msg << "moment_constant: relative SE " << se / mean_v << " still above "
          << rel_target << " after " << total << " samples";
      throw numerical_error(msg.str());
    }
    batch = std::min(total, cap - total);
  }
}

/// pMoM prior with its normalizing constant resolved: analytically
/// ((2r-1)!!)^{-p} for the identity scale, by certified MC otherwise.
struct PMomPrior {
  PMomConfig cfg;
  int p = 0;
  MatrixXd scale; // A
  Eigen::LLT<MatrixXd> llt_scale;
  double log_det_scale = 0.0;
  double log_dp = 0.0;
};

inline PMomPrior make_pmom_prior(const PMomConfig& cfg, int p, std::uint64_t seed = 1,
                                 std::int64_t m = 200000) {
  cfg.validate();
  PMomPrior prior;
  prior.cfg = cfg;
  prior.p = p;
  prior.scale = cfg.scale_matrix(p);
  prior.llt_scale = spd_cholesky(prior.scale, "pMoM scale matrix A");
  prior.log_det_scale = log_det_from_llt(prior.llt_scale);
  if (cfg.identity_scale(p)) {
    prior.log_dp = -p * log_double_factorial_odd(cfg.r);
  } else {
    // d_p = 1 / E prod beta_i^{2r} under N(0, A^{-1})
    const MatrixXd a_inv = prior.llt_scale.solve(MatrixXd::Identity(p, p));
    const auto est = moment_constant(VectorXd::Zero(p), a_inv, cfg.r, m, seed);
    prior.log_dp = -std::log(est.value);
  }
  return prior;
}

/// Normalized log prior density. Vanishes (log = -inf) whenever any
/// coordinate is exactly zero; that is the point of the prior.
inline double pmom_log_prior(const VectorXd& beta, const PMomPrior& prior) {
  if (beta.size() != prior.p)
    throw std::invalid_argument("pmom_log_prior: dimension mismatch");
  const PMomConfig& cfg = prior.cfg;
  const double ts = cfg.tau * cfg.sigma2;
  double log_prod = 0.0;
  for (int i = 0; i < prior.p; ++i) {
    if (beta[i] == 0.0) return -std::numeric_limits<double>::infinity();
    log_prod += 2.0 * cfg.r * std::log(std::abs(beta[i]));
  }
  const double quad = beta.dot(prior.scale * beta);
  return prior.log_dp - 0.5 * prior.p * log_2pi -
         (cfg.r * prior.p + 0.5 * prior.p) * std::log(ts) + 0.5 * prior.log_det_scale -
         0.5 * quad / ts + log_prod;
}

/// Fixed-model pMoM posterior state: C_k = X_k'X_k + A_k / tau,
/// beta_tilde = C_k^{-1} X_k'Y, and the product-moment constant
/// Q_k = E prod beta_i^{2r} under N(beta_tilde, sigma^2 C_k^{-1}).
struct PMomModel {
  PMomConfig cfg;
  int k = 0;
  MatrixXd C;
  Eigen::LLT<MatrixXd> llt_C;
  double log_det_C = 0.0;
  VectorXd beta_tilde;
  EstimateWithError Q;
  double log_normalizer = 0.0; // log Q
};

inline PMomModel build_pmom_model(const MatrixXd& X_k, const VectorXd& Y,
                                  const PMomConfig& cfg, std::uint64_t seed,
                                  std::int64_t m = 10000, double rel_target = 0.01) {
  cfg.validate();
  PMomModel model;
  model.cfg = cfg;
  model.k = static_cast<int>(X_k.cols());
  model.C = X_k.transpose() * X_k + cfg.scale_matrix(model.k) / cfg.tau;
  model.llt_C = spd_cholesky(model.C, "C_k = X_k'X_k + A_k/tau");
  model.log_det_C = log_det_from_llt(model.llt_C);
  model.beta_tilde = model.llt_C.solve(X_k.transpose() * Y);
  const MatrixXd c_inv = model.llt_C.solve(MatrixXd::Identity(model.k, model.k));
  model.Q = moment_constant(model.beta_tilde, cfg.sigma2 * c_inv, cfg.r, m, seed, rel_target);
  if (!(model.Q.value > 0.0) || model.Q.std_error > rel_target * model.Q.value)
    throw numerical_error("build_pmom_model: Q_k estimate failed its accuracy contract");
  model.log_normalizer = std::log(model.Q.value);
  return model;
}

/// Normalized log posterior density of beta_k under the fixed-model pMoM
/// posterior: prod beta_i^{2r} times N(beta_tilde, sigma^2 C^{-1}), divided
/// by Q_k.
inline double pmom_posterior_logdensity(const VectorXd& beta_k, const PMomModel& model) {
  if (beta_k.size() != model.k)
    throw std::invalid_argument("pmom_posterior_logdensity: dimension mismatch");
  double log_prod = 0.0;
  for (int i = 0; i < model.k; ++i) {
    if (beta_k[i] == 0.0) return -std::numeric_limits<double>::infinity();
    log_prod += 2.0 * model.cfg.r * std::log(std::abs(beta_k[i]));
  }
  const VectorXd d = beta_k - model.beta_tilde;
  const double quad = d.dot(model.C * d);
  const double log_gauss = -0.5 * model.k * (log_2pi + std::log(model.cfg.sigma2)) +
                           0.5 * model.log_det_C - 0.5 * quad / model.cfg.sigma2;
  return log_prod + log_gauss - model.log_normalizer;
}

/// Squared Hellinger distance between the pMoM posterior on the true model
/// and N(beta_hat_t, sigma^2 (X_t'X_t)^{-1}), sampled from the Gaussian.
inline EstimateWithError pmom_bvm_hellinger(const PMomModel& model,
                                            const RegressionData& data_t,
                                            std::int64_t m, std::uint64_t seed) {
  if (m < 1000) throw std::invalid_argument("pmom_bvm_hellinger: need m >= 1000");
  if (data_t.p != model.k)
    throw std::invalid_argument("pmom_bvm_hellinger: model/data dimension mismatch");
  auto eng = make_engine(seed);
  const int p = data_t.p;
  const double sigma2 = model.cfg.sigma2;
  const double log_norm_const =
      -0.5 * p * (log_2pi + std::log(sigma2)) + 0.5 * data_t.log_det_gram;

  double sum = 0.0, sumsq = 0.0;
  std::int64_t excluded = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    const VectorXd z = standard_normal_vector(eng, p);
    const VectorXd x =
        data_t.beta_hat + std::sqrt(sigma2) * data_t.gram_factor.matrixU().solve(z);
    const double lq = log_norm_const - 0.5 * z.squaredNorm();
    const double lp = pmom_posterior_logdensity(x, model);
    const double v = std::exp(0.5 * (lp - lq));
    if (!std::isfinite(v)) {
      ++excluded;
      continue;
    }
    sum += v;
    sumsq += v * v;
  }
  if (excluded * 100 > m)
    throw numerical_error("pmom_bvm_hellinger: more than 1% non-finite density ratios");
  const auto kept = m - excluded;
  const double mean = sum / kept;
  const double var = std::max(0.0, (sumsq - kept * mean * mean) / (kept - 1));
  return {1.0 - mean, std::sqrt(var / kept), kept};
}

/// The three proof-level closeness quantities: the shift quadratic form
/// (beta_tilde - beta_hat)' C (beta_tilde - beta_hat) and the two
/// determinant ratios det(I + A/(2 tau) G^{-1}) and det(I - A/(2 tau) C^{-1}),
/// whose limits are 0, 1 and 1.
struct ClosenessDiagnostics {
  double shift_quadform = 0.0;
  double det_ratio_1 = 0.0;
  double det_ratio_2 = 0.0;
};

inline ClosenessDiagnostics closeness_diagnostics(const PMomModel& model,
                                                  const RegressionData& data_t) {
  if (data_t.p != model.k)
    throw std::invalid_argument("closeness_diagnostics: model/data dimension mismatch");
  ClosenessDiagnostics out;
  const VectorXd d = model.beta_tilde - data_t.beta_hat;
  out.shift_quadform = d.dot(model.C * d);
  const MatrixXd half_a = model.cfg.scale_matrix(model.k) / (2.0 * model.cfg.tau);
  const MatrixXd m1 = MatrixXd::Identity(model.k, model.k) +
                      data_t.gram_factor.solve(half_a).transpose();
  const MatrixXd m2 =
      MatrixXd::Identity(model.k, model.k) - model.llt_C.solve(half_a).transpose();
  out.det_ratio_1 = m1.determinant();
  out.det_ratio_2 = m2.determinant();
  return out;
}

/// Self-normalized importance sampling for posterior expectations, with
/// proposal N(beta_tilde, sigma^2 C^{-1}) and weights prod beta_i^{2r}.
inline EstimateWithError snis_expectation(const PMomModel& model,
                                          const std::function<double(const VectorXd&)>& f,
                                          std::int64_t m, std::uint64_t seed) {
  if (m < 1000) throw std::invalid_argument("snis_expectation: need m >= 1000");
  auto eng = make_engine(seed, 0x5015u);
  const int p = model.k;
  const double root_sigma = std::sqrt(model.cfg.sigma2);
  std::vector<double> weights(static_cast<std::size_t>(m)), values(static_cast<std::size_t>(m));
  double wsum = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const VectorXd z = standard_normal_vector(eng, p);
    const VectorXd x = model.beta_tilde + root_sigma * model.llt_C.matrixU().solve(z);
    double w = 1.0;
    for (int j = 0; j < p; ++j) {
      const double sq = x[j] * x[j];
      for (int k = 0; k < model.cfg.r; ++k) w *= sq;
    }
    weights[i] = w;
    values[i] = f(x);
    wsum += w;
  }
  if (!(wsum > 0.0)) throw numerical_error("snis_expectation: all weights vanished");
  double est = 0.0;
  for (std::int64_t i = 0; i < m; ++i) est += weights[i] * values[i] / wsum;
  double var_acc = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double dev = weights[i] * (values[i] - est);
    var_acc += dev * dev;
  }
  return {est, std::sqrt(var_acc) / wsum, m};
}

} // namespace bvmlab
