#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bvmlab/distributions.hpp"
#include "bvmlab/divergence.hpp"
#include "bvmlab/regression.hpp"

namespace bvmlab {

enum class SigmaMode { fixed_sigma, unknown_sigma };

/// Hierarchical g-prior hyperparameters. The shrinkage weight
/// omega = 1/(1+g) carries a Beta(a, b) prior; sigma^2 is either supplied
/// (fixed mode) or integrated out under an IG(c/2, d/2) prior.
struct GPriorHyper {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double d = 1.0;
  std::optional<double> sigma2; // set => fixed-sigma mode

  SigmaMode mode() const {
    return sigma2.has_value() ? SigmaMode::fixed_sigma : SigmaMode::unknown_sigma;
  }

  void validate() const {
    if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0))
      throw std::invalid_argument("GPriorHyper: a, b, c, d must all be > 0");
    if (sigma2 && !(*sigma2 > 0.0))
      throw std::invalid_argument("GPriorHyper: sigma2 must be > 0 when given");
  }
};

/// Unnormalized log posterior density of omega given the data.
/// Fixed sigma^2:   (a+p/2-1) log w + (b-1) log(1-w) - w q_proj / (2 sigma^2).
/// Unknown sigma^2: (a+p/2-1) log w + (b-1) log(1-w)
///                  - (n+c)/2 log(d + q_resid + w q_proj).
/// The exponential rate carries the 1/2 that marginalizing the Gaussian
/// hierarchy actually produces; it is what keeps this kernel consistent
/// with the beta conditionals below and with the sigma^2-marginal kernel.
inline double omega_log_density(double omega, const GPriorHyper& hyper,
                                const RegressionData& data) {
  if (!(omega > 0.0 && omega < 1.0))
    throw std::invalid_argument("omega_log_density: omega must lie strictly in (0,1)");
  hyper.validate();
  const double shape_term = (hyper.a + 0.5 * data.p - 1.0) * std::log(omega) +
                            (hyper.b - 1.0) * std::log1p(-omega);
  if (hyper.mode() == SigmaMode::fixed_sigma)
    return shape_term - omega * data.q_proj / (2.0 * *hyper.sigma2);
  return shape_term - 0.5 * (data.n + hyper.c) *
                          std::log(hyper.d + data.q_resid + omega * data.q_proj);
}

/// Normalized quadrature representation of pi(omega | Y) on a composite
/// grid: geometric nodes resolve the near-zero mass spike (posterior mass
/// sits at the O((a+p/2)/s) scale), a uniform tail covers the rest of (0,1).
struct OmegaPosterior {
  SigmaMode mode = SigmaMode::fixed_sigma;
  double a = 1.0, b = 1.0;
  int p = 1;
  double s = 0.0;            // fixed mode: q_proj / (2 sigma^2)
  double n_plus_c = 0.0;     // unknown mode
  double d_plus_qresid = 0.0;
  double q_proj = 0.0;
  std::vector<double> nodes;           // strictly inside (0,1), increasing
  std::vector<double> log_f;           // unnormalized log density at nodes
  std::vector<double> log_node_weight; // normalized trapezoid weights (logs)
  std::vector<int> active;             // nodes within 60 nats of the weight peak
  double log_normalizer = 0.0;
  double cert_delta = 0.0; // |logZ(K) - logZ(2K)| certificate from the build
  int grid_size = 0;
};

namespace detail {

inline constexpr double omega_floor = 1e-12;
inline constexpr double omega_ceil = 1.0 - 1e-12;

inline std::vector<double> omega_grid_nodes(int k, double pivot) {
  std::vector<double> nodes;
  nodes.reserve(k + 2);
  const int k_geo = k / 2;
  const double ratio = std::log(pivot / omega_floor) / (k_geo - 1);
  for (int i = 0; i < k_geo; ++i) nodes.push_back(omega_floor * std::exp(i * ratio));
  const int k_lin = k - k_geo + 1;
  const double h = (omega_ceil - pivot) / k_lin;
  for (int i = 1; i <= k_lin; ++i) nodes.push_back(pivot + i * h);
  return nodes;
}

/// Trapezoid log-normalizer over the node set.
inline double grid_log_normalizer(const std::vector<double>& nodes,
                                  const std::vector<double>& log_f) {
  std::vector<double> cells;
  cells.reserve(nodes.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const double width = nodes[j + 1] - nodes[j];
    cells.push_back(std::log(0.5 * width) + log_add_exp(log_f[j], log_f[j + 1]));
  }
  return log_sum_exp(cells);
}

} // namespace detail

/// Builds pi(omega | Y) on the composite grid and certifies convergence by
/// doubling: the grid is accepted once doubling K moves the log-normalizer
/// by less than 1e-6. Throws once K exceeds 2^16 without stabilizing.
inline OmegaPosterior build_omega_posterior(const GPriorHyper& hyper,
                                            const RegressionData& data, int k = 1024) {
  if (k < 64) throw std::invalid_argument("build_omega_posterior: need K >= 64");
  hyper.validate();

  OmegaPosterior post;
  post.mode = hyper.mode();
  post.a = hyper.a;
  post.b = hyper.b;
  post.p = data.p;
  post.q_proj = data.q_proj;
  if (post.mode == SigmaMode::fixed_sigma) {
    post.s = data.q_proj / (2.0 * *hyper.sigma2);
  } else {
    post.n_plus_c = data.n + hyper.c;
    post.d_plus_qresid = hyper.d + data.q_resid;
    // effective exponential rate of the kernel at omega -> 0
    post.s = 0.5 * post.n_plus_c * data.q_proj / post.d_plus_qresid;
  }
  const double mass_scale = post.s > 0.0 ? 10.0 * (hyper.a + 0.5 * data.p) / post.s : 1.0;
  const double pivot = std::min(0.5, std::max(mass_scale, 1e-9));

  const auto eval_grid = [&](int kk, std::vector<double>& nodes, std::vector<double>& lf) {
    nodes = detail::omega_grid_nodes(kk, pivot);
    lf.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      lf[i] = omega_log_density(nodes[i], hyper, data);
    return detail::grid_log_normalizer(nodes, lf);
  };

  std::vector<double> nodes, lf;
  double log_z = eval_grid(k, nodes, lf);
  for (;;) {
    std::vector<double> nodes2, lf2;
    const double log_z2 = eval_grid(2 * k, nodes2, lf2);
    const double delta = std::abs(log_z2 - log_z);
    if (delta < 1e-6) {
      post.nodes = std::move(nodes2);
      post.log_f = std::move(lf2);
      post.log_normalizer = log_z2;
      post.cert_delta = delta;
      post.grid_size = static_cast<int>(post.nodes.size());
      break;
    }
    k *= 2;
    if (2 * k > (1 << 16)) {
      std::ostringstream msg;
      msg << "build_omega_posterior: grid certificate failed at K=" << k
          << " (logZ=" << log_z << ", logZ2=" << log_z2 << ", delta=" << delta
          << ", s=" << post.s << ", pivot=" << pivot << ")";
      throw numerical_error(msg.str());
    }
    nodes = std::move(nodes2);
    lf = std::move(lf2);
    log_z = log_z2;
  }

  // Normalized per-node trapezoid weights; re-association of the cell sums
  // makes them total exactly one.
  const std::size_t m = post.nodes.size();
  post.log_node_weight.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double left = j == 0 ? post.nodes[0] : post.nodes[j - 1];
    const double right = j + 1 == m ? post.nodes[m - 1] : post.nodes[j + 1];
    post.log_node_weight[j] =
        std::log(0.5 * (right - left)) + post.log_f[j] - post.log_normalizer;
  }
  const double peak = *std::max_element(post.log_node_weight.begin(),
                                        post.log_node_weight.end());
  for (std::size_t j = 0; j < m; ++j)
    if (post.log_node_weight[j] >= peak - 60.0) post.active.push_back(static_cast<int>(j));
  return post;
}

/// Single-node degenerate representation (a point mass in omega); the
/// mixture then collapses to one conditional, which is what ties the MC
/// Hellinger estimate back to the closed form in tests.
inline OmegaPosterior single_omega_posterior(double omega0, const GPriorHyper& hyper,
                                             const RegressionData& data) {
  if (!(omega0 > 0.0 && omega0 < 1.0))
    throw std::invalid_argument("single_omega_posterior: omega0 must lie in (0,1)");
  hyper.validate();
  OmegaPosterior post;
  post.mode = hyper.mode();
  post.a = hyper.a;
  post.b = hyper.b;
  post.p = data.p;
  post.q_proj = data.q_proj;
  if (post.mode == SigmaMode::fixed_sigma) {
    post.s = data.q_proj / (2.0 * *hyper.sigma2);
  } else {
    post.n_plus_c = data.n + hyper.c;
    post.d_plus_qresid = hyper.d + data.q_resid;
  }
  post.nodes = {omega0};
  post.log_f = {0.0};
  post.log_node_weight = {0.0};
  post.active = {0};
  post.log_normalizer = 0.0;
  post.grid_size = 1;
  return post;
}

/// P(omega > threshold | Y) by quadrature of the normalized density over
/// (threshold, 1), with the straddled cell split log-linearly.
inline double omega_tail_prob(const OmegaPosterior& post, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("omega_tail_prob: threshold must lie in (0,1)");
  const auto& w = post.nodes;
  if (post.grid_size == 1)
    return w[0] > threshold ? 1.0 : 0.0;
  if (threshold <= w.front()) return 1.0;
  if (threshold >= w.back()) return 0.0;

  std::vector<double> cells;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    if (w[j + 1] <= threshold) continue;
    if (w[j] >= threshold) {
      cells.push_back(std::log(0.5 * (w[j + 1] - w[j])) +
                      log_add_exp(post.log_f[j], post.log_f[j + 1]));
    } else {
      const double frac = (threshold - w[j]) / (w[j + 1] - w[j]);
      const double lf_t = post.log_f[j] + frac * (post.log_f[j + 1] - post.log_f[j]);
      cells.push_back(std::log(0.5 * (w[j + 1] - threshold)) +
                      log_add_exp(lf_t, post.log_f[j + 1]));
    }
  }
  if (cells.empty()) return 0.0;
  const double val = std::exp(log_sum_exp(cells) - post.log_normalizer);
  return std::min(1.0, std::max(0.0, val));
}

inline double omega_posterior_mean(const OmegaPosterior& post) {
  double acc = 0.0;
  for (std::size_t j = 0; j < post.nodes.size(); ++j)
    acc += std::exp(post.log_node_weight[j]) * post.nodes[j];
  return acc;
}

/// Concentration threshold t_n = xi_n p log n; the posterior tail above
/// t_n/n is the quantity whose expectation vanishes. For small n the
/// threshold may leave (0,1), which is flagged rather than treated as an
/// error.
struct ThresholdRule {
  double xi = 0.0;
  double t_n = 0.0;
  double threshold = 0.0;
  bool degenerate = false;
};

inline ThresholdRule make_threshold(int n, int p, std::optional<double> xi = std::nullopt) {
  if (!(n > 1 && p >= 1)) throw std::invalid_argument("make_threshold: need n > 1, p >= 1");
  ThresholdRule r;
  r.xi = xi.value_or(std::log(static_cast<double>(n)));
  r.t_n = r.xi * p * std::log(static_cast<double>(n));
  r.threshold = r.t_n / n;
  r.degenerate = !(r.threshold > 0.0 && r.threshold < 1.0);
  return r;
}

/// beta | omega, sigma^2, Y  ~  N((1-w) beta_hat, (1-w) sigma^2 (X'X)^{-1}).
inline GaussianSpec beta_conditional_fixed(double omega, const RegressionData& data,
                                           double sigma2) {
  if (!(omega >= 0.0 && omega < 1.0))
    throw std::invalid_argument("beta_conditional_fixed: omega must lie in [0,1)");
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("beta_conditional_fixed: sigma2 must be > 0");
  const MatrixXd gram_inv =
      data.gram_factor.solve(MatrixXd::Identity(data.p, data.p));
  return GaussianSpec((1.0 - omega) * data.beta_hat, (1.0 - omega) * sigma2, gram_inv);
}

/// beta | omega, Y ~ t_{n+c} with location (1-w) beta_hat and scale matrix
/// (d + q_resid + w q_proj) (1-w) / (n+c) * (X'X)^{-1}; the (1-w) sits in
/// the numerator, as integrating sigma^2 out of the Gaussian conditional
/// requires.
inline StudentTSpec beta_conditional_unknown(double omega, const RegressionData& data,
                                             const GPriorHyper& hyper) {
  if (!(omega >= 0.0 && omega < 1.0))
    throw std::invalid_argument("beta_conditional_unknown: omega must lie in [0,1)");
  hyper.validate();
  const double nu = data.n + hyper.c;
  const double s_omega = hyper.d + data.q_resid + omega * data.q_proj;
  const MatrixXd gram_inv =
      data.gram_factor.solve(MatrixXd::Identity(data.p, data.p));
  return StudentTSpec(nu, (1.0 - omega) * data.beta_hat, s_omega * (1.0 - omega) / nu,
                      gram_inv);
}

/// Log density of the omega-mixture marginal of beta, evaluated by
/// log-sum-exp over the active grid nodes. The quadratic forms for every
/// node come from one O(p^2) pass:
///   (beta - (1-w) beta_hat)' G (beta - (1-w) beta_hat) = A + 2 w B + w^2 C.
inline double beta_marginal_logdensity(const VectorXd& beta, const OmegaPosterior& post,
                                       const RegressionData& data,
                                       const GPriorHyper& hyper) {
  const int p = data.p;
  const VectorXd v = beta - data.beta_hat;
  const VectorXd gv = data.gram * v;
  const double qa = v.dot(gv);
  const double qb = data.beta_hat.dot(gv);
  const double qc = data.q_proj;

  std::vector<double> terms;
  terms.reserve(post.active.size());
  if (post.mode == SigmaMode::fixed_sigma) {
    if (!hyper.sigma2)
      throw std::invalid_argument("beta_marginal_logdensity: posterior is in fixed-sigma "
                                  "mode but hyper carries no sigma2");
    const double sigma2 = *hyper.sigma2;
    for (int j : post.active) {
      const double w = post.nodes[j];
      const double quad = qa + 2.0 * w * qb + w * w * qc;
      const double var = (1.0 - w) * sigma2;
      const double lcond = -0.5 * p * (log_2pi + std::log(var)) + 0.5 * data.log_det_gram -
                           0.5 * quad / var;
      terms.push_back(post.log_node_weight[j] + lcond);
    }
  } else {
    const double nu = post.n_plus_c;
    const double lg_const = std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) -
                            0.5 * p * std::log(nu * std::numbers::pi) +
                            0.5 * data.log_det_gram;
    for (int j : post.active) {
      const double w = post.nodes[j];
      const double quad = qa + 2.0 * w * qb + w * w * qc;
      const double scale = (post.d_plus_qresid + w * post.q_proj) * (1.0 - w) / nu;
      const double lcond = lg_const - 0.5 * p * std::log(scale) -
                           0.5 * (nu + p) * std::log1p(quad / (scale * nu));
      terms.push_back(post.log_node_weight[j] + lcond);
    }
  }
  return log_sum_exp(terms);
}

/// Squared Hellinger distance between the mixture marginal of beta and its
/// Gaussian limit N(beta_hat, target_sigma2 (X'X)^{-1}), estimated by
/// sampling the Gaussian target. target_sigma2 is the known sigma^2 in
/// fixed mode and the true sigma0^2 in unknown mode.
inline EstimateWithError bvm_hellinger(const RegressionData& data, const GPriorHyper& hyper,
                                       const OmegaPosterior& post, double target_sigma2,
                                       std::int64_t m, std::uint64_t seed) {
  if (m < 1000) throw std::invalid_argument("bvm_hellinger: need m >= 1000");
  if (!(target_sigma2 > 0.0))
    throw std::invalid_argument("bvm_hellinger: target sigma^2 must be > 0");
  auto eng = make_engine(seed);
  const int p = data.p;
  const double log_norm_const =
      -0.5 * p * (log_2pi + std::log(target_sigma2)) + 0.5 * data.log_det_gram;

  double sum = 0.0, sumsq = 0.0;
  std::int64_t excluded = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    const VectorXd z = standard_normal_vector(eng, p);
    const VectorXd x =
        data.beta_hat + std::sqrt(target_sigma2) * data.gram_factor.matrixU().solve(z);
    const double lq = log_norm_const - 0.5 * z.squaredNorm();
    const double lp = beta_marginal_logdensity(x, post, data, hyper);
    const double v = std::exp(0.5 * (lp - lq));
    if (!std::isfinite(v)) {
      ++excluded;
      continue;
    }
    sum += v;
    sumsq += v * v;
  }
  if (excluded * 100 > m)
    throw numerical_error("bvm_hellinger: more than 1% non-finite density ratios");
  const auto kept = m - excluded;
  const double mean = sum / kept;
  const double var = std::max(0.0, (sumsq - kept * mean * mean) / (kept - 1));
  return {1.0 - mean, std::sqrt(var / kept), kept};
}

/// Convexity upper bound: the posterior-weighted average of the closed-form
/// conditional-vs-target squared Hellinger distances (fixed-sigma mode).
inline double jensen_upper_bound(const OmegaPosterior& post, const RegressionData& data,
                                 double sigma2) {
  if (post.mode != SigmaMode::fixed_sigma)
    throw std::invalid_argument("jensen_upper_bound: fixed-sigma mode only");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("jensen_upper_bound: sigma2 must be > 0");
  const double q_over_sigma2 = data.q_proj / sigma2;
  double acc = 0.0;
  for (std::size_t j = 0; j < post.nodes.size(); ++j)
    acc += std::exp(post.log_node_weight[j]) *
           hellinger_sq_gprior_pair(post.nodes[j], q_over_sigma2, data.p);
  return acc;
}

} // namespace bvmlab
