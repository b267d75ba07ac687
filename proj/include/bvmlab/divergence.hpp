#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "bvmlab/distributions.hpp"
#include "bvmlab/estimate.hpp"
#include "bvmlab/rng.hpp"

namespace bvmlab {

/// A pair of log-densities sharing a base measure, sampled through the
/// second one. Every Monte Carlo divergence here integrates against q, so
/// the integrands of interest (powers of p/q) stay bounded for the
/// shrinking-covariance families this library works with.
struct DensityPair {
  std::function<double(const VectorXd&)> log_density_p;
  std::function<double(const VectorXd&)> log_density_q;
  std::function<VectorXd(std::mt19937_64&)> sampler_q;
  int dim = 0;
};

inline DensityPair make_density_pair(const GaussianSpec& p, const GaussianSpec& q) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("make_density_pair: dimension mismatch");
  return {[p](const VectorXd& x) { return p.log_pdf(x); },
          [q](const VectorXd& x) { return q.log_pdf(x); },
          [q](std::mt19937_64& eng) { return q.sample(eng); }, p.dim()};
}

inline DensityPair make_density_pair(const StudentTSpec& p, const GaussianSpec& q) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("make_density_pair: dimension mismatch");
  return {[p](const VectorXd& x) { return p.log_pdf(x); },
          [q](const VectorXd& x) { return q.log_pdf(x); },
          [q](std::mt19937_64& eng) { return q.sample(eng); }, p.dim()};
}

namespace detail {

/// Log-ratios log p(x_i) - log q(x_i) for x_i ~ q. The shared-sample rule
/// for inequality checks lives here: one draw feeds every estimator.
inline std::vector<double> sample_log_ratios(const DensityPair& pair, std::int64_t m,
                                             std::uint64_t seed) {
  if (m < 100) throw std::invalid_argument("divergence MC: need m >= 100");
  auto eng = make_engine(seed);
  std::vector<double> deltas(static_cast<std::size_t>(m));
  for (auto& d : deltas) {
    const VectorXd x = pair.sampler_q(eng);
    d = pair.log_density_p(x) - pair.log_density_q(x);
  }
  return deltas;
}

/// Sample mean of f(delta) with non-finite values excluded; more than 1%
/// exclusions is treated as estimator failure.
template <typename F>
EstimateWithError mc_mean(const std::vector<double>& deltas, F&& f) {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t kept = 0, excluded = 0;
  for (double d : deltas) {
    const double v = f(d);
    if (!std::isfinite(v)) {
      ++excluded;
      continue;
    }
    sum += v;
    sumsq += v * v;
    ++kept;
  }
  const auto total = static_cast<std::int64_t>(deltas.size());
  if (excluded * 100 > total)
    throw numerical_error("divergence MC: more than 1% of samples had non-finite values");
  if (kept < 2) throw numerical_error("divergence MC: fewer than 2 usable samples");
  const double mean = sum / kept;
  const double var = std::max(0.0, (sumsq - kept * mean * mean) / (kept - 1));
  return {mean, std::sqrt(var / kept), kept};
}

} // namespace detail

/// Alpha-divergence for 0 < alpha < 1, normalized so that the alpha = 1/2
/// value equals twice the squared Hellinger distance below (both built on
/// the 1 - integral sqrt(p q) convention). The alpha -> {0, 1} endpoints
/// are the KL divergences and are served by kl_mc instead.
inline EstimateWithError renyi_alpha_mc(const DensityPair& pair, double alpha,
                                        std::int64_t m, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("renyi_alpha_mc: alpha must lie strictly in (0,1)");
  const auto deltas = detail::sample_log_ratios(pair, m, seed);
  auto est = detail::mc_mean(deltas, [alpha](double d) { return std::exp(alpha * d); });
  const double denom = 2.0 * alpha * (1.0 - alpha);
  return {(1.0 - est.value) / denom, est.std_error / denom, est.n_samples};
}

inline EstimateWithError tv_mc(const DensityPair& pair, std::int64_t m, std::uint64_t seed) {
  const auto deltas = detail::sample_log_ratios(pair, m, seed);
  return detail::mc_mean(deltas, [](double d) { return 0.5 * std::abs(std::expm1(d)); });
}

/// Squared Hellinger distance H^2 = 1 - E_q sqrt(p/q), in [0, 1].
inline EstimateWithError hellinger_sq_mc(const DensityPair& pair, std::int64_t m,
                                         std::uint64_t seed) {
  const auto deltas = detail::sample_log_ratios(pair, m, seed);
  auto est = detail::mc_mean(deltas, [](double d) { return std::exp(0.5 * d); });
  return {1.0 - est.value, est.std_error, est.n_samples};
}

/// KL(q, p) = E_q log(q/p).
inline EstimateWithError kl_mc(const DensityPair& pair, std::int64_t m, std::uint64_t seed) {
  const auto deltas = detail::sample_log_ratios(pair, m, seed);
  return detail::mc_mean(deltas, [](double d) { return -d; });
}

/// Everything the inequality checks need, evaluated on one shared sample
/// set so that the comparisons are not washed out by independent MC noise.
struct DivergenceProfile {
  EstimateWithError tv;
  EstimateWithError hellinger_sq;
  std::vector<double> alphas;
  std::vector<EstimateWithError> renyi;
};

inline DivergenceProfile divergence_profile(const DensityPair& pair,
                                            const std::vector<double>& alphas,
                                            std::int64_t m, std::uint64_t seed) {
  const auto deltas = detail::sample_log_ratios(pair, m, seed);
  DivergenceProfile prof;
  prof.tv = detail::mc_mean(deltas, [](double d) { return 0.5 * std::abs(std::expm1(d)); });
  auto bc = detail::mc_mean(deltas, [](double d) { return std::exp(0.5 * d); });
  prof.hellinger_sq = {1.0 - bc.value, bc.std_error, bc.n_samples};
  prof.alphas = alphas;
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("divergence_profile: alpha must lie in (0,1)");
    auto est = detail::mc_mean(deltas, [alpha](double d) { return std::exp(alpha * d); });
    const double denom = 2.0 * alpha * (1.0 - alpha);
    prof.renyi.push_back({(1.0 - est.value) / denom, est.std_error / denom, est.n_samples});
  }
  return prof;
}

/// Closed-form squared Hellinger distance between two Gaussians,
/// 1 - det(S1)^{1/4} det(S2)^{1/4} / det(Sbar)^{1/2} exp(-delta' Sbar^{-1} delta / 8),
/// assembled entirely in the log domain.
inline double hellinger_sq_gaussian(const GaussianSpec& g1, const GaussianSpec& g2) {
  if (g1.dim() != g2.dim())
    throw std::invalid_argument("hellinger_sq_gaussian: dimension mismatch");
  const MatrixXd sbar =
      0.5 * (g1.cov_scale() * g1.cov_shape() + g2.cov_scale() * g2.cov_shape());
  const auto llt = spd_cholesky(sbar, "average covariance (S1+S2)/2");
  const double log_det_bar = log_det_from_llt(llt);
  const VectorXd delta = g1.mean() - g2.mean();
  const double maha = llt.matrixL().solve(delta).squaredNorm();
  const double log_bc =
      0.25 * g1.log_det_cov() + 0.25 * g2.log_det_cov() - 0.5 * log_det_bar - 0.125 * maha;
  return std::min(1.0, std::max(0.0, -std::expm1(log_bc)));
}

/// Squared Hellinger distance between N((1-w) b, (1-w) s2 G^{-1}) and
/// N(b, s2 G^{-1}), which collapses to a scalar function of w, p and the
/// projection statistic q = b' G b / s2:
///   1 - (1-w)^{p/4} (1-w/2)^{-p/2} exp(-w^2 q / (4 (2-w))).
inline double hellinger_sq_gprior_pair(double omega, double q_over_sigma2, int p) {
  if (!(omega >= 0.0 && omega < 1.0))
    throw std::invalid_argument("hellinger_sq_gprior_pair: omega must lie in [0,1)");
  if (q_over_sigma2 < 0.0)
    throw std::invalid_argument("hellinger_sq_gprior_pair: q/sigma^2 must be >= 0");
  if (p < 1) throw std::invalid_argument("hellinger_sq_gprior_pair: p must be >= 1");
  const double log_bc = 0.25 * p * std::log1p(-omega) - 0.5 * p * std::log1p(-0.5 * omega) -
                        omega * omega / (4.0 * (2.0 - omega)) * q_over_sigma2;
  return std::min(1.0, std::max(0.0, -std::expm1(log_bc)));
}

enum class HellingerMethod { quadrature_1d, mc };

/// Squared Hellinger distance between a Student t and a Gaussian. There is
/// no closed form; the two methods serve as each other's oracle. The 1-D
/// quadrature maps the line through x = c + s tan(u) and refines a midpoint
/// rule until the integral of sqrt(f_t f_g) stabilizes.
inline EstimateWithError hellinger_sq_t_vs_gaussian(const StudentTSpec& t,
                                                    const GaussianSpec& g,
                                                    HellingerMethod method,
                                                    std::int64_t m = 100000,
                                                    std::uint64_t seed = 1) {
  if (t.dim() != g.dim())
    throw std::invalid_argument("hellinger_sq_t_vs_gaussian: dimension mismatch");
  if (method == HellingerMethod::mc)
    return hellinger_sq_mc(make_density_pair(t, g), m, seed);

  if (t.dim() != 1)
    throw std::invalid_argument("hellinger_sq_t_vs_gaussian: quadrature_1d needs dim 1");
  const double loc_t = t.location()[0];
  const double loc_g = g.mean()[0];
  const double sd_t = std::sqrt(t.scale_scale() * t.scale_shape()(0, 0));
  const double sd_g = std::sqrt(g.cov_scale() * g.cov_shape()(0, 0));
  const double center = 0.5 * (loc_t + loc_g);
  const double spread =
      std::max({sd_t, sd_g, 0.5 * std::abs(loc_t - loc_g), 1e-12});

  const auto integrate = [&](std::int64_t n_points) {
    const double half_pi = 0.5 * std::numbers::pi;
    const double h = 2.0 * half_pi / static_cast<double>(n_points);
    double acc = 0.0;
    VectorXd x(1);
    for (std::int64_t i = 0; i < n_points; ++i) {
      const double u = -half_pi + (i + 0.5) * h;
      const double tanu = std::tan(u);
      const double cosu = std::cos(u);
      x[0] = center + spread * tanu;
      const double log_val = 0.5 * (t.log_pdf(x) + g.log_pdf(x)) +
                             std::log(spread) - 2.0 * std::log(std::abs(cosu));
      if (log_val > -700.0) acc += std::exp(log_val);
    }
    return acc * h;
  };

  std::int64_t n = 128;
  double prev = integrate(n);
  for (; n <= (1 << 22); n *= 2) {
    const double cur = integrate(2 * n);
    const double diff = std::abs(cur - prev);
    if (diff < 1e-10) {
      return {std::min(1.0, std::max(0.0, 1.0 - cur)), diff, 2 * n};
    }
    prev = cur;
  }
  throw numerical_error("hellinger_sq_t_vs_gaussian: quadrature did not stabilize");
}

/// Outcome of the alpha-divergence vs total-variation comparison
/// D_alpha <= TV / (alpha (1-alpha)), evaluated on shared samples with a
/// 3-sigma tolerance.
struct AlphaTvCheck {
  bool passed = false;
  double margin = 0.0; // bound + 3 SE - estimate; >= 0 means passed
  EstimateWithError d_alpha;
  EstimateWithError tv;
};

inline AlphaTvCheck check_alpha_tv_bound(const DensityPair& pair, double alpha,
                                         std::int64_t m, std::uint64_t seed) {
  const auto prof = divergence_profile(pair, {alpha}, m, seed);
  const double denom = alpha * (1.0 - alpha);
  const double bound = prof.tv.value / denom;
  const double bound_se = prof.tv.std_error / denom;
  const double se =
      std::sqrt(bound_se * bound_se + prof.renyi[0].std_error * prof.renyi[0].std_error);
  AlphaTvCheck out;
  out.d_alpha = prof.renyi[0];
  out.tv = prof.tv;
  out.margin = bound + 3.0 * se - prof.renyi[0].value;
  out.passed = out.margin >= 0.0;
  return out;
}

} // namespace bvmlab
