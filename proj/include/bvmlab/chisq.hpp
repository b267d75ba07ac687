#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "bvmlab/estimate.hpp"

namespace bvmlab {

// Noncentrality follows the mean-shift convention throughout: chi^2_p(lambda)
// has mean p + lambda, i.e. lambda = ||delta||^2 for a shifted standard
// Gaussian vector.

namespace detail {

inline constexpr int gamma_iter_cap = 2000;

/// Regularized lower incomplete gamma P(a, x) by power series, for x < a + 1.
inline double reg_gamma_lower_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < gamma_iter_cap; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  std::ostringstream msg;
  msg << "incomplete gamma series did not converge: a=" << a << " x=" << x
      << " after " << gamma_iter_cap << " terms";
  throw numerical_error(msg.str());
}

/// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
/// fraction, for x >= a + 1.
inline double reg_gamma_upper_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= gamma_iter_cap; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  std::ostringstream msg;
  msg << "incomplete gamma continued fraction did not converge: a=" << a
      << " x=" << x << " after " << gamma_iter_cap << " iterations";
  throw numerical_error(msg.str());
}

inline double reg_gamma_lower(double a, double x) {
  if (x < 0.0 || a <= 0.0)
    throw std::invalid_argument("reg_gamma_lower: need x >= 0 and a > 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return reg_gamma_lower_series(a, x);
  return 1.0 - reg_gamma_upper_cf(a, x);
}

inline double reg_gamma_upper(double a, double x) {
  if (x < 0.0 || a <= 0.0)
    throw std::invalid_argument("reg_gamma_upper: need x >= 0 and a > 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - reg_gamma_lower_series(a, x);
  return reg_gamma_upper_cf(a, x);
}

} // namespace detail

/// Central chi-squared CDF with p > 0 degrees of freedom.
inline double chisq_cdf(double p, double x) {
  if (!(p > 0.0)) throw std::invalid_argument("chisq_cdf: p must be > 0");
  if (x < 0.0) throw std::invalid_argument("chisq_cdf: x must be >= 0");
  return detail::reg_gamma_lower(0.5 * p, 0.5 * x);
}

/// Central chi-squared survival function, computed directly so the far
/// right tail keeps full relative accuracy.
inline double chisq_sf(double p, double x) {
  if (!(p > 0.0)) throw std::invalid_argument("chisq_sf: p must be > 0");
  if (x < 0.0) throw std::invalid_argument("chisq_sf: x must be >= 0");
  return detail::reg_gamma_upper(0.5 * p, 0.5 * x);
}

inline constexpr std::int64_t noncentral_term_cap = 1000000;

/// Noncentral chi-squared CDF via the Poisson(lambda/2) mixture of central
/// CDFs, truncated once the unaccounted Poisson mass drops below tol.
inline double noncentral_chisq_cdf(double p, double lambda, double x, double tol = 1e-9) {
  if (!(p > 0.0)) throw std::invalid_argument("noncentral_chisq_cdf: p must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("noncentral_chisq_cdf: lambda must be >= 0");
  if (x < 0.0) throw std::invalid_argument("noncentral_chisq_cdf: x must be >= 0");
  if (!(tol > 0.0 && tol <= 1e-6))
    throw std::invalid_argument("noncentral_chisq_cdf: tol must be in (0, 1e-6]");
  if (x == 0.0) return 0.0;
  if (lambda == 0.0) return chisq_cdf(p, x);

  const double half_lambda = 0.5 * lambda;
  double cdf_term = detail::reg_gamma_lower(0.5 * p, 0.5 * x);
  double acc = 0.0;
  double weight_acc = 0.0;
  for (std::int64_t j = 0;; ++j) {
    const double a = 0.5 * p + static_cast<double>(j);
    const double log_w = j * std::log(half_lambda) - half_lambda - std::lgamma(j + 1.0);
    const double w = std::exp(log_w);
    acc += w * cdf_term;
    weight_acc += w;
    if (1.0 - weight_acc < tol) break;
    if (j + 1 >= noncentral_term_cap) {
      std::ostringstream msg;
      msg << "noncentral_chisq_cdf: Poisson series not exhausted after "
          << noncentral_term_cap << " terms (p=" << p << " lambda=" << lambda
          << " x=" << x << " covered mass=" << weight_acc << ")";
      throw numerical_error(msg.str());
    }
    // P(a+1, x) = P(a, x) - x^a e^{-x} / Gamma(a+1), at x -> x/2.
    const double dec = std::exp(a * std::log(0.5 * x) - 0.5 * x - std::lgamma(a + 1.0));
    cdf_term = std::max(0.0, cdf_term - dec);
  }
  return std::min(1.0, acc);
}

inline double noncentral_chisq_sf(double p, double lambda, double x, double tol = 1e-9) {
  return 1.0 - noncentral_chisq_cdf(p, lambda, x, tol);
}

/// Two-sided concentration bound 2 exp(-a^2 / (4p)) for |chi^2_p - p| > a.
/// Raw value; may exceed 1 (clamp with clamp_probability for reporting).
/// Only valid as a domination bound in the small-deviation regime a = O(p):
/// for a >> p the exact upper tail is heavier than this expression.
inline double central_two_sided_bound(double p, double a) {
  if (!(p > 0.0)) throw std::invalid_argument("central_two_sided_bound: p must be > 0");
  if (!(a > 0.0)) throw std::invalid_argument("central_two_sided_bound: a must be > 0");
  return 2.0 * std::exp(-a * a / (4.0 * p));
}

/// Upper-tail bound exp(-p/2 {t - log(1+t)}), t = c/(p+lambda), for
/// P(chi^2_p(lambda) - (p+lambda) > c).
inline double noncentral_upper_bound(double p, double lambda, double c) {
  if (!(p > 0.0)) throw std::invalid_argument("noncentral_upper_bound: p must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("noncentral_upper_bound: lambda must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("noncentral_upper_bound: c must be > 0");
  const double t = c / (p + lambda);
  return std::exp(-0.5 * p * (t - std::log1p(t)));
}

/// Default constant for the lower-fraction bound, sized from the shipped
/// calibration grid (max observed minimal constant is ~27.7 at p=1,
/// lambda=200, w=0.75; see calibrate_fraction_bound_c1).
inline constexpr double default_fraction_bound_c1 = 32.0;

/// Lower-fraction bound c1 lambda^{-1} exp(-lambda (1-w)^2 / 8) for
/// P(chi^2_p(lambda) <= w lambda), w < 1.
inline double noncentral_fraction_bound(double p, double lambda, double w,
                                        double c1 = default_fraction_bound_c1) {
  if (!(p > 0.0)) throw std::invalid_argument("noncentral_fraction_bound: p must be > 0");
  if (!(lambda > 0.0))
    throw std::invalid_argument("noncentral_fraction_bound: lambda must be > 0");
  if (!(w < 1.0)) throw std::invalid_argument("noncentral_fraction_bound: w must be < 1");
  if (!(c1 > 0.0)) throw std::invalid_argument("noncentral_fraction_bound: c1 must be > 0");
  const double om = 1.0 - w;
  return c1 / lambda * std::exp(-lambda * om * om / 8.0);
}

/// Smallest c1 making the lower-fraction bound match the exact probability
/// at (p, lambda, w).
inline double calibrate_fraction_bound_c1(double p, double lambda, double w,
                                          double tol = 1e-9) {
  const double exact = w > 0.0 ? noncentral_chisq_cdf(p, lambda, w * lambda, tol) : 0.0;
  const double om = 1.0 - w;
  return exact * lambda * std::exp(lambda * om * om / 8.0);
}

/// Lower-tail bound exp(-c^2 / (4p)) for P(chi^2_p(lambda) - p <= -c); the
/// noncentral case inherits it because the lower tail shrinks with lambda.
inline double central_lower_bound(double p, double c) {
  if (!(p > 0.0)) throw std::invalid_argument("central_lower_bound: p must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("central_lower_bound: c must be > 0");
  return std::exp(-c * c / (4.0 * p));
}

inline double clamp_probability(double x) { return std::min(1.0, std::max(0.0, x)); }

/// Exact P(|chi^2_p - p| > a), the quantity central_two_sided_bound caps.
inline double central_two_sided_exact(double p, double a) {
  double prob = chisq_sf(p, p + a);
  if (a < p) prob += chisq_cdf(p, p - a);
  return prob;
}

} // namespace bvmlab
