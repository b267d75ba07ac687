#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bvmlab {

/// Numerical failure distinct from precondition violations: factorizations
/// that do not converge, series that exceed their iteration caps, Monte
/// Carlo estimators that never reach their error targets.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A Monte Carlo (or quadrature) estimate together with its error scale.
/// For sample means std_error is sample SD / sqrt(n_samples); for
/// interval-refinement quadrature it is the last refinement delta.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

/// 3-sigma agreement test for two independent estimates.
inline bool agrees(const EstimateWithError& a, const EstimateWithError& b,
                   double n_sigma = 3.0) {
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  return std::abs(a.value - b.value) <= n_sigma * se;
}

inline bool agrees(const EstimateWithError& a, double target, double n_sigma = 3.0) {
  return std::abs(a.value - target) <= n_sigma * a.std_error;
}

} // namespace bvmlab
