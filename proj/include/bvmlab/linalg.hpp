#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bvmlab/estimate.hpp"

namespace bvmlab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Cholesky of an SPD matrix; throws numerical_error when the matrix is not
/// positive definite. All determinants downstream go through this so they
/// can be assembled in the log domain.
inline Eigen::LLT<MatrixXd> spd_cholesky(const MatrixXd& m, const char* what) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw numerical_error(std::string("SPD factorization failed: ") + what);
  return llt;
}

inline double log_det_from_llt(const Eigen::LLT<MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

inline VectorXd standard_normal_vector(std::mt19937_64& eng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd z(dim);
  for (int i = 0; i < dim; ++i) z[i] = gauss(eng);
  return z;
}

inline double log_add_exp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

inline double log_sum_exp(const std::vector<double>& v) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (std::isinf(hi)) return hi;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

} // namespace bvmlab
