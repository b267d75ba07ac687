#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "bvmlab/linalg.hpp"

namespace bvmlab {

inline constexpr double log_2pi = 1.8378770664093454836;

/// Multivariate normal with covariance cov_scale * cov_shape, the shape
/// held through its Cholesky factor. Splitting the scalar out keeps the
/// posterior families of interest (sigma^2 * (X'X)^{-1} and relatives)
/// cheap to rescale without refactorizing.
class GaussianSpec {
public:
  GaussianSpec(VectorXd mean, double cov_scale, MatrixXd cov_shape)
      : mean_(std::move(mean)), cov_scale_(cov_scale), cov_shape_(std::move(cov_shape)) {
    if (!(cov_scale_ > 0.0))
      throw std::invalid_argument("GaussianSpec: cov_scale must be > 0");
    if (cov_shape_.rows() != mean_.size() || cov_shape_.cols() != mean_.size())
      throw std::invalid_argument("GaussianSpec: shape/mean dimension mismatch");
    llt_ = spd_cholesky(cov_shape_, "Gaussian covariance shape");
    shape_log_det_ = log_det_from_llt(llt_);
    if (!std::isfinite(shape_log_det_))
      throw numerical_error("GaussianSpec: non-finite log-determinant");
  }

  int dim() const { return static_cast<int>(mean_.size()); }
  const VectorXd& mean() const { return mean_; }
  double cov_scale() const { return cov_scale_; }
  const MatrixXd& cov_shape() const { return cov_shape_; }
  MatrixXd covariance() const { return cov_scale_ * cov_shape_; }
  double log_det_cov() const { return dim() * std::log(cov_scale_) + shape_log_det_; }

  double log_pdf(const VectorXd& x) const {
    const VectorXd d = x - mean_;
    const VectorXd w = llt_.matrixL().solve(d); // w'w = d' shape^{-1} d
    const double maha = w.squaredNorm() / cov_scale_;
    return -0.5 * (dim() * log_2pi + log_det_cov() + maha);
  }

  VectorXd sample(std::mt19937_64& eng) const {
    const VectorXd z = standard_normal_vector(eng, dim());
    const VectorXd noise = llt_.matrixL() * z;
    return mean_ + std::sqrt(cov_scale_) * noise;
  }

private:
  VectorXd mean_;
  double cov_scale_;
  MatrixXd cov_shape_;
  Eigen::LLT<MatrixXd> llt_;
  double shape_log_det_ = 0.0;
};

/// Multivariate Student t with scale matrix scale_scale * scale_shape.
class StudentTSpec {
public:
  StudentTSpec(double df, VectorXd location, double scale_scale, MatrixXd scale_shape)
      : df_(df), location_(std::move(location)), scale_scale_(scale_scale),
        scale_shape_(std::move(scale_shape)) {
    if (!(df_ > 0.0)) throw std::invalid_argument("StudentTSpec: df must be > 0");
    if (!(scale_scale_ > 0.0))
      throw std::invalid_argument("StudentTSpec: scale multiplier must be > 0");
    if (scale_shape_.rows() != location_.size() || scale_shape_.cols() != location_.size())
      throw std::invalid_argument("StudentTSpec: shape/location dimension mismatch");
    llt_ = spd_cholesky(scale_shape_, "Student t scale shape");
    shape_log_det_ = log_det_from_llt(llt_);
  }

  int dim() const { return static_cast<int>(location_.size()); }
  double df() const { return df_; }
  const VectorXd& location() const { return location_; }
  double scale_scale() const { return scale_scale_; }
  const MatrixXd& scale_shape() const { return scale_shape_; }
  double log_det_scale() const { return dim() * std::log(scale_scale_) + shape_log_det_; }

  double log_pdf(const VectorXd& x) const {
    const int p = dim();
    const VectorXd d = x - location_;
    const VectorXd w = llt_.matrixL().solve(d);
    const double maha = w.squaredNorm() / scale_scale_;
    return std::lgamma(0.5 * (df_ + p)) - std::lgamma(0.5 * df_) -
           0.5 * p * std::log(df_ * std::numbers::pi) - 0.5 * log_det_scale() -
           0.5 * (df_ + p) * std::log1p(maha / df_);
  }

  VectorXd sample(std::mt19937_64& eng) const {
    const VectorXd z = standard_normal_vector(eng, dim());
    std::chi_squared_distribution<double> chi2(df_);
    const double w = chi2(eng);
    const double mult = std::sqrt(scale_scale_ * df_ / w);
    return location_ + mult * (llt_.matrixL() * z);
  }

private:
  double df_;
  VectorXd location_;
  double scale_scale_;
  MatrixXd scale_shape_;
  Eigen::LLT<MatrixXd> llt_;
  double shape_log_det_ = 0.0;
};

} // namespace bvmlab
