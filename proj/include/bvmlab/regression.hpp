#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "bvmlab/linalg.hpp"
#include "bvmlab/rng.hpp"

namespace bvmlab {

/// A fitted linear model: design, response, and the cached least-squares
/// quantities every posterior in this library is built from.
struct RegressionData {
  MatrixXd X;
  VectorXd Y;
  int n = 0;
  int p = 0;
  VectorXd beta_hat;
  double q_proj = 0.0;  // Y' P_X Y, equal to beta_hat' X'X beta_hat
  double q_resid = 0.0; // Y' (I - P_X) Y
  MatrixXd gram;        // X'X
  Eigen::LLT<MatrixXd> gram_factor;
  double log_det_gram = 0.0;
};

struct TruthSpec {
  VectorXd beta0;
  double sigma0 = 1.0;
  double signal = 0.0; // beta0' X'X beta0
};

enum class DesignMode { iid_gaussian, orthogonalized };

/// Full-column-rank n x p design. In orthogonalized mode the columns are
/// rescaled to squared norm n, so X'X = n I exactly and signal calibration
/// has O(1) coefficients. Rank deficiency triggers regeneration, at most 5
/// times.
inline MatrixXd generate_design(int n, int p, DesignMode mode, std::uint64_t seed) {
  if (!(n > p && p >= 1))
    throw std::invalid_argument("generate_design: need n > p >= 1");
  for (int attempt = 0; attempt < 5; ++attempt) {
    auto eng = make_engine(seed, 0x5ea1u, attempt);
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd X(n, p);
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < n; ++i) X(i, j) = gauss(eng);
    if (mode == DesignMode::orthogonalized) {
      Eigen::HouseholderQR<MatrixXd> qr(X);
      MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, p);
      const double root_n = std::sqrt(static_cast<double>(n));
      for (int j = 0; j < p; ++j) Q.col(j) *= root_n / Q.col(j).norm();
      X = Q;
    }
    Eigen::LLT<MatrixXd> llt(X.transpose() * X);
    if (llt.info() == Eigen::Success) return X;
  }
  throw numerical_error("generate_design: rank-deficient after 5 attempts");
}

/// beta0 = s v with s chosen so beta0' X'X beta0 hits the target exactly.
/// Default direction is all-ones; only the quadratic form is constrained,
/// the direction is a reporting convention.
inline VectorXd calibrate_beta0(const MatrixXd& X, double target, VectorXd v = VectorXd()) {
  if (!(target > 0.0)) throw std::invalid_argument("calibrate_beta0: target must be > 0");
  const auto p = X.cols();
  if (v.size() == 0) v = VectorXd::Ones(p);
  if (v.size() != p) throw std::invalid_argument("calibrate_beta0: direction dimension mismatch");
  const VectorXd Xv = X * v;
  const double quad = Xv.squaredNorm(); // v' X'X v
  if (!(quad > 0.0))
    throw std::invalid_argument("calibrate_beta0: direction is annihilated by the design");
  return std::sqrt(target / quad) * v;
}

inline TruthSpec make_truth(const MatrixXd& X, double target, double sigma0,
                            VectorXd v = VectorXd()) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("make_truth: sigma0 must be > 0");
  TruthSpec t;
  t.beta0 = calibrate_beta0(X, target, std::move(v));
  t.sigma0 = sigma0;
  t.signal = (X * t.beta0).squaredNorm();
  return t;
}

/// Y = X beta0 + sigma0 z, deterministic given the seed. The noiseless
/// flag returns X beta0 exactly; do not emulate it with a tiny sigma0.
inline VectorXd simulate_response(const MatrixXd& X, const VectorXd& beta0, double sigma0,
                                  std::uint64_t seed, bool noiseless = false) {
  if (X.cols() != beta0.size())
    throw std::invalid_argument("simulate_response: beta0 dimension mismatch");
  VectorXd mean = X * beta0;
  if (noiseless) return mean;
  if (!(sigma0 > 0.0)) throw std::invalid_argument("simulate_response: sigma0 must be > 0");
  if (sigma0 < 1e-200)
    throw std::invalid_argument(
        "simulate_response: sigma0 too small; use the noiseless flag instead");
  auto eng = make_engine(seed, 0x0153u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < mean.size(); ++i) mean[i] += sigma0 * gauss(eng);
  return mean;
}

inline RegressionData fit(MatrixXd X, VectorXd Y) {
  RegressionData d;
  d.n = static_cast<int>(X.rows());
  d.p = static_cast<int>(X.cols());
  if (!(d.n > d.p && d.p >= 1)) throw std::invalid_argument("fit: need n > p >= 1");
  if (Y.size() != d.n) throw std::invalid_argument("fit: response length mismatch");
  d.gram = X.transpose() * X;
  d.gram_factor = spd_cholesky(d.gram, "X'X (is the design full column rank?)");
  d.log_det_gram = log_det_from_llt(d.gram_factor);
  const VectorXd xty = X.transpose() * Y;
  d.beta_hat = d.gram_factor.solve(xty);

  const double normal_eq_resid = (d.gram * d.beta_hat - xty).norm();
  if (normal_eq_resid > 1e-8 * std::max(1.0, xty.norm()))
    throw numerical_error("fit: normal equations solved poorly (ill-conditioned X'X)");

  d.q_proj = d.beta_hat.dot(d.gram * d.beta_hat);
  d.q_resid = (Y - X * d.beta_hat).squaredNorm();
  const double yty = Y.squaredNorm();
  if (std::abs(d.q_proj + d.q_resid - yty) > 1e-10 * std::max(1.0, yty)) {
    std::ostringstream msg;
    msg << "fit: orthogonal decomposition violated: q_proj + q_resid - Y'Y = "
        << d.q_proj + d.q_resid - yty;
    throw numerical_error(msg.str());
  }
  d.X = std::move(X);
  d.Y = std::move(Y);
  return d;
}

/// Membership in S_n = { l1 n <= Y'P_X Y / sigma^2 <= l2 n } (closed interval).
inline bool event_sn(const RegressionData& data, double sigma2, double l1, double l2) {
  if (!(l1 > 0.0 && l1 < l2)) throw std::invalid_argument("event_sn: need 0 < l1 < l2");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("event_sn: sigma2 must be > 0");
  const double stat = data.q_proj / sigma2;
  return stat >= l1 * data.n && stat <= l2 * data.n;
}

/// Membership in the residual band
/// (n-p) - sqrt(n-p) log(n-p) <= Y'(I-P_X)Y / sigma0^2 <= (n-p) + sqrt(n-p) log(n-p).
inline bool event_sn2(const RegressionData& data, double sigma0_sq) {
  if (!(sigma0_sq > 0.0)) throw std::invalid_argument("event_sn2: sigma0^2 must be > 0");
  const double df = data.n - data.p;
  const double half_width = std::sqrt(df) * std::log(df);
  const double stat = data.q_resid / sigma0_sq;
  return stat >= df - half_width && stat <= df + half_width;
}

} // namespace bvmlab
