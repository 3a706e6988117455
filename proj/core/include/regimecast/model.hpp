#pragma once

#include "regimecast/config.hpp"
#include "regimecast/data.hpp"
#include "regimecast/types.hpp"

namespace regimecast {

// Free coefficients Xi of the linear normalization b = (I_r, Xi')'. The
// implied b is m x r with full column rank by construction.
struct CointegrationBasis {
  Matrix xi;  // (m - r) x r

  Matrix b() const {
    const Eigen::Index r = xi.cols();
    Matrix out(r + xi.rows(), r);
    out.topRows(r) = Matrix::Identity(r, r);
    out.bottomRows(xi.rows()) = xi;
    return out;
  }
  static CointegrationBasis zero(int m, int r) {
    return CointegrationBasis{Matrix::Zero(m - r, r)};
  }
};

// Regression form of the error correction system over the effective sample
// t = P+2 ... T (P differences consumed plus one level lag for w).
struct DesignData {
  Matrix dy;          // T_eff x m, first differences
  Matrix x;           // T_eff x K, rows (w_t', dy_{t-1}', ..., dy_{t-P}' [, 1])
  Matrix w;           // T_eff x r, cointegration errors b' y_{t-1}
  Matrix lag_levels;  // T_eff x m, y_{t-1} (kept for the basis update)

  Eigen::Index t_eff() const { return dy.rows(); }
  Eigen::Index m() const { return dy.cols(); }
  Eigen::Index K() const { return x.cols(); }
};

// Per-regime coefficient matrix, covariance and its lower Cholesky factor.
// Column order of a: loadings on the r cointegration errors, then the P
// lag blocks, then the intercept when present.
struct RegimeParams {
  Matrix a;      // m x K
  Matrix sigma;  // m x m SPD
  Matrix h;      // lower Cholesky factor of sigma

  static RegimeParams make(Matrix a, Matrix sigma);
  Matrix sigma_inv() const;
};

DesignData build_design(const Dataset& data, const CointegrationBasis& basis,
                        const ModelConfig& config);

// log N(dy_t; A x_t, Sigma) through the stored Cholesky factor.
double log_likelihood_regime(const Vector& dy_t, const Vector& x_t, const RegimeParams& params);

// Residual variance of a univariate AR(P) with intercept, fit by least
// squares on each column of the levels. A constant column yields variance
// zero plus a warning instead of an error.
Vector ols_residual_variances(const Dataset& data, int P, WarningSink* warnings = nullptr);

}  // namespace regimecast
