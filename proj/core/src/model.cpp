#include "regimecast/model.hpp"

#include <cmath>
#include <numbers>

namespace regimecast {

RegimeParams RegimeParams::make(Matrix a, Matrix sigma) {
  RegimeParams out;
  out.a = std::move(a);
  out.sigma = std::move(sigma);
  Eigen::LLT<Matrix> llt(out.sigma);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("RegimeParams: covariance is not positive definite");
  out.h = llt.matrixL();
  return out;
}

Matrix RegimeParams::sigma_inv() const {
  const Eigen::Index m = sigma.rows();
  Matrix inv = h.triangularView<Eigen::Lower>().solve(Matrix::Identity(m, m));
  inv = h.transpose().triangularView<Eigen::Upper>().solve(inv.eval());
  return 0.5 * (inv + inv.transpose());
}

DesignData build_design(const Dataset& data, const CointegrationBasis& basis,
                        const ModelConfig& config) {
  data.validate();
  const Eigen::Index t_total = data.rows();
  const Eigen::Index m = data.cols();
  const int p = config.P;
  const int r = config.r;
  config.validate(static_cast<int>(m));
  require(basis.xi.rows() == m - r && basis.xi.cols() == r,
          "build_design: basis dimensions do not match (m, r)");
  require(t_total > p + 2, "build_design: sample too short for lag order " + std::to_string(p));

  const Eigen::Index t_eff = t_total - p - 1;
  const Eigen::Index big_k = config.K(static_cast<int>(m));

  DesignData d;
  d.dy.resize(t_eff, m);
  d.x.resize(t_eff, big_k);
  d.w.resize(t_eff, r);
  d.lag_levels.resize(t_eff, m);

  const Matrix b = basis.b();
  for (Eigen::Index i = 0; i < t_eff; ++i) {
    const Eigen::Index t = p + 1 + i;  // 0-based level index, t = P+2 in 1-based terms
    d.dy.row(i) = data.levels.row(t) - data.levels.row(t - 1);
    d.lag_levels.row(i) = data.levels.row(t - 1);
    d.w.row(i) = data.levels.row(t - 1) * b;
    d.x.block(i, 0, 1, r) = d.w.row(i);
    for (int lag = 1; lag <= p; ++lag)
      d.x.block(i, r + (lag - 1) * m, 1, m) =
          data.levels.row(t - lag) - data.levels.row(t - lag - 1);
    if (config.include_intercept) d.x(i, big_k - 1) = 1.0;
  }
  return d;
}

double log_likelihood_regime(const Vector& dy_t, const Vector& x_t, const RegimeParams& params) {
  const Eigen::Index m = dy_t.size();
  require(params.a.rows() == m && params.a.cols() == x_t.size(),
          "log_likelihood_regime: dimension mismatch");
  const Vector resid = dy_t - params.a * x_t;
  const Vector u = params.h.triangularView<Eigen::Lower>().solve(resid);
  const double logdet = 2.0 * params.h.diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(m) * std::log(2.0 * std::numbers::pi) + logdet +
                 u.squaredNorm());
}

Vector ols_residual_variances(const Dataset& data, int P, WarningSink* warnings) {
  data.validate();
  require(P >= 1, "ols_residual_variances: lag order must be at least 1");
  const Eigen::Index t_total = data.rows();
  const Eigen::Index m = data.cols();
  require(t_total > P + 2, "ols_residual_variances: sample too short");

  const Eigen::Index n = t_total - P;
  Vector out(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Vector col = data.levels.col(j);
    const double spread = col.maxCoeff() - col.minCoeff();
    if (spread == 0.0) {
      warn(warnings, "ols_residual_variances: column '" + data.names[j] +
                         "' is constant, reporting zero variance");
      out(j) = 0.0;
      continue;
    }
    Matrix x(n, P + 1);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index t = P + i;
      y(i) = col(t);
      x(i, 0) = 1.0;
      for (int lag = 1; lag <= P; ++lag) x(i, lag) = col(t - lag);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < x.cols())
      throw std::runtime_error("ols_residual_variances: rank-deficient regressors for column '" +
                               data.names[j] + "'");
    const Vector beta = qr.solve(y);
    const double rss = (y - x * beta).squaredNorm();
    out(j) = rss / static_cast<double>(n - (P + 1));
  }
  return out;
}

}  // namespace regimecast
