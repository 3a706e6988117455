#include "regimecast/dgp.hpp"

#include <cmath>

#include "regimecast/distributions.hpp"

namespace regimecast {

double TrueParams::spectral_radius(int regime) const {
  const int mm = m();
  const int rr = r();
  const Matrix b = basis.b();
  const auto& a = regimes[regime].a;
  const Matrix lambda = a.leftCols(rr);
  std::vector<Matrix> blags(P);
  for (int p = 0; p < P; ++p) blags[p] = a.block(0, rr + p * mm, mm, mm);

  // Levels VAR(P+1) companion form.
  const int order = P + 1;
  Matrix companion = Matrix::Zero(mm * order, mm * order);
  companion.block(0, 0, mm, mm) = Matrix::Identity(mm, mm) + lambda * b.transpose() + blags[0];
  for (int p = 2; p <= P; ++p)
    companion.block(0, (p - 1) * mm, mm, mm) = blags[p - 1] - blags[p - 2];
  companion.block(0, P * mm, mm, mm) = -blags[P - 1];
  companion.block(mm, 0, mm * P, mm * P) = Matrix::Identity(mm * P, mm * P);

  return companion.eigenvalues().cwiseAbs().maxCoeff();
}

void TrueParams::validate() const {
  require(P >= 1, "TrueParams: lag order must be at least 1");
  require(initial_levels.rows() == P + 1 && initial_levels.cols() == m(),
          "TrueParams: initial levels must be (P+1) x m");
  require(regimes[0].a.rows() == regimes[1].a.rows() &&
              regimes[0].a.cols() == regimes[1].a.cols(),
          "TrueParams: regime dimensions disagree");
  for (int j = 0; j < 2; ++j) {
    const double rho = spectral_radius(j);
    require(rho <= 1.02, "TrueParams: regime " + std::to_string(j) +
                             " violates the explosiveness guard, spectral radius " +
                             std::to_string(rho));
  }
}

SimulatedPath simulate_msvecm(const TrueParams& params, int t_total, Rng rng) {
  params.validate();
  const int m = params.m();
  const int r = params.r();
  const int p = params.P;
  require(t_total > p + 2, "simulate_msvecm: horizon too short");

  // Separate substreams so identical-regime paths do not depend on the
  // state randomness.
  Rng state_rng = rng.stream(1);
  Rng shock_rng = rng.stream(2);

  const Matrix b = params.basis.b();
  const Eigen::Index big_k = params.regimes[0].a.cols();

  SimulatedPath out;
  out.data.levels.resize(t_total, m);
  out.data.levels.topRows(p + 1) = params.initial_levels;
  out.states.assign(t_total, 0);

  int s_prev = 0;  // starts in the expansion state
  for (int t = p + 1; t < t_total; ++t) {
    const Vector y_prev = out.data.levels.row(t - 1);
    const Vector w = b.transpose() * y_prev;

    const Eigen::Matrix2d ptrans = transition_matrix(params.transition, w);
    const int s = state_rng.uniform() < ptrans(s_prev, 1) ? 1 : 0;

    Vector x(big_k);
    x.head(r) = w;
    for (int lag = 1; lag <= p; ++lag)
      x.segment(r + (lag - 1) * m, m) =
          out.data.levels.row(t - lag) - out.data.levels.row(t - lag - 1);
    if (params.include_intercept) x(big_k - 1) = 1.0;

    Vector eta(m);
    for (int i = 0; i < m; ++i) eta(i) = sample_normal(shock_rng);
    const Vector dy = params.regimes[s].a * x + params.regimes[s].h * eta;
    out.data.levels.row(t) = y_prev.transpose() + dy.transpose();
    if (out.data.levels.row(t).cwiseAbs().maxCoeff() > 1e10)
      throw std::runtime_error("simulate_msvecm: explosive path at t=" + std::to_string(t + 1));

    out.states[t] = s;
    s_prev = s;
  }

  out.data.names.resize(m);
  for (int j = 0; j < m; ++j) out.data.names[j] = "y" + std::to_string(j + 1);
  Quarter d{1999, 1};
  out.data.dates.resize(t_total);
  for (int t = 0; t < t_total; ++t) {
    out.data.dates[t] = d;
    d = d.next();
  }
  return out;
}

namespace {

Matrix fixture_lag_block() {
  Matrix b1(3, 3);
  b1 << 0.30, 0.05, 0.00,  //
      0.00, 0.25, 0.05,    //
      0.05, 0.00, 0.20;
  return b1;
}

Matrix fixture_sigma0() {
  Matrix corr(3, 3);
  corr << 1.0, 0.3, 0.1,  //
      0.3, 1.0, 0.2,      //
      0.1, 0.2, 1.0;
  const Vector sd0 = (Vector(3) << 0.10, 0.12, 0.10).finished();
  return sd0.asDiagonal() * corr * sd0.asDiagonal();
}

}  // namespace

TrueParams default_test_params() {
  // m=3, r=1, P=1 with intercept: K=5, k=15. Two loadings and the y1
  // intercept move across regimes; the recession covariance is 9x larger,
  // and entering recessions is strongly driven by the cointegration error.
  const int m = 3, r = 1, p = 1, big_k = 5;

  Matrix a0 = Matrix::Zero(m, big_k);
  Matrix a1 = Matrix::Zero(m, big_k);
  a0.col(0) << -0.10, 0.10, 0.02;  // expansion loadings
  a1.col(0) << -0.02, 0.25, 0.02;  // first two entries differ across regimes
  a0.block(0, r, m, m) = fixture_lag_block();
  a1.block(0, r, m, m) = fixture_lag_block();
  // Intercept shift orthogonal to b: regimes drift apart without moving the
  // equilibrium of the cointegration error.
  a0.col(big_k - 1) << -0.02, 0.02, 0.01;
  a1.col(big_k - 1) << 0.28, 0.54, -0.15;

  const Matrix sigma0 = fixture_sigma0();

  TrueParams out;
  out.regimes[0] = RegimeParams::make(a0, sigma0);
  out.regimes[1] = RegimeParams::make(a1, 9.0 * sigma0);
  out.basis.xi = (Matrix(m - r, r) << -0.5, 0.25).finished();
  out.transition.c0 << -0.1, 2.0;
  out.transition.gamma = (Vector(r) << 6.0).finished();
  out.initial_levels = Matrix::Zero(p + 1, m);
  out.include_intercept = true;
  out.P = p;
  return out;
}

TrueParams sparse_difference_params() {
  // No intercept: K=4, k=12. The two loading differences are orthogonal to
  // b, so both regimes share the same error-correction speed, and they are
  // large enough to be decisively detected at T=300.
  const int m = 3, r = 1, p = 1, big_k = 4;

  Matrix a0 = Matrix::Zero(m, big_k);
  Matrix a1 = Matrix::Zero(m, big_k);
  a0.col(0) << -0.35, 0.55, 0.05;
  a1.col(0) << -0.75, -0.25, 0.05;  // differences (0.4, 0.8, 0)
  a0.block(0, r, m, m) = fixture_lag_block();
  a1.block(0, r, m, m) = fixture_lag_block();

  const Matrix sigma0 = fixture_sigma0();

  TrueParams out;
  out.regimes[0] = RegimeParams::make(a0, sigma0);
  out.regimes[1] = RegimeParams::make(a1, 4.0 * sigma0);
  out.basis.xi = (Matrix(m - r, r) << -0.5, 0.25).finished();
  out.transition.c0 << -1.5, 0.8;
  out.transition.gamma = (Vector(r) << 1.0).finished();
  out.initial_levels = Matrix::Zero(p + 1, m);
  out.include_intercept = false;
  out.P = p;
  return out;
}

}  // namespace regimecast
