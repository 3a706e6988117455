#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "regimecast/distributions.hpp"
#include "regimecast/model.hpp"

using namespace regimecast;

namespace {

Dataset random_dataset(int t_total, int m, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data;
  data.levels.resize(t_total, m);
  for (int t = 0; t < t_total; ++t)
    for (int j = 0; j < m; ++j)
      data.levels(t, j) = (t > 0 ? data.levels(t - 1, j) : 0.0) + 0.3 * sample_normal(rng);
  data.names.resize(m);
  for (int j = 0; j < m; ++j) data.names[j] = "y" + std::to_string(j + 1);
  Quarter d{1999, 1};
  for (int t = 0; t < t_total; ++t) {
    data.dates.push_back(d);
    d = d.next();
  }
  return data;
}

ModelConfig small_config(int p, int r, bool intercept) {
  ModelConfig c;
  c.P = p;
  c.r = r;
  c.include_intercept = intercept;
  c.ident_var = 0;
  c.variables.clear();
  c.transforms.clear();
  return c;
}

}  // namespace

TEST_CASE("design dimensions match the regression form") {
  const Dataset data = random_dataset(40, 6, 1);

  SUBCASE("no intercept: K = r + mP") {
    const auto d = build_design(data, CointegrationBasis::zero(6, 3), small_config(4, 3, false));
    CHECK(d.K() == 27);
    CHECK(d.t_eff() == 40 - 5);
  }
  SUBCASE("with intercept: K = 28, k = 168") {
    const ModelConfig c = small_config(4, 3, true);
    const auto d = build_design(data, CointegrationBasis::zero(6, 3), c);
    CHECK(d.K() == 28);
    CHECK(c.k(6) == 168);
    CHECK((d.x.col(27).array() == 1.0).all());
  }
  SUBCASE("too short a sample throws a dimension error") {
    const Dataset tiny = random_dataset(6, 6, 2);
    CHECK_THROWS_AS(build_design(tiny, CointegrationBasis::zero(6, 3), small_config(4, 3, true)),
                    std::invalid_argument);
  }
}

TEST_CASE("zero basis makes w the first r lagged levels") {
  const Dataset data = random_dataset(30, 4, 3);
  const auto d = build_design(data, CointegrationBasis::zero(4, 2), small_config(1, 2, false));
  for (Eigen::Index t = 0; t < d.t_eff(); ++t)
    for (int j = 0; j < 2; ++j) CHECK(d.w(t, j) == d.lag_levels(t, j));
}

TEST_CASE("w columns equal b'y reconstructed independently for any basis") {
  const Dataset data = random_dataset(35, 5, 4);
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    CointegrationBasis basis;
    basis.xi.resize(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) basis.xi(i, j) = sample_normal(rng);
    const auto d = build_design(data, basis, small_config(2, 2, true));
    for (Eigen::Index t = 0; t < d.t_eff(); ++t) {
      const Eigen::Index level_t = 2 + 1 + t;  // P + 1 + t
      Vector w_direct = Vector::Zero(2);
      for (int c = 0; c < 2; ++c) {
        w_direct(c) = data.levels(level_t - 1, c);
        for (int i = 0; i < 3; ++i) w_direct(c) += basis.xi(i, c) * data.levels(level_t - 1, 2 + i);
      }
      CHECK((d.w.row(t).transpose() - w_direct).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((d.x.block(t, 0, 1, 2).transpose() - w_direct).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("build_design is pure") {
  const Dataset data = random_dataset(30, 3, 6);
  CointegrationBasis basis;
  basis.xi = (Matrix(2, 1) << 0.4, -0.7).finished();
  const auto a = build_design(data, basis, small_config(1, 1, true));
  const auto b = build_design(data, basis, small_config(1, 1, true));
  CHECK(a.dy == b.dy);
  CHECK(a.x == b.x);
  CHECK(a.w == b.w);
}

TEST_CASE("regime log-likelihood") {
  SUBCASE("scalar standard normal at zero") {
    const auto params = RegimeParams::make(Matrix::Zero(1, 1), Matrix::Identity(1, 1));
    const double ll = log_likelihood_regime(Vector::Zero(1), Vector::Ones(1), params);
    CHECK(ll == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
  }

  SUBCASE("zero residual in two dimensions") {
    Matrix a(2, 3);
    a << 0.5, -0.2, 1.0, 0.1, 0.3, -0.4;
    const auto params = RegimeParams::make(a, Matrix::Identity(2, 2));
    const Vector x = (Vector(3) << 1.0, 2.0, -1.0).finished();
    const Vector dy = a * x;
    CHECK(log_likelihood_regime(dy, x, params) ==
          doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
  }

  SUBCASE("matches the naive formula with an explicit inverse") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
      const int m = 3, K = 4;
      Matrix a(m, K);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < K; ++j) a(i, j) = 0.3 * sample_normal(rng);
      Matrix g(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) = sample_normal(rng);
      const Matrix sigma = g * g.transpose() + 0.5 * Matrix::Identity(m, m);
      Vector x(K), dy(m);
      for (int j = 0; j < K; ++j) x(j) = sample_normal(rng);
      for (int i = 0; i < m; ++i) dy(i) = sample_normal(rng);

      const auto params = RegimeParams::make(a, sigma);
      const double ll = log_likelihood_regime(dy, x, params);

      const Vector resid = dy - a * x;
      const double naive = -0.5 * (m * std::log(2.0 * std::numbers::pi) +
                                   std::log(sigma.determinant()) +
                                   resid.dot(sigma.inverse() * resid));
      CHECK(ll == doctest::Approx(naive).epsilon(1e-10));
    }
  }

  SUBCASE("non-SPD covariance is a decomposition error") {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(RegimeParams::make(Matrix::Zero(2, 2), bad), std::runtime_error);
  }
}

TEST_CASE("sigma_inv agrees with a direct inverse") {
  Rng rng(8);
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = sample_normal(rng);
  const Matrix sigma = g * g.transpose() + Matrix::Identity(3, 3);
  const auto params = RegimeParams::make(Matrix::Zero(3, 1), sigma);
  CHECK((params.sigma_inv() - sigma.inverse()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("univariate AR residual variances") {
  SUBCASE("white noise") {
    Rng rng(9);
    Dataset data;
    const int t_total = 500;
    data.levels.resize(t_total, 1);
    for (int t = 0; t < t_total; ++t) data.levels(t, 0) = 2.0 * sample_normal(rng);
    data.names = {"wn"};
    Quarter d{1999, 1};
    for (int t = 0; t < t_total; ++t) {
      data.dates.push_back(d);
      d = d.next();
    }
    const Vector v = ols_residual_variances(data, 1);
    CHECK(v(0) == doctest::Approx(4.0).epsilon(0.10));
  }

  SUBCASE("AR(1) with phi=0.9") {
    Rng rng(10);
    Dataset data;
    const int t_total = 2000;
    data.levels.resize(t_total, 1);
    data.levels(0, 0) = 0.0;
    for (int t = 1; t < t_total; ++t)
      data.levels(t, 0) = 0.9 * data.levels(t - 1, 0) + sample_normal(rng);
    data.names = {"ar"};
    Quarter d{1999, 1};
    for (int t = 0; t < t_total; ++t) {
      data.dates.push_back(d);
      d = d.next();
    }
    const Vector v = ols_residual_variances(data, 1);
    CHECK(v(0) == doctest::Approx(1.0).epsilon(0.10));
  }

  SUBCASE("constant series reports zero with a warning") {
    Dataset data;
    data.levels = Matrix::Constant(50, 2, 3.0);
    Rng rng(11);
    for (int t = 0; t < 50; ++t) data.levels(t, 1) = sample_normal(rng);
    data.names = {"const", "noise"};
    Quarter d{1999, 1};
    for (int t = 0; t < 50; ++t) {
      data.dates.push_back(d);
      d = d.next();
    }
    WarningSink warnings;
    const Vector v = ols_residual_variances(data, 1, &warnings);
    CHECK(v(0) == 0.0);
    CHECK(v(1) > 0.0);
    CHECK(!warnings.empty());
  }
}
