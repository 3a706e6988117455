#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "regimecast/dgp.hpp"
#include "regimecast/distributions.hpp"
#include "regimecast/io.hpp"

using namespace regimecast;

TEST_CASE("fixture dimensions and the explosiveness guard") {
  const TrueParams params = default_test_params();
  CHECK(params.m() == 3);
  CHECK(params.r() == 1);
  CHECK(params.P == 1);
  CHECK(params.regimes[0].a.cols() == 5);
  CHECK_NOTHROW(params.validate());
  CHECK(params.spectral_radius(0) <= 1.02);
  CHECK(params.spectral_radius(1) <= 1.02);

  const TrueParams sparse = sparse_difference_params();
  CHECK(sparse.regimes[0].a.cols() == 4);
  CHECK(sparse.regimes[0].a.size() == 12);
  // exactly two coefficients differ
  int n_diff = 0;
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 4; ++c)
      if (sparse.regimes[0].a(i, c) != sparse.regimes[1].a(i, c)) ++n_diff;
  CHECK(n_diff == 2);
  CHECK_NOTHROW(sparse.validate());
}

TEST_CASE("noiseless simulation matches a hand-rolled recursion") {
  TrueParams params = default_test_params();
  // Shut the shocks off and pin the chain in the expansion state.
  for (int j = 0; j < 2; ++j) params.regimes[j].h.setZero();
  params.transition.c0 << -30.0, -30.0;
  params.transition.gamma.setZero();

  const int t_total = 40;
  const SimulatedPath sim = simulate_msvecm(params, t_total, Rng(1));
  for (int t = 0; t < t_total; ++t) CHECK(sim.states[t] == 0);

  // Hand recursion with the same conventions.
  Matrix levels = Matrix::Zero(t_total, 3);
  const Matrix b = params.basis.b();
  for (int t = params.P + 1; t < t_total; ++t) {
    const Vector y_prev = levels.row(t - 1);
    Vector x(5);
    x(0) = b.col(0).dot(y_prev);
    x.segment(1, 3) = levels.row(t - 1) - levels.row(t - 2);
    x(4) = 1.0;
    levels.row(t) = y_prev.transpose() + (params.regimes[0].a * x).transpose();
  }
  CHECK((sim.data.levels - levels).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("identical regimes make the path invariant to the state process") {
  TrueParams params = default_test_params();
  params.regimes[1] = params.regimes[0];

  TrueParams other = params;
  other.transition.c0 << 2.0, -2.0;  // very different state dynamics

  const SimulatedPath a = simulate_msvecm(params, 200, Rng(2));
  const SimulatedPath b = simulate_msvecm(other, 200, Rng(2));
  CHECK(a.data.levels == b.data.levels);  // shocks drawn on their own stream
  CHECK(a.states != b.states);
}

TEST_CASE("simulated transition frequencies converge to the probit law") {
  const TrueParams params = default_test_params();
  const int t_total = 100000;
  const SimulatedPath sim = simulate_msvecm(params, t_total, Rng(3));

  const Matrix b = params.basis.b();
  // Bin w_t and compare empirical switch frequencies with Phi(c0 + g w).
  struct Bin {
    double num = 0.0, den = 0.0, wsum = 0.0;
  };
  std::map<int, std::array<Bin, 2>> bins;
  for (int t = params.P + 2; t < t_total; ++t) {
    const double w = b.col(0).dot(sim.data.levels.row(t - 1));
    const int key = static_cast<int>(std::floor(w / 0.25));
    const int prev = sim.states[t - 1];
    auto& bin = bins[key][prev];
    bin.den += 1.0;
    bin.wsum += w;
    bin.num += sim.states[t] == 1 ? 1.0 : 0.0;
  }
  int checked = 0;
  for (const auto& [key, pair] : bins) {
    for (int prev = 0; prev < 2; ++prev) {
      const auto& bin = pair[prev];
      if (bin.den < 4000.0) continue;  // skip sparse bins
      const double w_mean = bin.wsum / bin.den;
      const double target =
          norm_cdf(params.transition.c0(prev) + params.transition.gamma(0) * w_mean);
      CHECK(std::abs(bin.num / bin.den - target) < 0.02);
      ++checked;
    }
  }
  CHECK(checked >= 3);
}

TEST_CASE("overflow guard names the period") {
  TrueParams params = default_test_params();
  // Destabilize the long-run adjustment so levels explode.
  params.regimes[0].a.col(0) << 5.0, 5.0, 5.0;
  params.regimes[1].a.col(0) << 5.0, 5.0, 5.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  CHECK_THROWS_AS(simulate_msvecm(params, 300, Rng(4)), std::invalid_argument);
}

TEST_CASE("golden fixture file regenerates byte-identically under seed 42") {
  const SimulatedPath sim = simulate_msvecm(default_test_params(), 300, Rng(42));
  const std::string tmp = "/tmp/regimecast_golden_check.csv";
  save_dataset(sim.data, tmp);

  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string golden = slurp(std::string(REGIMECAST_TEST_DATA_DIR) + "/golden_sim_seed42.csv");
  CHECK(slurp(tmp) == golden);
}
