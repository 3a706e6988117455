#pragma once

#include <array>

#include "regimecast/model.hpp"
#include "regimecast/rng.hpp"
#include "regimecast/statefilter.hpp"

namespace regimecast {

// Full generative parameterization for simulation studies.
struct TrueParams {
  std::array<RegimeParams, 2> regimes;
  CointegrationBasis basis;
  TransitionParams transition;
  Matrix initial_levels;  // (P+1) x m, newest row last
  bool include_intercept = true;
  int P = 1;

  int m() const { return static_cast<int>(regimes[0].a.rows()); }
  int r() const { return static_cast<int>(basis.xi.cols()); }

  // Companion-form spectral radius of the levels representation per regime.
  double spectral_radius(int regime) const;
  // Throws when either regime exceeds the explosiveness guard of 1.02.
  void validate() const;
};

struct SimulatedPath {
  Dataset data;
  std::vector<int> states;  // length T, aligned with data rows
};

// Forward-simulates levels and states. State draws and shock draws use two
// independent substreams of `rng`, so paths with identical regimes are
// invariant to the state randomness.
SimulatedPath simulate_msvecm(const TrueParams& params, int t_total, Rng rng);

// Canonical small fixture: m=3, r=1, P=1, intercept included. Exactly two
// loadings and the identification-equation intercept differ across regimes,
// and the recession covariance is scaled up sharply.
TrueParams default_test_params();

// Variant without an intercept: K=4 columns, k=12 coefficients, of which
// exactly the two loadings differ across regimes.
TrueParams sparse_difference_params();

}  // namespace regimecast
