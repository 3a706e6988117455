#pragma once

#include <vector>

#include "regimecast/rng.hpp"
#include "regimecast/types.hpp"

namespace regimecast {

// Probit transition parameters: regime-specific intercepts and loadings on
// the lagged cointegration errors. Phi(c0[i] + gamma' w_t) is the
// probability of moving into regime 1 from regime i.
struct TransitionParams {
  Eigen::Vector2d c0 = Eigen::Vector2d::Zero();
  Vector gamma;  // r loadings

  static TransitionParams zero(int r) {
    TransitionParams out;
    out.gamma = Vector::Zero(r);
    return out;
  }
};

// Latent regime path over the effective sample plus the probit utilities
// z*_t for t = 2..T_eff (no utility exists for the first period).
struct StatePath {
  std::vector<int> s;  // values in {0, 1}
  Vector zstar;        // length T_eff - 1
};

// One 2x2 stochastic matrix per period; rows indexed by the previous state.
// Entry t governs the transition from t-1 into t, so entry 0 is unused by
// the filter.
using TransitionMatrixSeq = std::vector<Eigen::Matrix2d>;

Eigen::Matrix2d transition_matrix(const TransitionParams& params, const Vector& w_t);
TransitionMatrixSeq transition_sequence(const TransitionParams& params, const Matrix& w);

struct FilterResult {
  Matrix filtered;  // T_eff x 2, rows on the simplex
  double loglik = 0.0;
};

// Forward recursion in log space with per-step normalization. `loglik`
// holds log observation densities per (t, regime).
FilterResult hamilton_filter(const Matrix& loglik, const TransitionMatrixSeq& pmats,
                             const Eigen::Vector2d& init);

// Backward simulation of the state path given filtered probabilities.
std::vector<int> ffbs_sample(const Matrix& filtered, const TransitionMatrixSeq& pmats, Rng& rng);

// Albert-Chib step: refresh the latent utilities under the current
// parameters, then draw (c_00, c_01, gamma) from the Gaussian posterior
// with prior N(0, v_gamma I). Returns the new parameters and utilities.
// With intercept_only the loadings are pinned at zero (fixed transition
// probabilities) and only the two intercepts are updated.
struct TransitionDraw {
  TransitionParams params;
  Vector zstar;
};
TransitionDraw draw_transition_params(const std::vector<int>& states, const Matrix& w,
                                      const TransitionParams& current, double v_gamma, Rng& rng,
                                      bool intercept_only = false);

}  // namespace regimecast
