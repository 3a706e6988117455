#pragma once

#include <array>
#include <functional>

#include "regimecast/config.hpp"
#include "regimecast/draws.hpp"
#include "regimecast/model.hpp"
#include "regimecast/statefilter.hpp"

namespace regimecast {

// Common-distribution layer: mean, per-coefficient scales (the diagonal of
// Omega) and the shared Wishart scale matrix.
struct HierarchyState {
  Vector a;         // k = K*m
  Vector tau;       // k, strictly positive
  Matrix s_common;  // m x m SPD
};

// Mutable state of one Gibbs chain.
struct ChainState {
  std::array<RegimeParams, 2> regimes;
  HierarchyState hierarchy;
  CointegrationBasis basis;
  TransitionParams transition;
  StatePath states;
};

// Prior moments derived from the data: Wishart shapes and the Q rate matrix
// built from univariate AR residual variances.
struct PriorSpec {
  double s_shape = 0.0;  // 2.5 + (m-1)/2
  double q_shape = 0.0;  // 0.5 + (m-1)/2
  Matrix q_rate;         // (100 s / sbar) diag(sigma_hat^2), sbar defaults to q
};
PriorSpec make_prior_spec(const Dataset& data, const ModelConfig& config,
                          WarningSink* warnings = nullptr);

// Gaussian full conditional exposed so the moments themselves are testable.
struct GaussianPosterior {
  Vector mean;
  Eigen::LLT<Matrix> precision_llt;

  Vector draw(Rng& rng) const;
  Matrix covariance() const;
};

GaussianPosterior regime_coefficient_posterior(const DesignData& design,
                                               const std::vector<int>& states, int regime,
                                               const Matrix& sigma, const HierarchyState& hierarchy,
                                               WarningSink* warnings = nullptr);

// Step 1: vec(A_j) from its k-dimensional Gaussian full conditional.
Matrix draw_regime_coefficients(const DesignData& design, const std::vector<int>& states,
                                int regime, const Matrix& sigma, const HierarchyState& hierarchy,
                                Rng& rng, WarningSink* warnings = nullptr);

// Step 2: free cointegration coefficients from their Gaussian posterior.
CointegrationBasis draw_cointegration(const DesignData& design,
                                      const std::array<RegimeParams, 2>& regimes,
                                      const std::vector<int>& states, const ModelConfig& config,
                                      Rng& rng);

// Step 3: common mean, N((a0+a1)/2, diag(tau)/2).
Vector draw_common_mean(const Vector& a0, const Vector& a1, const Vector& tau, Rng& rng);

// Step 4: per-coefficient scales from their generalized inverse Gaussian
// full conditional; the squared-distance parameter is floored at 1e-10.
Vector draw_tau(const Vector& a, const Vector& a0, const Vector& a1, double d0, double d1,
                Rng& rng);

// Step 5: regime covariance. The precision is Wishart with rate
// s_common + residual cross products / 2; returns Sigma_j itself.
Matrix draw_sigma(const DesignData& design, const std::vector<int>& states, int regime,
                  const Matrix& a_j, const Matrix& s_common, double s_shape, Rng& rng);

// Step 6: shared Wishart scale given the regime precisions.
Matrix draw_common_scale(const std::vector<Matrix>& sigma_invs, const Matrix& q_rate,
                         double q_shape, double s_shape, Rng& rng);

// Label identification: the regime-0 statistic (intercept or fitted mean of
// the identification equation) must not exceed the regime-1 statistic.
double identification_statistic(const RegimeParams& regime, const DesignData& design,
                                const std::vector<int>& states, int regime_idx,
                                const ModelConfig& config);
bool identification_holds(const ChainState& chain, const DesignData& design,
                          const ModelConfig& config);
// Swaps every regime-indexed block (coefficients, covariances, states,
// utilities, transition intercepts with their sign logic) when the ordering
// is violated. Returns true if a swap happened.
bool enforce_identification(ChainState& chain, const DesignData& design,
                            const ModelConfig& config);

// One full sweep through the conditional posteriors in their listed order;
// the design matrices are rebuilt right after the basis update. Returns
// true when the identification constraint holds on exit (always, under the
// permutation method).
bool gibbs_sweep(ChainState& chain, DesignData& design, const Dataset& data,
                 const ModelConfig& config, const PriorSpec& priors, Rng& rng,
                 WarningSink* warnings = nullptr);

ChainState initialize_chain(const Dataset& data, const DesignData& design,
                            const ModelConfig& config, const PriorSpec& priors);

using ProgressFn = std::function<void(std::int64_t sweep, std::int64_t total)>;

// Runs n_draws sweeps, discards the first n_burn, stores every thin-th
// draw. Throws with the offending block named if any draw goes non-finite.
PosteriorDraws run_chain(const Dataset& data, const ModelConfig& config, Rng rng,
                         const ProgressFn& progress = nullptr,
                         WarningSink* warnings = nullptr);

}  // namespace regimecast
