#pragma once

#include <string>
#include <vector>

#include "regimecast/config.hpp"
#include "regimecast/data.hpp"
#include "regimecast/types.hpp"

namespace regimecast {

// Retained MCMC output. One row per stored draw; coefficient vectors follow
// the column-major vec(A) layout, so entry i + m*c belongs to equation i,
// regressor column c.
struct PosteriorDraws {
  int m = 0;
  int K = 0;
  int r = 0;
  int t_eff = 0;
  int n_regimes = 2;
  bool include_intercept = true;

  std::vector<std::string> var_names;   // m
  std::vector<std::string> coef_names;  // K*m, "<eq>.<regressor>"
  std::vector<Quarter> state_dates;     // t_eff

  Matrix a0, a1;        // draws x (K*m)
  Matrix a_common;      // draws x (K*m)
  Matrix tau;           // draws x (K*m)
  Matrix xi;            // draws x ((m-r)*r)
  Matrix trans;         // draws x (2+r): c00, c01, gamma
  Matrix sigma0, sigma1, s_common;  // draws x (m*m), row-major flatten
  Eigen::MatrixXi states;           // draws x t_eff
  Vector loglik;                    // draws

  Eigen::Index n_retained() const { return a0.rows(); }

  // Reshape one stored row back into an m x K coefficient matrix.
  Matrix coef_matrix(const Matrix& block, Eigen::Index row) const;
  Matrix cov_matrix(const Matrix& block, Eigen::Index row) const;
};

std::vector<std::string> make_coef_names(const std::vector<std::string>& var_names,
                                         const ModelConfig& config);

// One CSV per block under <dir>, full round-trip precision.
void save_draws(const PosteriorDraws& draws, const std::string& dir);
PosteriorDraws load_draws(const std::string& dir);

}  // namespace regimecast
