#include "regimecast/statefilter.hpp"

#include <cmath>

#include "regimecast/distributions.hpp"

namespace regimecast {

Eigen::Matrix2d transition_matrix(const TransitionParams& params, const Vector& w_t) {
  require(params.gamma.size() == w_t.size(), "transition_matrix: loading/regressor mismatch");
  Eigen::Matrix2d p;
  for (int i = 0; i < 2; ++i) {
    const double into_recession = norm_cdf(params.c0(i) + params.gamma.dot(w_t));
    p(i, 1) = into_recession;
    p(i, 0) = 1.0 - into_recession;  // rows sum to one exactly
  }
  return p;
}

TransitionMatrixSeq transition_sequence(const TransitionParams& params, const Matrix& w) {
  TransitionMatrixSeq out(w.rows());
  for (Eigen::Index t = 0; t < w.rows(); ++t)
    out[t] = transition_matrix(params, w.row(t).transpose());
  return out;
}

FilterResult hamilton_filter(const Matrix& loglik, const TransitionMatrixSeq& pmats,
                             const Eigen::Vector2d& init) {
  const Eigen::Index t_eff = loglik.rows();
  require(loglik.cols() == 2, "hamilton_filter: likelihood matrix must have two columns");
  require(static_cast<Eigen::Index>(pmats.size()) == t_eff,
          "hamilton_filter: transition sequence length mismatch");
  require(init(0) >= 0.0 && init(1) >= 0.0 && std::abs(init.sum() - 1.0) < 1e-12,
          "hamilton_filter: initial distribution must lie on the simplex");

  FilterResult out;
  out.filtered.resize(t_eff, 2);
  Eigen::Vector2d prev;
  for (Eigen::Index t = 0; t < t_eff; ++t) {
    Eigen::Vector2d pred = (t == 0) ? init : Eigen::Vector2d(pmats[t].transpose() * prev);
    const double shift = loglik.row(t).maxCoeff();
    Eigen::Vector2d joint;
    for (int j = 0; j < 2; ++j) joint(j) = pred(j) * std::exp(loglik(t, j) - shift);
    const double norm = joint.sum();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw std::runtime_error("hamilton_filter: numerical underflow at t=" + std::to_string(t));
    prev = joint / norm;
    out.filtered.row(t) = prev.transpose();
    out.loglik += std::log(norm) + shift;
  }
  return out;
}

std::vector<int> ffbs_sample(const Matrix& filtered, const TransitionMatrixSeq& pmats, Rng& rng) {
  const Eigen::Index t_eff = filtered.rows();
  require(t_eff > 0 && filtered.cols() == 2, "ffbs_sample: bad filtered matrix");
  require(static_cast<Eigen::Index>(pmats.size()) == t_eff,
          "ffbs_sample: transition sequence length mismatch");

  std::vector<int> s(t_eff);
  s[t_eff - 1] = rng.uniform() < filtered(t_eff - 1, 1) ? 1 : 0;
  for (Eigen::Index t = t_eff - 2; t >= 0; --t) {
    const int next = s[t + 1];
    const double w0 = pmats[t + 1](0, next) * filtered(t, 0);
    const double w1 = pmats[t + 1](1, next) * filtered(t, 1);
    const double total = w0 + w1;
    // Both branches impossible can only happen with degenerate inputs; fall
    // back to the filtered marginal.
    const double p1 = total > 0.0 ? w1 / total : filtered(t, 1);
    s[t] = rng.uniform() < p1 ? 1 : 0;
  }
  return s;
}

TransitionDraw draw_transition_params(const std::vector<int>& states, const Matrix& w,
                                      const TransitionParams& current, double v_gamma, Rng& rng,
                                      bool intercept_only) {
  const Eigen::Index t_eff = static_cast<Eigen::Index>(states.size());
  require(w.rows() == t_eff, "draw_transition_params: state/regressor length mismatch");
  require(v_gamma > 0.0, "draw_transition_params: prior variance must be positive");
  require(t_eff >= 2, "draw_transition_params: need at least two periods");
  const Eigen::Index r = intercept_only ? 0 : w.cols();
  const Eigen::Index dim = 2 + r;

  // Latent utilities for t = 2..T_eff given the current parameters.
  Vector zstar(t_eff - 1);
  Matrix design(t_eff - 1, dim);
  for (Eigen::Index t = 1; t < t_eff; ++t) {
    const int prev = states[t - 1];
    const double mean = current.c0(prev) + current.gamma.dot(w.row(t).transpose());
    const TruncationSide side =
        states[t] == 1 ? TruncationSide::positive : TruncationSide::nonpositive;
    zstar(t - 1) = sample_truncated_normal(mean, side, rng);
    design(t - 1, 0) = prev == 0 ? 1.0 : 0.0;
    design(t - 1, 1) = prev == 1 ? 1.0 : 0.0;
    if (r > 0) design.block(t - 1, 2, 1, r) = w.row(t);
  }

  Matrix precision = design.transpose() * design;
  precision.diagonal().array() += 1.0 / v_gamma;
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("draw_transition_params: singular posterior precision");
  const Vector mean = llt.solve(design.transpose() * zstar);

  Vector z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z(i) = sample_normal(rng);
  const Matrix l = llt.matrixL();
  const Vector draw = mean + l.transpose().triangularView<Eigen::Upper>().solve(z);

  TransitionDraw out;
  out.params.c0 = draw.head<2>();
  out.params.gamma = intercept_only ? Vector(Vector::Zero(w.cols())) : Vector(draw.tail(r));
  out.zstar = std::move(zstar);
  return out;
}

}  // namespace regimecast
