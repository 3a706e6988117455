#include "regimecast/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "regimecast/distributions.hpp"

namespace regimecast {

namespace {

constexpr double kTauFloor = 1e-12;
constexpr double kChiFloor = 1e-10;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::Map<const Vector> vec_of(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace

PriorSpec make_prior_spec(const Dataset& data, const ModelConfig& config, WarningSink* warnings) {
  const int m = static_cast<int>(data.cols());
  config.validate(m);
  PriorSpec out;
  out.s_shape = 2.5 + 0.5 * (m - 1);
  out.q_shape = 0.5 + 0.5 * (m - 1);
  const double sbar = config.q_sbar > 0.0 ? config.q_sbar : out.q_shape;
  const Vector sig2 = ols_residual_variances(data, config.P, warnings);
  require(sig2.minCoeff() > 0.0,
          "make_prior_spec: degenerate series, zero AR residual variance");
  out.q_rate = (100.0 * out.s_shape / sbar) * sig2.asDiagonal();
  return out;
}

Vector GaussianPosterior::draw(Rng& rng) const {
  const Eigen::Index n = mean.size();
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = sample_normal(rng);
  const Matrix l = precision_llt.matrixL();
  return mean + l.transpose().triangularView<Eigen::Upper>().solve(z);
}

Matrix GaussianPosterior::covariance() const {
  const Eigen::Index n = mean.size();
  Matrix cov = precision_llt.solve(Matrix::Identity(n, n));
  return 0.5 * (cov + cov.transpose());
}

GaussianPosterior regime_coefficient_posterior(const DesignData& design,
                                               const std::vector<int>& states, int regime,
                                               const Matrix& sigma,
                                               const HierarchyState& hierarchy,
                                               WarningSink* warnings) {
  const Eigen::Index m = design.m();
  const Eigen::Index big_k = design.K();
  const Eigen::Index k = m * big_k;
  require(static_cast<Eigen::Index>(states.size()) == design.t_eff(),
          "regime_coefficient_posterior: state path length mismatch");
  require(hierarchy.a.size() == k && hierarchy.tau.size() == k,
          "regime_coefficient_posterior: hierarchy dimension mismatch");

  Eigen::LLT<Matrix> sig_llt(sigma);
  if (sig_llt.info() != Eigen::Success)
    throw std::runtime_error("regime_coefficient_posterior: sigma not positive definite");
  Matrix sigma_inv = sig_llt.solve(Matrix::Identity(m, m));
  sigma_inv = 0.5 * (sigma_inv + sigma_inv.transpose()).eval();

  Matrix sxx = Matrix::Zero(big_k, big_k);
  Matrix cross = Matrix::Zero(m, big_k);  // sum of dy_t x_t'
  for (Eigen::Index t = 0; t < design.t_eff(); ++t) {
    if (states[t] != regime) continue;
    sxx.noalias() += design.x.row(t).transpose() * design.x.row(t);
    cross.noalias() += design.dy.row(t).transpose() * design.x.row(t);
  }

  Vector tau = hierarchy.tau;
  for (int attempt = 0;; ++attempt) {
    Matrix precision = kron(sxx, sigma_inv);
    precision.diagonal() += tau.cwiseInverse();
    const Matrix moment = sigma_inv * cross;  // vec gives sum x_t (x) sigma_inv dy_t
    Vector rhs = vec_of(moment);
    rhs += hierarchy.a.cwiseQuotient(tau);

    GaussianPosterior post;
    if (precision.allFinite()) {
      post.precision_llt.compute(precision);
      if (post.precision_llt.info() == Eigen::Success) {
        post.mean = post.precision_llt.solve(rhs);
        return post;
      }
    }
    if (attempt >= 1)
      throw std::runtime_error("regime_coefficient_posterior: precision not positive definite");
    warn(warnings, "regime_coefficient_posterior: flooring tau at 1e-12 to restore SPD precision");
    tau = tau.cwiseMax(kTauFloor);
  }
}

Matrix draw_regime_coefficients(const DesignData& design, const std::vector<int>& states,
                                int regime, const Matrix& sigma, const HierarchyState& hierarchy,
                                Rng& rng, WarningSink* warnings) {
  const GaussianPosterior post =
      regime_coefficient_posterior(design, states, regime, sigma, hierarchy, warnings);
  const Vector draw = post.draw(rng);
  return Eigen::Map<const Matrix>(draw.data(), design.m(), design.K());
}

CointegrationBasis draw_cointegration(const DesignData& design,
                                      const std::array<RegimeParams, 2>& regimes,
                                      const std::vector<int>& states, const ModelConfig& config,
                                      Rng& rng) {
  const Eigen::Index m = design.m();
  const int r = config.r;
  const Eigen::Index free = m - r;
  const Eigen::Index v = free * r;

  std::array<Matrix, 2> sigma_inv = {regimes[0].sigma_inv(), regimes[1].sigma_inv()};

  Matrix precision = Matrix::Identity(v, v) / config.zeta;
  Vector rhs = Vector::Zero(v);
  Matrix z_t(m, v);
  for (Eigen::Index t = 0; t < design.t_eff(); ++t) {
    const int j = states[t];
    const auto lambda = regimes[j].a.leftCols(r);  // m x r loadings
    const Vector y2 = design.lag_levels.row(t).tail(free);
    // Regressor for vec(Xi): column i + free*c carries y2_i * lambda_col_c.
    for (int c = 0; c < r; ++c)
      for (Eigen::Index i = 0; i < free; ++i) z_t.col(i + free * c) = y2(i) * lambda.col(c);
    // Residual with all known terms removed, including lambda * y1_{t-1}.
    const Vector resid = design.dy.row(t).transpose() -
                         regimes[j].a * design.x.row(t).transpose() +
                         lambda * design.w.row(t).transpose() -
                         lambda * design.lag_levels.row(t).head(r).transpose();
    const Matrix sz = sigma_inv[j] * z_t;
    precision.noalias() += z_t.transpose() * sz;
    rhs.noalias() += sz.transpose() * resid;
  }

  GaussianPosterior post;
  post.precision_llt.compute(precision);
  if (post.precision_llt.info() != Eigen::Success)
    throw std::runtime_error("draw_cointegration: singular posterior precision");
  post.mean = post.precision_llt.solve(rhs);
  const Vector draw = post.draw(rng);
  return CointegrationBasis{Eigen::Map<const Matrix>(draw.data(), free, r)};
}

Vector draw_common_mean(const Vector& a0, const Vector& a1, const Vector& tau, Rng& rng) {
  require(a0.size() == a1.size() && a0.size() == tau.size(),
          "draw_common_mean: dimension mismatch");
  require(tau.minCoeff() > 0.0, "draw_common_mean: tau must be strictly positive");
  Vector out(a0.size());
  for (Eigen::Index j = 0; j < out.size(); ++j)
    out(j) = 0.5 * (a0(j) + a1(j)) + std::sqrt(0.5 * tau(j)) * sample_normal(rng);
  return out;
}

Vector draw_tau(const Vector& a, const Vector& a0, const Vector& a1, double d0, double d1,
                Rng& rng) {
  require(d0 > 0.0 && d1 > 0.0, "draw_tau: d0 and d1 must be positive");
  require(a.size() == a0.size() && a.size() == a1.size(), "draw_tau: dimension mismatch");
  Vector out(a.size());
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double d0j = a0(j) - a(j);
    const double d1j = a1(j) - a(j);
    const double chi = d0j * d0j + d1j * d1j;
    if (chi == 0.0) {
      // An exactly homogeneous pair carries no likelihood information and
      // the conditional is improper for d0 < 1: refresh from the prior.
      out(j) = sample_gig(GigParams{d0, 0.0, 2.0 * d1}, rng);
    } else {
      out(j) = sample_gig(GigParams{d0 - 1.0, std::max(chi, kChiFloor), 2.0 * d1}, rng);
    }
  }
  return out;
}

Matrix draw_sigma(const DesignData& design, const std::vector<int>& states, int regime,
                  const Matrix& a_j, const Matrix& s_common, double s_shape, Rng& rng) {
  const Eigen::Index m = design.m();
  Matrix rate = s_common;
  double n_j = 0.0;
  for (Eigen::Index t = 0; t < design.t_eff(); ++t) {
    if (states[t] != regime) continue;
    const Vector resid = design.dy.row(t).transpose() - a_j * design.x.row(t).transpose();
    rate.noalias() += 0.5 * resid * resid.transpose();
    n_j += 1.0;
  }
  const Matrix prec = sample_wishart(WishartParams{s_shape + 0.5 * n_j, rate}, rng);
  Eigen::LLT<Matrix> llt(prec);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("draw_sigma: sampled precision not positive definite");
  Matrix sigma = llt.solve(Matrix::Identity(m, m));
  return 0.5 * (sigma + sigma.transpose());
}

Matrix draw_common_scale(const std::vector<Matrix>& sigma_invs, const Matrix& q_rate,
                         double q_shape, double s_shape, Rng& rng) {
  require(!sigma_invs.empty(), "draw_common_scale: need at least one precision matrix");
  Matrix rate = q_rate;
  for (const Matrix& si : sigma_invs) rate += si;
  const double shape = q_shape + static_cast<double>(sigma_invs.size()) * s_shape;
  return sample_wishart(WishartParams{shape, rate}, rng);
}

double identification_statistic(const RegimeParams& regime, const DesignData& design,
                                const std::vector<int>& states, int regime_idx,
                                const ModelConfig& config) {
  if (config.ident_stat == IdentStat::intercept && config.include_intercept)
    return regime.a(config.ident_var, regime.a.cols() - 1);
  // Fitted mean of the identification equation over this regime's
  // observations; over all periods when the regime is empty (or when no
  // intercept exists to read off).
  double own_sum = 0.0, all_sum = 0.0;
  Eigen::Index own_n = 0;
  for (Eigen::Index t = 0; t < design.t_eff(); ++t) {
    const double fit = regime.a.row(config.ident_var).dot(design.x.row(t));
    all_sum += fit;
    if (states[t] == regime_idx) {
      own_sum += fit;
      ++own_n;
    }
  }
  if (own_n > 0) return own_sum / static_cast<double>(own_n);
  return all_sum / static_cast<double>(design.t_eff());
}

bool identification_holds(const ChainState& chain, const DesignData& design,
                          const ModelConfig& config) {
  return identification_statistic(chain.regimes[0], design, chain.states.s, 0, config) <=
         identification_statistic(chain.regimes[1], design, chain.states.s, 1, config);
}

bool enforce_identification(ChainState& chain, const DesignData& design,
                            const ModelConfig& config) {
  if (identification_holds(chain, design, config)) return false;
  std::swap(chain.regimes[0], chain.regimes[1]);
  for (auto& s : chain.states.s) s = 1 - s;
  chain.states.zstar = -chain.states.zstar;
  // Relabeling maps Phi(c_{0i} + g'w) into Phi(-c_{0,1-i} - g'w).
  const double c00 = chain.transition.c0(0), c01 = chain.transition.c0(1);
  chain.transition.c0(0) = -c01;
  chain.transition.c0(1) = -c00;
  chain.transition.gamma = -chain.transition.gamma;
  return true;
}

ChainState initialize_chain(const Dataset& data, const DesignData& design,
                            const ModelConfig& config, const PriorSpec& priors) {
  const Eigen::Index m = design.m();
  const Eigen::Index big_k = design.K();
  const Eigen::Index t_eff = design.t_eff();
  const Eigen::Index k = m * big_k;

  ChainState chain;

  // Equation-wise least squares on the full sample for both regimes.
  Eigen::ColPivHouseholderQR<Matrix> qr(design.x);
  Matrix coefs = qr.solve(design.dy);  // K x m
  Matrix a_init = coefs.transpose();
  const Matrix resid = design.dy - design.x * coefs;
  Matrix sigma_init =
      resid.transpose() * resid / std::max<double>(1.0, static_cast<double>(t_eff - big_k));
  // Ridge floor against collinear starting regressions.
  sigma_init.diagonal().array() += 1e-8 * (1.0 + sigma_init.diagonal().maxCoeff());
  chain.regimes[0] = RegimeParams::make(a_init, sigma_init);
  chain.regimes[1] = chain.regimes[0];

  if (config.n_regimes == 1) {
    // Linear benchmark: the hierarchy degenerates to a fixed N(0, 10 I).
    chain.hierarchy.a = Vector::Zero(k);
    chain.hierarchy.tau = Vector::Constant(k, 10.0);
  } else {
    chain.hierarchy.a = vec_of(a_init);
    chain.hierarchy.tau = Vector::Ones(k);
  }
  Eigen::LLT<Matrix> q_llt(priors.q_rate);
  require(q_llt.info() == Eigen::Success, "initialize_chain: Q rate not positive definite");
  Matrix s0 = priors.q_shape * q_llt.solve(Matrix::Identity(m, m));
  chain.hierarchy.s_common = 0.5 * (s0 + s0.transpose());

  chain.basis = CointegrationBasis::zero(static_cast<int>(m), config.r);
  chain.transition = TransitionParams::zero(config.r);

  chain.states.s.assign(t_eff, 0);
  if (config.n_regimes == 2) {
    // Split on the identification variable's growth relative to its median.
    Vector growth = design.dy.col(config.ident_var);
    std::vector<double> sorted(growth.data(), growth.data() + growth.size());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double med = sorted[sorted.size() / 2];
    for (Eigen::Index t = 0; t < t_eff; ++t) chain.states.s[t] = growth(t) > med ? 1 : 0;
  }
  chain.states.zstar = Vector::Zero(t_eff - 1);
  return chain;
}

bool gibbs_sweep(ChainState& chain, DesignData& design, const Dataset& data,
                 const ModelConfig& config, const PriorSpec& priors, Rng& rng,
                 WarningSink* warnings) {
  const bool switching = config.n_regimes == 2;
  const int n_reg = config.n_regimes;

  // 1. regime coefficients
  for (int j = 0; j < n_reg; ++j)
    chain.regimes[j].a = draw_regime_coefficients(design, chain.states.s, j,
                                                  chain.regimes[j].sigma, chain.hierarchy, rng,
                                                  warnings);
  if (!switching) chain.regimes[1].a = chain.regimes[0].a;

  // 2. cointegration coefficients; w depends on b, so rebuild the design
  chain.basis = draw_cointegration(design, chain.regimes, chain.states.s, config, rng);
  design = build_design(data, chain.basis, config);

  if (switching) {
    // 3. common mean
    const Vector a0 = vec_of(chain.regimes[0].a);
    const Vector a1 = vec_of(chain.regimes[1].a);
    chain.hierarchy.a = draw_common_mean(a0, a1, chain.hierarchy.tau, rng);

    // 4. scaling parameters
    if (config.freeze_tau > 0.0) {
      chain.hierarchy.tau.setConstant(config.freeze_tau);
    } else {
      chain.hierarchy.tau = draw_tau(chain.hierarchy.a, a0, a1, config.d0, config.d1, rng);
    }
  }

  // 5. regime covariances
  for (int j = 0; j < n_reg; ++j) {
    const Matrix sigma = draw_sigma(design, chain.states.s, j, chain.regimes[j].a,
                                    chain.hierarchy.s_common, priors.s_shape, rng);
    chain.regimes[j] = RegimeParams::make(chain.regimes[j].a, sigma);
  }
  if (!switching) chain.regimes[1] = chain.regimes[0];

  // 6. common Wishart scale
  std::vector<Matrix> sigma_invs;
  for (int j = 0; j < n_reg; ++j) sigma_invs.push_back(chain.regimes[j].sigma_inv());
  chain.hierarchy.s_common =
      draw_common_scale(sigma_invs, priors.q_rate, priors.q_shape, priors.s_shape, rng);

  if (!switching) return true;

  // 7. state path under the current time-varying transition matrices
  const Eigen::Index t_eff = design.t_eff();
  Matrix loglik(t_eff, 2);
  for (Eigen::Index t = 0; t < t_eff; ++t)
    for (int j = 0; j < 2; ++j)
      loglik(t, j) = log_likelihood_regime(design.dy.row(t).transpose(),
                                           design.x.row(t).transpose(), chain.regimes[j]);
  const TransitionMatrixSeq pmats = transition_sequence(chain.transition, design.w);
  Eigen::Vector2d init(0.5, 0.5);
  if (config.init_dist == InitDist::ergodic) {
    Eigen::Matrix2d pbar = Eigen::Matrix2d::Zero();
    for (const auto& p : pmats) pbar += p;
    pbar /= static_cast<double>(pmats.size());
    const double denom = pbar(0, 1) + pbar(1, 0);
    if (denom > 0.0) init << pbar(1, 0) / denom, pbar(0, 1) / denom;
  }
  const FilterResult filt = hamilton_filter(loglik, pmats, init);
  chain.states.s = ffbs_sample(filt.filtered, pmats, rng);

  // 8. latent utilities and transition coefficients
  TransitionDraw td = draw_transition_params(chain.states.s, design.w, chain.transition,
                                             config.v_gamma, rng, config.fix_transition_probs);
  chain.transition = td.params;
  chain.states.zstar = std::move(td.zstar);

  if (config.label_method == LabelMethod::permute) {
    enforce_identification(chain, design, config);
    return true;
  }
  return identification_holds(chain, design, config);
}

namespace {

void check_finite(const ChainState& chain, std::int64_t sweep) {
  auto fail = [&](const char* block) {
    throw std::runtime_error("run_chain: non-finite state in block '" + std::string(block) +
                             "' at sweep " + std::to_string(sweep));
  };
  for (int j = 0; j < 2; ++j) {
    if (!chain.regimes[j].a.allFinite()) fail(j == 0 ? "a0" : "a1");
    if (!chain.regimes[j].sigma.allFinite()) fail(j == 0 ? "sigma0" : "sigma1");
  }
  if (!chain.hierarchy.a.allFinite()) fail("a_common");
  if (!chain.hierarchy.tau.allFinite() || chain.hierarchy.tau.minCoeff() <= 0.0) fail("tau");
  if (!chain.hierarchy.s_common.allFinite()) fail("s_common");
  if (!chain.basis.xi.allFinite()) fail("xi");
  if (!chain.transition.c0.allFinite() || !chain.transition.gamma.allFinite())
    fail("transition");
  if (!chain.states.zstar.allFinite()) fail("zstar");
}

}  // namespace

PosteriorDraws run_chain(const Dataset& data, const ModelConfig& config, Rng rng,
                         const ProgressFn& progress, WarningSink* warnings) {
  const int m = static_cast<int>(data.cols());
  config.validate(m);

  const PriorSpec priors = make_prior_spec(data, config, warnings);
  DesignData design = build_design(data, CointegrationBasis::zero(m, config.r), config);
  ChainState chain = initialize_chain(data, design, config, priors);

  const std::int64_t n_post = config.n_draws - config.n_burn;
  const std::int64_t n_keep = n_post / config.thin;
  require(n_keep > 0, "run_chain: no retained draws with this thinning");

  PosteriorDraws out;
  out.m = m;
  out.K = config.K(m);
  out.r = config.r;
  out.t_eff = static_cast<int>(design.t_eff());
  out.n_regimes = config.n_regimes;
  out.include_intercept = config.include_intercept;
  out.var_names = data.names;
  out.coef_names = make_coef_names(data.names, config);
  out.state_dates.assign(data.dates.end() - design.t_eff(), data.dates.end());

  const Eigen::Index k = out.K * m;
  out.a0.resize(n_keep, k);
  out.a1.resize(n_keep, k);
  out.a_common.resize(n_keep, k);
  out.tau.resize(n_keep, k);
  out.xi.resize(n_keep, (m - config.r) * config.r);
  out.trans.resize(n_keep, 2 + config.r);
  out.sigma0.resize(n_keep, m * m);
  out.sigma1.resize(n_keep, m * m);
  out.s_common.resize(n_keep, m * m);
  out.states.resize(n_keep, design.t_eff());
  out.loglik.resize(n_keep);

  const std::int64_t report_every = std::max<std::int64_t>(1, config.n_draws / 20);
  ChainState snapshot;
  DesignData snapshot_design;
  Eigen::Index row = 0;
  for (std::int64_t sweep = 1; sweep <= config.n_draws; ++sweep) {
    if (config.label_method == LabelMethod::reject) {
      snapshot = chain;
      snapshot_design = design;
    }
    const bool identified = gibbs_sweep(chain, design, data, config, priors, rng, warnings);
    if (!identified && config.label_method == LabelMethod::reject) {
      chain = snapshot;
      design = snapshot_design;
    }
    check_finite(chain, sweep);
    if (progress && (sweep % report_every == 0 || sweep == config.n_draws))
      progress(sweep, config.n_draws);
    if (sweep <= config.n_burn) continue;
    const std::int64_t post_idx = sweep - config.n_burn;
    if (post_idx % config.thin != 0) continue;
    if (row >= n_keep) continue;

    out.a0.row(row) = vec_of(chain.regimes[0].a);
    out.a1.row(row) = vec_of(chain.regimes[1].a);
    out.a_common.row(row) = chain.hierarchy.a;
    out.tau.row(row) = chain.hierarchy.tau;
    out.xi.row(row) = vec_of(chain.basis.xi);
    out.trans(row, 0) = chain.transition.c0(0);
    out.trans(row, 1) = chain.transition.c0(1);
    out.trans.row(row).tail(config.r) = chain.transition.gamma;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        out.sigma0(row, i * m + j) = chain.regimes[0].sigma(i, j);
        out.sigma1(row, i * m + j) = chain.regimes[1].sigma(i, j);
        out.s_common(row, i * m + j) = chain.hierarchy.s_common(i, j);
      }
    for (Eigen::Index t = 0; t < design.t_eff(); ++t) out.states(row, t) = chain.states.s[t];
    // Conditional data density of the current draw, for trace diagnostics.
    double ll = 0.0;
    for (Eigen::Index t = 0; t < design.t_eff(); ++t)
      ll += log_likelihood_regime(design.dy.row(t).transpose(), design.x.row(t).transpose(),
                                  chain.regimes[chain.states.s[t]]);
    out.loglik(row) = ll;
    ++row;
  }
  return out;
}

}  // namespace regimecast
