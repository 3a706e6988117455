#include "regimecast/forecast.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "regimecast/distributions.hpp"
#include "regimecast/sampler.hpp"
#include "regimecast/statefilter.hpp"

namespace regimecast {

PredictiveMixture predictive_mixture(const PosteriorDraws& draws, const Dataset& data,
                                     const ModelConfig& config) {
  require(draws.n_retained() > 0, "predictive_mixture: no retained draws");
  const int m = draws.m;
  require(static_cast<int>(data.cols()) == m, "predictive_mixture: dimension mismatch");
  const Eigen::Index t_end = data.rows() - 1;
  require(t_end >= config.P, "predictive_mixture: sample too short for the lag order");

  const int big_k = draws.K;
  require(big_k == config.K(m), "predictive_mixture: draws do not match the configuration");

  PredictiveMixture mix;
  mix.anchor = data.levels(t_end, config.target_var);
  const Eigen::Index n = draws.n_retained();
  mix.p_regime1.resize(n);
  mix.means.resize(n);
  mix.covs.resize(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    CointegrationBasis basis;
    const Vector xi_row = draws.xi.row(i);
    basis.xi = Eigen::Map<const Matrix>(xi_row.data(), m - draws.r, draws.r);
    const Vector w = basis.b().transpose() * data.levels.row(t_end).transpose();

    Vector x(big_k);
    x.head(draws.r) = w;
    for (int lag = 1; lag <= config.P; ++lag)
      x.segment(draws.r + (lag - 1) * m, m) =
          data.levels.row(t_end - lag + 1) - data.levels.row(t_end - lag);
    if (config.include_intercept) x(big_k - 1) = 1.0;

    const Matrix a0 = draws.coef_matrix(draws.a0, i);
    mix.means[i][0] = a0 * x;
    mix.covs[i][0] = draws.cov_matrix(draws.sigma0, i);
    if (draws.n_regimes == 2) {
      const Matrix a1 = draws.coef_matrix(draws.a1, i);
      mix.means[i][1] = a1 * x;
      mix.covs[i][1] = draws.cov_matrix(draws.sigma1, i);
      TransitionParams trans;
      trans.c0 << draws.trans(i, 0), draws.trans(i, 1);
      trans.gamma = draws.trans.row(i).tail(draws.r);
      const Eigen::Matrix2d pmat = transition_matrix(trans, w);
      const int s_last = draws.states(i, draws.t_eff - 1);
      mix.p_regime1[i] = pmat(s_last, 1);
    } else {
      mix.means[i][1] = mix.means[i][0];
      mix.covs[i][1] = mix.covs[i][0];
      mix.p_regime1[i] = 0.0;
    }
  }
  return mix;
}

double log_predictive_score(const PredictiveMixture& mix, double realized, int target_index,
                            WarningSink* warnings) {
  require(!mix.means.empty(), "log_predictive_score: empty mixture");
  require(target_index >= 0 && target_index < mix.means[0][0].size(),
          "log_predictive_score: target index out of range");

  std::vector<double> terms;
  terms.reserve(2 * mix.n_draws());
  for (std::size_t i = 0; i < mix.n_draws(); ++i) {
    const double weights[2] = {1.0 - mix.p_regime1[i], mix.p_regime1[i]};
    for (int j = 0; j < 2; ++j) {
      if (weights[j] <= 0.0) continue;
      terms.push_back(std::log(weights[j]) +
                      norm_logpdf(realized, mix.means[i][j](target_index),
                                  mix.covs[i][j](target_index, target_index)));
    }
  }
  const double shift = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(shift)) {
    warn(warnings, "log_predictive_score: predictive density underflowed, scoring -inf");
    return -std::numeric_limits<double>::infinity();
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - shift);
  return shift + std::log(acc) - std::log(static_cast<double>(mix.n_draws()));
}

double UnivariatePredictive::logpdf(double x) const {
  const double z = (x - loc) / scale;
  if (df <= 0.0) return norm_logpdf(z) - std::log(scale);
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * std::numbers::pi) - std::log(scale) -
         0.5 * (df + 1.0) * std::log1p(z * z / df);
}

UnivariatePredictive bvar_fit_predict(const Dataset& data, int lags, double tightness,
                                      double decay, int target_index, WarningSink* warnings) {
  data.validate();
  const Eigen::Index m = data.cols();
  const Eigen::Index t_total = data.rows();
  require(lags >= 1 && t_total > lags + m + 2, "bvar_fit_predict: insufficient observations");
  require(target_index >= 0 && target_index < m, "bvar_fit_predict: target out of range");

  const Eigen::Index n = t_total - lags;
  const Eigen::Index p_dim = m * lags + 1;
  Matrix y(n, m), x(n, p_dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index t = lags + i;
    y.row(i) = data.levels.row(t);
    for (int l = 1; l <= lags; ++l) x.block(i, (l - 1) * m, 1, m) = data.levels.row(t - l);
    x(i, p_dim - 1) = 1.0;
  }

  // Minnesota moments: random-walk prior mean, lag-decaying tightness scaled
  // by AR residual variances. The intercept variance is tied to the overall
  // tightness so the dogmatic limit recovers the prior mean path exactly.
  Vector sig2 = ols_residual_variances(data, lags, warnings);
  require(sig2.minCoeff() > 0.0, "bvar_fit_predict: degenerate series");
  Matrix b0 = Matrix::Zero(p_dim, m);
  for (Eigen::Index j = 0; j < m; ++j) b0(j, j) = 1.0;
  Vector omega0(p_dim);
  for (int l = 1; l <= lags; ++l)
    for (Eigen::Index j = 0; j < m; ++j)
      omega0((l - 1) * m + j) =
          tightness * tightness / (std::pow(static_cast<double>(l), 2.0 * decay) * sig2(j));
  omega0(p_dim - 1) = 100.0 * (tightness / 0.2) * (tightness / 0.2);

  const double nu0 = static_cast<double>(m) + 2.0;
  const Matrix psi0 = sig2.asDiagonal();  // scaled so E[Sigma] = diag(sig2)

  Matrix precision = x.transpose() * x;
  precision.diagonal() += omega0.cwiseInverse();
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("bvar_fit_predict: ill-conditioned posterior scale");
  const Matrix rhs = omega0.cwiseInverse().asDiagonal() * b0 + x.transpose() * y;
  const Matrix b_post = llt.solve(rhs);

  Matrix psi_post = psi0 + y.transpose() * y +
                    b0.transpose() * (omega0.cwiseInverse().asDiagonal() * b0) -
                    b_post.transpose() * (precision * b_post);
  psi_post = 0.5 * (psi_post + psi_post.transpose()).eval();
  const double nu_post = nu0 + static_cast<double>(n);

  Vector x_star(p_dim);
  for (int l = 1; l <= lags; ++l)
    x_star.segment((l - 1) * m, m) = data.levels.row(t_total - l);
  x_star(p_dim - 1) = 1.0;

  const double df = nu_post - static_cast<double>(m) + 1.0;
  const double spread = 1.0 + x_star.dot(llt.solve(x_star));
  const double s2 = spread * psi_post(target_index, target_index) / df;
  if (!(s2 > 0.0) || !std::isfinite(s2))
    throw std::runtime_error("bvar_fit_predict: ill-conditioned posterior scale");

  UnivariatePredictive out;
  out.loc = b_post.col(target_index).dot(x_star);
  out.scale = std::sqrt(s2);
  out.df = df;
  return out;
}

UnivariatePredictive univariate_predict(const Vector& series, UnivariateKind kind) {
  const Eigen::Index t_total = series.size();
  require(t_total >= 10, "univariate_predict: need at least 10 observations");
  const double spread = series.maxCoeff() - series.minCoeff();
  if (spread == 0.0)
    throw std::runtime_error("univariate_predict: constant series has degenerate variance");

  if (kind == UnivariateKind::rw) {
    const Vector diff = series.tail(t_total - 1) - series.head(t_total - 1);
    const double mean = diff.mean();
    const double var =
        (diff.array() - mean).square().sum() / static_cast<double>(diff.size() - 1);
    if (!(var > 0.0))
      throw std::runtime_error("univariate_predict: degenerate difference variance");
    UnivariatePredictive out;
    out.loc = series(t_total - 1);
    out.scale = std::sqrt(var);
    out.df = 0.0;
    return out;
  }

  // AR(1) with intercept, flat prior: Student-t predictive with n-2 df.
  const Eigen::Index n = t_total - 1;
  Matrix x(n, 2);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = series(i);
    y(i) = series(i + 1);
  }
  const Matrix xtx = x.transpose() * x;
  Eigen::LLT<Matrix> llt(xtx);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("univariate_predict: singular AR regression");
  const Vector beta = llt.solve(x.transpose() * y);
  const double rss = (y - x * beta).squaredNorm();
  const double df = static_cast<double>(n - 2);
  const double s2 = rss / df;
  const Vector x_star = (Vector(2) << 1.0, series(t_total - 1)).finished();

  UnivariatePredictive out;
  out.loc = beta.dot(x_star);
  out.scale = std::sqrt(s2 * (1.0 + x_star.dot(llt.solve(x_star))));
  out.df = df;
  return out;
}

// ---- recursive exercise ---------------------------------------------------------

std::string ModelSpec::family() const {
  switch (kind) {
    case Kind::tvp: return "MS-VECM-TVP";
    case Kind::ftp: return "MS-VECM-FTP";
    case Kind::vecm: return "VECM";
    case Kind::bvar: return "BVAR";
    case Kind::ar1: return "AR(1)";
    case Kind::rw: return "RW";
  }
  return "?";
}

std::string ModelSpec::id() const {
  if (kind == Kind::bvar || kind == Kind::ar1 || kind == Kind::rw) return family();
  return family() + " r=" + std::to_string(r);
}

ModelSpec ModelSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  ModelSpec spec;
  if (name == "tvp") spec.kind = Kind::tvp;
  else if (name == "ftp") spec.kind = Kind::ftp;
  else if (name == "vecm") spec.kind = Kind::vecm;
  else if (name == "bvar") spec.kind = Kind::bvar;
  else if (name == "ar1") spec.kind = Kind::ar1;
  else if (name == "rw") spec.kind = Kind::rw;
  else throw std::invalid_argument("ModelSpec: unknown model '" + text + "'");
  if (spec.kind == Kind::tvp || spec.kind == Kind::ftp || spec.kind == Kind::vecm) {
    require(colon != std::string::npos, "ModelSpec: '" + name + "' needs a rank, e.g. '" +
                                            name + ":3'");
    spec.r = std::stoi(text.substr(colon + 1));
    require(spec.r >= 1, "ModelSpec: rank must be positive in '" + text + "'");
  }
  return spec;
}

int resolve_thread_cap() {
  if (const char* env = std::getenv("REGIMECAST_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

void parallel_for(int n_jobs, int n_threads, const std::function<void(int)>& fn) {
  n_threads = std::max(1, std::min(n_threads, n_jobs));
  if (n_threads == 1) {
    for (int i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct OriginTask {
  Quarter origin;
  const Dataset* estimation = nullptr;
  double realized_level = 0.0;
};

double score_model(const ModelSpec& spec, const Dataset& data, double realized_level,
                   const ModelConfig& base, Rng rng, WarningSink* warnings) {
  switch (spec.kind) {
    case ModelSpec::Kind::bvar: {
      const auto pred = bvar_fit_predict(data, base.bvar_lags, base.bvar_tightness,
                                         base.bvar_decay, base.target_var, warnings);
      return pred.logpdf(realized_level);
    }
    case ModelSpec::Kind::ar1: {
      return univariate_predict(data.levels.col(base.target_var), UnivariateKind::ar1)
          .logpdf(realized_level);
    }
    case ModelSpec::Kind::rw: {
      return univariate_predict(data.levels.col(base.target_var), UnivariateKind::rw)
          .logpdf(realized_level);
    }
    default: {
      ModelConfig config = base;
      config.r = spec.r;
      config.fix_transition_probs = spec.kind == ModelSpec::Kind::ftp;
      config.n_regimes = spec.kind == ModelSpec::Kind::vecm ? 1 : 2;
      const PosteriorDraws draws = run_chain(data, config, rng, nullptr, warnings);
      const PredictiveMixture mix = predictive_mixture(draws, data, config);
      return log_predictive_score(mix, realized_level - mix.anchor, config.target_var, warnings);
    }
  }
}

}  // namespace

LpsReport run_recursive_exercise(const VintageStore& store, const std::vector<ModelSpec>& specs,
                                 const ModelConfig& config, Rng rng, WarningSink* warnings) {
  store.validate();
  require(!specs.empty(), "run_recursive_exercise: no models requested");

  std::vector<ModelSpec> models = specs;
  const bool has_bvar = std::any_of(models.begin(), models.end(), [](const ModelSpec& s) {
    return s.kind == ModelSpec::Kind::bvar;
  });
  if (!has_bvar) models.push_back(ModelSpec{ModelSpec::Kind::bvar, 0});
  int bvar_idx = 0;
  for (std::size_t i = 0; i < models.size(); ++i)
    if (models[i].kind == ModelSpec::Kind::bvar) bvar_idx = static_cast<int>(i);

  LpsReport report;
  for (const auto& spec : models) report.model_ids.push_back(spec.id());

  // Resolve the realized value per origin: first vintage that contains the
  // next period (first release) or the final vintage, per configuration.
  std::vector<OriginTask> tasks;
  const Dataset& final_vintage = store.vintages.rbegin()->second;
  for (const auto& [origin, data] : store.vintages) {
    const Quarter next = origin.next();
    OriginTask task;
    task.origin = origin;
    task.estimation = &data;
    int idx = -1;
    if (config.realized == RealizedConvention::final_vintage) {
      idx = final_vintage.date_index(next);
      if (idx >= 0) task.realized_level = final_vintage.levels(idx, config.target_var);
    } else {
      for (const auto& [vdate, vdata] : store.vintages) {
        if (!(vdate > origin)) continue;
        idx = vdata.date_index(next);
        if (idx >= 0) {
          task.realized_level = vdata.levels(idx, config.target_var);
          break;
        }
      }
    }
    if (idx < 0) {
      warn(warnings, "run_recursive_exercise: no realization for origin " + origin.str() +
                         ", skipping");
      report.skipped_origins.push_back(origin);
      continue;
    }
    tasks.push_back(task);
  }
  require(!tasks.empty(), "run_recursive_exercise: no origin has a usable realization");

  const int n_models = static_cast<int>(models.size());
  const int n_jobs = static_cast<int>(tasks.size()) * n_models;
  Matrix lps(static_cast<Eigen::Index>(tasks.size()), n_models);
  parallel_for(n_jobs, resolve_thread_cap(), [&](int job) {
    const int oi = job / n_models;
    const int mi = job % n_models;
    lps(oi, mi) = score_model(models[mi], *tasks[oi].estimation, tasks[oi].realized_level,
                              config, rng.stream(static_cast<std::uint64_t>(job) + 1), warnings);
  });

  Vector cum = Vector::Zero(n_models);
  for (std::size_t oi = 0; oi < tasks.size(); ++oi) {
    for (int mi = 0; mi < n_models; ++mi) {
      cum(mi) += lps(oi, mi) - lps(oi, bvar_idx);
      report.rows.push_back(
          LpsRow{tasks[oi].origin, models[mi].id(), lps(oi, mi), cum(mi)});
    }
  }
  for (int mi = 0; mi < n_models; ++mi) report.final_cum_rel[models[mi].id()] = cum(mi);
  return report;
}

void LpsReport::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "origin,model,lps,cum_rel_lps\n";
  for (const auto& row : rows)
    out << row.origin.str() << ',' << row.model << ',' << format_double(row.lps) << ','
        << format_double(row.cum_rel) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string LpsReport::summary_json(const std::string& target_name) const {
  nlohmann::json j;
  j["target"] = target_name;
  j["relative_to"] = "BVAR";
  j["origins"] = rows.empty() ? 0 : static_cast<int>(rows.size() / model_ids.size());
  nlohmann::json grouped = nlohmann::json::object();
  for (const auto& id : model_ids) {
    const double value = final_cum_rel.at(id);
    const auto pos = id.find(" r=");
    if (pos == std::string::npos) {
      grouped[id] = value;
    } else {
      grouped[id.substr(0, pos)][id.substr(pos + 1)] = value;
    }
  }
  j["final_cum_rel_lps"] = grouped;
  std::vector<std::string> skipped;
  for (const auto& q : skipped_origins) skipped.push_back(q.str());
  j["skipped_origins"] = skipped;
  return j.dump(2);
}

}  // namespace regimecast
