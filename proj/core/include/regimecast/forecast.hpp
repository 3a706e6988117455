#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "regimecast/config.hpp"
#include "regimecast/draws.hpp"
#include "regimecast/io.hpp"
#include "regimecast/rng.hpp"

namespace regimecast {

// One-step-ahead predictive for the differenced system, Rao-Blackwellized
// over regimes: per retained draw, the regime-1 probability at T+1 and the
// per-regime Gaussian components.
struct PredictiveMixture {
  double anchor = 0.0;  // level of the target at the origin
  std::vector<double> p_regime1;
  std::vector<std::array<Vector, 2>> means;
  std::vector<std::array<Matrix, 2>> covs;

  std::size_t n_draws() const { return p_regime1.size(); }
};

PredictiveMixture predictive_mixture(const PosteriorDraws& draws, const Dataset& data,
                                     const ModelConfig& config);

// Log of the marginal univariate mixture density at the realized difference
// of the target variable. Returns -inf with a warning if the density
// underflows.
double log_predictive_score(const PredictiveMixture& mix, double realized, int target_index,
                            WarningSink* warnings = nullptr);

// Closed-form univariate predictive (Student-t when df > 0, else normal).
struct UnivariatePredictive {
  double loc = 0.0;
  double scale = 1.0;  // scale parameter, not the standard deviation
  double df = 0.0;     // <= 0 means Gaussian

  double logpdf(double x) const;
};

// Conjugate Minnesota BVAR in levels; Student-t one-step marginal for the
// target column.
UnivariatePredictive bvar_fit_predict(const Dataset& data, int lags, double tightness,
                                      double decay, int target_index,
                                      WarningSink* warnings = nullptr);

enum class UnivariateKind { ar1, rw };

// AR(1) with a flat prior (Student-t predictive) or random walk
// (Gaussian with the variance of first differences).
UnivariatePredictive univariate_predict(const Vector& series, UnivariateKind kind);

// ---- recursive real-time exercise -------------------------------------------

struct ModelSpec {
  enum class Kind { tvp, ftp, vecm, bvar, ar1, rw };
  Kind kind = Kind::tvp;
  int r = 0;

  std::string id() const;
  std::string family() const;
  static ModelSpec parse(const std::string& text);  // "tvp:3", "bvar", ...
};

struct LpsRow {
  Quarter origin;
  std::string model;
  double lps = 0.0;
  double cum_rel = 0.0;  // running sum of (lps - lps_bvar)
};

struct LpsReport {
  std::vector<LpsRow> rows;
  std::vector<std::string> model_ids;               // evaluation order
  std::map<std::string, double> final_cum_rel;      // by model id
  std::vector<Quarter> skipped_origins;

  void save_csv(const std::string& path) const;
  std::string summary_json(const std::string& target_name) const;
};

// Expanding-window evaluation over the vintage store: estimate each model
// on the vintage available at the origin, score the one-step-ahead marginal
// predictive of the target, advance one period. The BVAR benchmark is
// always evaluated. Origins without a usable realization are skipped and
// recorded.
LpsReport run_recursive_exercise(const VintageStore& store,
                                 const std::vector<ModelSpec>& specs, const ModelConfig& config,
                                 Rng rng, WarningSink* warnings = nullptr);

// Worker cap for the exercise: REGIMECAST_THREADS, else hardware threads.
int resolve_thread_cap();

}  // namespace regimecast
