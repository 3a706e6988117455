#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "regimecast/types.hpp"

namespace regimecast {

enum class LabelMethod { permute, reject };
enum class IdentStat { intercept, fitted_mean };
enum class InitDist { uniform, ergodic };
enum class RealizedConvention { first_release, final_vintage };

// Full estimation / forecasting configuration. Serialized as one flat JSON
// document; every field has the default used in the empirical setup.
struct ModelConfig {
  int P = 4;                      // lag order of the differenced system
  int r = 3;                      // cointegration rank
  bool include_intercept = true;  // intercept appended as the last column of A
  int n_regimes = 2;              // 2 = Markov switching, 1 = linear VECM

  // shrinkage and prior scales
  double d0 = 0.1;       // Gamma shape on the scaling parameters
  double d1 = 0.1;       // Gamma rate on the scaling parameters
  double zeta = 1.0;     // prior variance of the free cointegration coefficients
  double v_gamma = 10.0; // prior variance of the transition coefficients
  double q_sbar = 0.0;   // denominator in the Wishart Q scale; 0 means "use q"

  // chain lengths (n_draws is the total number of sweeps)
  std::int64_t n_draws = 85000;
  std::int64_t n_burn = 50000;
  std::int64_t thin = 1;

  int ident_var = 1;   // column whose equation pins the regime labels (UNEMP)
  int target_var = 0;  // column scored in the forecast exercise (HICPXE)

  LabelMethod label_method = LabelMethod::permute;
  IdentStat ident_stat = IdentStat::intercept;
  InitDist init_dist = InitDist::uniform;
  RealizedConvention realized = RealizedConvention::first_release;

  // fixed-transition-probability variant: gamma pinned at zero
  bool fix_transition_probs = false;

  // testing hook: pin every tau at this value when > 0
  double freeze_tau = 0.0;

  // data ingestion
  std::vector<std::string> variables = {"HICPXE",  "UNEMP", "HICP-EXPEC",
                                        "UTILIZ", "OIL",   "I3M"};
  std::map<std::string, std::string> transforms = {{"UTILIZ", "log"}, {"OIL", "log"}};

  // forecast exercise
  std::vector<std::string> models = {
      "tvp:1", "tvp:2", "tvp:3", "tvp:4", "tvp:5",  "ftp:1", "ftp:2", "ftp:3",
      "ftp:4", "ftp:5", "vecm:1", "vecm:2", "vecm:3", "vecm:4", "vecm:5",
      "bvar",  "ar1",   "rw"};
  int bvar_lags = 5;
  double bvar_tightness = 0.2;
  double bvar_decay = 1.0;

  // Number of regression coefficient columns per equation.
  int K(int m) const { return r + m * P + (include_intercept ? 1 : 0); }
  // Total coefficient count k = K * m.
  int k(int m) const { return K(m) * m; }

  void validate(int m) const;

  std::string to_json_text(int indent = 2) const;
  static ModelConfig from_json_text(const std::string& text);
  static ModelConfig from_json_file(const std::string& path);
};

std::string to_string(LabelMethod v);
std::string to_string(IdentStat v);
std::string to_string(InitDist v);
std::string to_string(RealizedConvention v);

}  // namespace regimecast
