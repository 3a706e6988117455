#pragma once

#include <string>
#include <vector>

#include "regimecast/draws.hpp"
#include "regimecast/types.hpp"

namespace regimecast {

struct ParamSummary {
  std::string block;
  std::string param;
  double mean = 0.0;
  double sd = 0.0;
  double p16 = 0.0;
  double p50 = 0.0;
  double p84 = 0.0;
  double ineff = 0.0;
};

// 1 + 2 * sum of the first min(100, n/10) sample autocorrelations.
double inefficiency_factor(const Vector& chain);

double quantile(Vector sorted_or_not, double prob);

// Per-scalar summaries across every real-valued block; requires at least
// 200 retained draws.
std::vector<ParamSummary> compute_diagnostics(const PosteriorDraws& draws);

void write_diagnostics_csv(const std::vector<ParamSummary>& table, const std::string& path);

}  // namespace regimecast
