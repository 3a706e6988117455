#include "regimecast/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "regimecast/io.hpp"

namespace regimecast {

double inefficiency_factor(const Vector& chain) {
  const Eigen::Index n = chain.size();
  require(n >= 10, "inefficiency_factor: chain too short");
  const double mean = chain.mean();
  const Vector centered = chain.array() - mean;
  const double c0 = centered.squaredNorm() / static_cast<double>(n);
  if (c0 <= 0.0) return 1.0;  // constant chain
  const Eigen::Index max_lag = std::min<Eigen::Index>(100, n / 10);
  double acc = 0.0;
  for (Eigen::Index l = 1; l <= max_lag; ++l) {
    const double cl =
        centered.head(n - l).dot(centered.tail(n - l)) / static_cast<double>(n);
    acc += cl / c0;
  }
  return 1.0 + 2.0 * acc;
}

double quantile(Vector x, double prob) {
  require(x.size() > 0 && prob >= 0.0 && prob <= 1.0, "quantile: bad inputs");
  std::sort(x.data(), x.data() + x.size());
  const double h = prob * static_cast<double>(x.size() - 1);
  const Eigen::Index lo = static_cast<Eigen::Index>(std::floor(h));
  const Eigen::Index hi = std::min<Eigen::Index>(lo + 1, x.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return x(lo) * (1.0 - frac) + x(hi) * frac;
}

namespace {

void summarize_block(const std::string& block, const std::vector<std::string>& names,
                     const Matrix& values, std::vector<ParamSummary>& out) {
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const Vector col = values.col(j);
    ParamSummary s;
    s.block = block;
    s.param = names.empty() ? block + "." + std::to_string(j + 1) : names[j];
    s.mean = col.mean();
    const double var = (col.array() - s.mean).square().sum() /
                       std::max<double>(1.0, static_cast<double>(col.size() - 1));
    s.sd = std::sqrt(var);
    s.p16 = quantile(col, 0.16);
    s.p50 = quantile(col, 0.50);
    s.p84 = quantile(col, 0.84);
    s.ineff = inefficiency_factor(col);
    out.push_back(std::move(s));
  }
}

std::vector<std::string> prefixed(const std::vector<std::string>& names, const char* prefix) {
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(std::string(prefix) + n);
  return out;
}

}  // namespace

std::vector<ParamSummary> compute_diagnostics(const PosteriorDraws& draws) {
  require(draws.n_retained() >= 200, "compute_diagnostics: need at least 200 retained draws");
  std::vector<ParamSummary> out;
  summarize_block("a0", prefixed(draws.coef_names, "r0."), draws.a0, out);
  if (draws.n_regimes == 2) summarize_block("a1", prefixed(draws.coef_names, "r1."), draws.a1, out);
  if (draws.a_common.size() > 0)
    summarize_block("a_common", draws.coef_names, draws.a_common, out);
  if (draws.tau.size() > 0) summarize_block("tau", prefixed(draws.coef_names, "tau."), draws.tau, out);
  if (draws.xi.size() > 0) summarize_block("xi", {}, draws.xi, out);
  if (draws.n_regimes == 2 && draws.trans.size() > 0) {
    std::vector<std::string> tnames = {"c00", "c01"};
    for (Eigen::Index j = 2; j < draws.trans.cols(); ++j)
      tnames.push_back("gamma.ec" + std::to_string(j - 1));
    summarize_block("transition", tnames, draws.trans, out);
  }
  summarize_block("sigma0", {}, draws.sigma0, out);
  if (draws.n_regimes == 2) summarize_block("sigma1", {}, draws.sigma1, out);
  if (draws.s_common.size() > 0) summarize_block("s_common", {}, draws.s_common, out);
  if (draws.loglik.size() > 0) {
    Matrix ll(draws.loglik.size(), 1);
    ll.col(0) = draws.loglik;
    summarize_block("loglik", {"loglik"}, ll, out);
  }
  return out;
}

void write_diagnostics_csv(const std::vector<ParamSummary>& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "block,param,mean,sd,p16,p50,p84,ineff\n";
  for (const auto& s : table)
    out << s.block << ',' << s.param << ',' << format_double(s.mean) << ','
        << format_double(s.sd) << ',' << format_double(s.p16) << ',' << format_double(s.p50)
        << ',' << format_double(s.p84) << ',' << format_double(s.ineff) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace regimecast
