#include "regimecast/draws.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>

#include "regimecast/io.hpp"

namespace regimecast {

namespace fs = std::filesystem;

Matrix PosteriorDraws::coef_matrix(const Matrix& block, Eigen::Index row) const {
  const Vector v = block.row(row);
  return Eigen::Map<const Matrix>(v.data(), m, K);
}

Matrix PosteriorDraws::cov_matrix(const Matrix& block, Eigen::Index row) const {
  Matrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = block(row, i * m + j);
  return out;
}

std::vector<std::string> make_coef_names(const std::vector<std::string>& var_names,
                                         const ModelConfig& config) {
  const int m = static_cast<int>(var_names.size());
  const int big_k = config.K(m);
  std::vector<std::string> cols(big_k);
  for (int c = 0; c < config.r; ++c) cols[c] = "ec" + std::to_string(c + 1);
  for (int lag = 1; lag <= config.P; ++lag)
    for (int j = 0; j < m; ++j)
      cols[config.r + (lag - 1) * m + j] = "l" + std::to_string(lag) + "." + var_names[j];
  if (config.include_intercept) cols[big_k - 1] = "const";

  // vec(A) order: equation index varies fastest.
  std::vector<std::string> out(static_cast<std::size_t>(big_k) * m);
  for (int c = 0; c < big_k; ++c)
    for (int i = 0; i < m; ++i) out[i + m * c] = var_names[i] + "." + cols[c];
  return out;
}

namespace {

std::vector<std::string> cov_names(const std::vector<std::string>& var_names) {
  std::vector<std::string> out;
  for (const auto& a : var_names)
    for (const auto& b : var_names) out.push_back(a + ":" + b);
  return out;
}

std::vector<std::string> xi_names(const std::vector<std::string>& var_names, int r) {
  const int m = static_cast<int>(var_names.size());
  std::vector<std::string> out;
  for (int c = 0; c < r; ++c)
    for (int i = 0; i < m - r; ++i)
      out.push_back("xi." + var_names[r + i] + ".ec" + std::to_string(c + 1));
  return out;
}

}  // namespace

void save_draws(const PosteriorDraws& draws, const std::string& dir) {
  fs::create_directories(dir);
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

  write_csv(path("a0.csv"), draws.coef_names, draws.a0);
  write_csv(path("a_common.csv"), draws.coef_names, draws.a_common);
  write_csv(path("tau.csv"), draws.coef_names, draws.tau);
  write_csv(path("xi.csv"), xi_names(draws.var_names, draws.r), draws.xi);
  write_csv(path("sigma0.csv"), cov_names(draws.var_names), draws.sigma0);
  write_csv(path("s_common.csv"), cov_names(draws.var_names), draws.s_common);
  write_csv(path("loglik.csv"), {"loglik"}, draws.loglik);

  if (draws.n_regimes == 2) {
    write_csv(path("a1.csv"), draws.coef_names, draws.a1);
    write_csv(path("sigma1.csv"), cov_names(draws.var_names), draws.sigma1);
    std::vector<std::string> tnames = {"c00", "c01"};
    for (int j = 0; j < draws.r; ++j) tnames.push_back("gamma.ec" + std::to_string(j + 1));
    write_csv(path("transition.csv"), tnames, draws.trans);
    std::vector<std::string> dates;
    for (const auto& d : draws.state_dates) dates.push_back(d.str());
    write_csv(path("states.csv"), dates, draws.states.cast<double>());
  }
}

PosteriorDraws load_draws(const std::string& dir) {
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
  require(fs::exists(path("a0.csv")), "load_draws: no a0.csv under " + dir);

  PosteriorDraws out;
  auto load_block = [&](const char* name, Matrix& dest, std::vector<std::string>* header) {
    const std::string p = path(name);
    if (!fs::exists(p)) return false;
    const CsvTable t = read_csv(p);
    dest = parse_numeric(t, 0, p);
    if (header) *header = t.header;
    return true;
  };

  load_block("a0.csv", out.a0, &out.coef_names);
  load_block("a_common.csv", out.a_common, nullptr);
  load_block("tau.csv", out.tau, nullptr);
  std::vector<std::string> xi_header;
  load_block("xi.csv", out.xi, &xi_header);
  std::vector<std::string> sigma_header;
  load_block("sigma0.csv", out.sigma0, &sigma_header);
  load_block("s_common.csv", out.s_common, nullptr);
  Matrix ll;
  if (load_block("loglik.csv", ll, nullptr)) out.loglik = ll.col(0);

  out.n_regimes = 1;
  if (fs::exists(path("a1.csv"))) {
    out.n_regimes = 2;
    load_block("a1.csv", out.a1, nullptr);
    load_block("sigma1.csv", out.sigma1, nullptr);
    std::vector<std::string> theader;
    load_block("transition.csv", out.trans, &theader);
    out.r = static_cast<int>(theader.size()) - 2;
    std::vector<std::string> dates;
    Matrix states_d;
    if (load_block("states.csv", states_d, &dates)) {
      out.states = states_d.cast<int>();
      out.t_eff = static_cast<int>(states_d.cols());
      for (const auto& d : dates) out.state_dates.push_back(Quarter::parse(d));
    }
  }

  out.m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(sigma_header.size()))));
  require(out.m * out.m == static_cast<int>(sigma_header.size()),
          "load_draws: sigma0.csv column count is not a square");
  out.K = static_cast<int>(out.coef_names.size()) / out.m;
  for (int i = 0; i < out.m; ++i) {
    const std::string& name = out.coef_names[i];
    out.var_names.push_back(name.substr(0, name.find('.')));
  }
  out.include_intercept =
      !out.coef_names.empty() && out.coef_names.back().ends_with(".const");
  if (out.n_regimes == 1 && !xi_header.empty()) {
    // Column names end in ".ec<c>"; the largest index is the rank.
    int r = 0;
    for (const auto& name : xi_header) {
      const auto pos = name.rfind(".ec");
      if (pos != std::string::npos) r = std::max(r, std::stoi(name.substr(pos + 3)));
    }
    out.r = r;
  }
  return out;
}

}  // namespace regimecast
