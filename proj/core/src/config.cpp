#include "regimecast/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace regimecast {

using nlohmann::json;

std::string to_string(LabelMethod v) { return v == LabelMethod::permute ? "permute" : "reject"; }
std::string to_string(IdentStat v) {
  return v == IdentStat::intercept ? "intercept" : "fitted_mean";
}
std::string to_string(InitDist v) { return v == InitDist::uniform ? "uniform" : "ergodic"; }
std::string to_string(RealizedConvention v) {
  return v == RealizedConvention::first_release ? "first_release" : "final";
}

namespace {

template <typename T>
T parse_enum(const std::string& s, const std::vector<std::pair<std::string, T>>& table,
             const std::string& field) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw std::invalid_argument("config: unknown value '" + s + "' for " + field);
}

}  // namespace

void ModelConfig::validate(int m) const {
  require(m > 1, "config: need at least two variables");
  require(r > 0 && r < m, "config: cointegration rank must satisfy 0 < r < m");
  require(P >= 1, "config: lag order must be at least 1");
  require(d0 > 0.0 && d1 > 0.0, "config: d0 and d1 must be positive");
  require(zeta > 0.0, "config: zeta must be positive");
  require(v_gamma > 0.0, "config: v_gamma must be positive");
  require(n_regimes == 1 || n_regimes == 2, "config: n_regimes must be 1 or 2");
  require(n_draws > 0 && n_burn >= 0 && n_burn < n_draws,
          "config: need 0 <= n_burn < n_draws");
  require(thin >= 1, "config: thin must be at least 1");
  require(ident_var >= 0 && ident_var < m, "config: ident_var out of range");
  require(target_var >= 0 && target_var < m, "config: target_var out of range");
  require(bvar_lags >= 1, "config: bvar_lags must be at least 1");
  require(bvar_tightness > 0.0, "config: bvar_tightness must be positive");
}

std::string ModelConfig::to_json_text(int indent) const {
  json j;
  j["P"] = P;
  j["r"] = r;
  j["include_intercept"] = include_intercept;
  j["n_regimes"] = n_regimes;
  j["d0"] = d0;
  j["d1"] = d1;
  j["zeta"] = zeta;
  j["v_gamma"] = v_gamma;
  j["q_sbar"] = q_sbar;
  j["n_draws"] = n_draws;
  j["n_burn"] = n_burn;
  j["thin"] = thin;
  j["ident_var"] = ident_var;
  j["target_var"] = target_var;
  j["label_method"] = to_string(label_method);
  j["ident_stat"] = to_string(ident_stat);
  j["init_dist"] = to_string(init_dist);
  j["realized"] = to_string(realized);
  j["fix_transition_probs"] = fix_transition_probs;
  j["freeze_tau"] = freeze_tau;
  j["variables"] = variables;
  j["transforms"] = transforms;
  j["models"] = models;
  j["bvar_lags"] = bvar_lags;
  j["bvar_tightness"] = bvar_tightness;
  j["bvar_decay"] = bvar_decay;
  return j.dump(indent);
}

ModelConfig ModelConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ModelConfig c;
  auto get = [&](const char* key, auto& out) {
    if (j.contains(key)) j.at(key).get_to(out);
  };
  get("P", c.P);
  get("r", c.r);
  get("include_intercept", c.include_intercept);
  get("n_regimes", c.n_regimes);
  get("d0", c.d0);
  get("d1", c.d1);
  get("zeta", c.zeta);
  get("v_gamma", c.v_gamma);
  get("q_sbar", c.q_sbar);
  get("n_draws", c.n_draws);
  get("n_burn", c.n_burn);
  get("thin", c.thin);
  get("ident_var", c.ident_var);
  get("target_var", c.target_var);
  get("fix_transition_probs", c.fix_transition_probs);
  get("freeze_tau", c.freeze_tau);
  get("variables", c.variables);
  get("transforms", c.transforms);
  get("models", c.models);
  get("bvar_lags", c.bvar_lags);
  get("bvar_tightness", c.bvar_tightness);
  get("bvar_decay", c.bvar_decay);
  if (j.contains("label_method"))
    c.label_method = parse_enum<LabelMethod>(
        j.at("label_method"), {{"permute", LabelMethod::permute}, {"reject", LabelMethod::reject}},
        "label_method");
  if (j.contains("ident_stat"))
    c.ident_stat = parse_enum<IdentStat>(
        j.at("ident_stat"),
        {{"intercept", IdentStat::intercept}, {"fitted_mean", IdentStat::fitted_mean}},
        "ident_stat");
  if (j.contains("init_dist"))
    c.init_dist = parse_enum<InitDist>(
        j.at("init_dist"), {{"uniform", InitDist::uniform}, {"ergodic", InitDist::ergodic}},
        "init_dist");
  if (j.contains("realized"))
    c.realized = parse_enum<RealizedConvention>(
        j.at("realized"),
        {{"first_release", RealizedConvention::first_release},
         {"final", RealizedConvention::final_vintage}},
        "realized");
  return c;
}

ModelConfig ModelConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace regimecast
