#include "tpm/config.hpp"

#include <set>

#include "tpm/io.hpp"

namespace tpm {
namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key \"" + where + key + "\"");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + where + key + "\" has the wrong type");
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j,
                 {"metapaths", "epsilon", "C", "max_pairs", "target_mode", "svr_max_iter",
                  "svr_tol", "lambda", "tol", "max_iter", "solver", "closed_form_limit", "knn_k",
                  "data", "generator", "experiment"},
                 "");
  RunConfig c;
  auto& p = c.pipeline;
  read(j, "metapaths", p.metapaths);
  read(j, "epsilon", p.svr.epsilon);
  read(j, "C", p.svr.penalty);
  read(j, "max_pairs", p.max_pairs);
  read(j, "svr_max_iter", p.svr.max_iter);
  read(j, "svr_tol", p.svr.tolerance);
  read(j, "lambda", p.propagation.lambda);
  read(j, "tol", p.propagation.tol);
  read(j, "max_iter", p.propagation.max_iter);
  read(j, "closed_form_limit", p.propagation.closed_form_limit);
  read(j, "knn_k", p.knn_k);
  if (j.contains("target_mode")) {
    std::string s;
    read(j, "target_mode", s);
    p.target_mode = parse_target_mode(s);
  }
  if (j.contains("solver")) {
    std::string s;
    read(j, "solver", s);
    p.propagation.solver = parse_solver(s);
  }
  if (j.contains("data") && !j.at("data").is_null()) {
    std::string s;
    read(j, "data", s);
    c.data = s;
  }

  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    reject_unknown(g,
                   {"n_users", "n_apps", "n_types", "n_classes", "types_per_app_min",
                    "types_per_app_max", "mean_apps_per_user", "apps_dispersion", "affinity",
                    "max_clicks_per_edge", "seed"},
                   "generator.");
    auto& gc = c.generator;
    const std::string w = "generator.";
    read(g, "n_users", gc.n_users, w);
    read(g, "n_apps", gc.n_apps, w);
    read(g, "n_types", gc.n_types, w);
    read(g, "n_classes", gc.n_classes, w);
    read(g, "types_per_app_min", gc.types_per_app_min, w);
    read(g, "types_per_app_max", gc.types_per_app_max, w);
    read(g, "mean_apps_per_user", gc.mean_apps_per_user, w);
    read(g, "apps_dispersion", gc.apps_dispersion, w);
    read(g, "affinity", gc.affinity, w);
    read(g, "max_clicks_per_edge", gc.max_clicks_per_edge, w);
    read(g, "seed", gc.seed, w);
  }

  if (j.contains("experiment")) {
    const auto& e = j.at("experiment");
    reject_unknown(e, {"fractions", "repeats", "methods", "seed", "spectral_check",
                       "spectral_iterations"},
                   "experiment.");
    auto& ec = c.experiment;
    const std::string w = "experiment.";
    read(e, "fractions", ec.fractions, w);
    read(e, "repeats", ec.repeats, w);
    read(e, "seed", ec.rng_seed, w);
    read(e, "spectral_check", ec.spectral_check, w);
    read(e, "spectral_iterations", ec.spectral_iterations, w);
    if (e.contains("methods")) {
      std::vector<std::string> names;
      read(e, "methods", names, w);
      ec.methods.clear();
      for (const auto& m : names) ec.methods.push_back(parse_method(m));
    }
  }

  if (p.metapaths.empty()) throw ConfigError("metapaths must not be empty");
  if (!(p.svr.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (!(p.svr.penalty > 0.0)) throw ConfigError("C must be > 0");
  if (p.max_pairs < 1) throw ConfigError("max_pairs must be >= 1");
  if (p.svr.max_iter < 1) throw ConfigError("svr_max_iter must be >= 1");
  if (!(p.svr.tolerance > 0.0)) throw ConfigError("svr_tol must be > 0");
  if (!(p.propagation.lambda > 0.0)) throw ConfigError("lambda must be > 0");
  if (!(p.propagation.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (p.propagation.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (p.knn_k < 1) throw ConfigError("knn_k must be >= 1");
  c.generator.validate();
  c.experiment.validate();
  return c;
}

json RunConfig::to_json() const {
  const auto& p = pipeline;
  std::vector<std::string> methods;
  for (const auto m : experiment.methods) methods.push_back(to_string(m));
  json j = {
      {"metapaths", p.metapaths},
      {"epsilon", p.svr.epsilon},
      {"C", p.svr.penalty},
      {"max_pairs", p.max_pairs},
      {"target_mode", to_string(p.target_mode)},
      {"svr_max_iter", p.svr.max_iter},
      {"svr_tol", p.svr.tolerance},
      {"lambda", p.propagation.lambda},
      {"tol", p.propagation.tol},
      {"max_iter", p.propagation.max_iter},
      {"solver", to_string(p.propagation.solver)},
      {"closed_form_limit", p.propagation.closed_form_limit},
      {"knn_k", p.knn_k},
      {"generator",
       {{"n_users", generator.n_users},
        {"n_apps", generator.n_apps},
        {"n_types", generator.n_types},
        {"n_classes", generator.n_classes},
        {"types_per_app_min", generator.types_per_app_min},
        {"types_per_app_max", generator.types_per_app_max},
        {"mean_apps_per_user", generator.mean_apps_per_user},
        {"apps_dispersion", generator.apps_dispersion},
        {"affinity", generator.affinity},
        {"max_clicks_per_edge", generator.max_clicks_per_edge},
        {"seed", generator.seed}}},
      {"experiment",
       {{"fractions", experiment.fractions},
        {"repeats", experiment.repeats},
        {"methods", methods},
        {"seed", experiment.rng_seed},
        {"spectral_check", experiment.spectral_check},
        {"spectral_iterations", experiment.spectral_iterations}}},
  };
  j["data"] = data ? json(*data) : json(nullptr);
  return j;
}

json load_config_json(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.filename().string() + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("outputs")) return j.at("config");
  return j;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got \"" + assignment + "\"");
  const auto key = assignment.substr(0, eq);
  const auto text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("--set: malformed key \"" + key + "\"");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

}  // namespace tpm
