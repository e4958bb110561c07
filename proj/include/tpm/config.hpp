#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpm/datagen.hpp"
#include "tpm/eval.hpp"
#include "tpm/pipeline.hpp"

namespace tpm {

// Everything a CLI run needs. JSON layout (all keys optional):
//   metapaths, epsilon, C, max_pairs, target_mode, svr_max_iter, svr_tol,
//   lambda, tol, max_iter, solver, closed_form_limit, knn_k, data,
//   generator { n_users, n_apps, n_types, n_classes, types_per_app_min,
//               types_per_app_max, mean_apps_per_user, apps_dispersion, affinity,
//               max_clicks_per_edge, seed },
//   experiment { fractions, repeats, methods, seed, spectral_check,
//                spectral_iterations }
struct RunConfig {
  PipelineConfig pipeline;
  GenConfig generator;
  ExperimentSpec experiment;
  std::optional<std::string> data;

  static RunConfig from_json(const nlohmann::json& j);  // throws ConfigError
  nlohmann::json to_json() const;
};

// Reads a config file; a manifest.json written by the CLI is accepted too
// (its "config" member is used).
nlohmann::json load_config_json(const std::filesystem::path& path);

// Applies "a.b=value"; value is parsed as JSON when possible, else kept as a
// string.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace tpm
