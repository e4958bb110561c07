#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tpm/graph.hpp"
#include "tpm/io.hpp"

namespace tpm {

struct GenConfig {
  int n_users = 1000;
  int n_apps = 200;
  int n_types = 40;
  int n_classes = 6;
  int types_per_app_min = 1;
  int types_per_app_max = 8;
  double mean_apps_per_user = 12.0;
  double apps_dispersion = 6.0;  // gamma-Poisson shape for app counts; 0 = Poisson
  double affinity = 4.0;  // kappa; class signal weight is kappa / (1 + kappa)
  int max_clicks_per_edge = 10;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

// Raw records in the on-disk layout: users u*, apps a*, types t* in the
// {U, A, T} schema. Labels are kept out of nodes; truth holds every user.
struct GeneratedRecords {
  Schema schema;
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  std::vector<IdLabel> truth;
};

// Users draw a class uniformly (dealt so class sizes differ by at most one),
// then apps through a class-dependent type preference; user-type weights are
// the per-type click totals plus direct lookups (one per four clicks on
// average). Deterministic in cfg.seed.
GeneratedRecords generate_records(const GenConfig& cfg);

// Graph plus ground-truth labels for every user.
LabeledGraph generate_dataset(const GenConfig& cfg);

// nodes.csv, edges.csv, schema.json, truth.csv
void write_dataset(const std::filesystem::path& dir, const GeneratedRecords& records);

}  // namespace tpm
