#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpm/pipeline.hpp"

namespace tpm {

struct Split {
  SeedSet seeds;
  std::vector<NodeIndex> eval;  // labeled non-seed nodes, ascending
};

// Stratified: ceil(fraction * n_labeled) seeds apportioned to classes by
// largest remainder, at least one per nonempty class; uniform within class.
Split split_seeds(const LabelAssignment& truth, double fraction, std::uint64_t rng_seed);

// 100 * correct / |eval|.
double accuracy(std::span<const Assignment> predicted, const LabelAssignment& truth,
                std::span<const NodeIndex> eval);

// Majority vote over the k seeds with the largest S_com(v, seed) > 0; ties in
// similarity go to the lower node index, ties in votes to the lower class.
// Seeds keep their own class; nodes without a positive-similarity seed get
// class 1 flagged unreachable.
std::vector<Assignment> knn_baseline(const CombinedSim& s, const SeedSet& seeds, int k,
                                     int n_classes, int threads = 1);

// Every node gets the most frequent seed class (lowest id on ties).
std::vector<Assignment> majority_baseline(const SeedSet& seeds, std::size_t n, int n_classes);

enum class Method { tpathmine, knn, majority };
Method parse_method(std::string_view s);
std::string to_string(Method m);

struct ExperimentSpec {
  std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5};
  int repeats = 5;
  std::vector<Method> methods = {Method::tpathmine, Method::knn, Method::majority};
  std::uint64_t rng_seed = 7;
  bool spectral_check = false;
  int spectral_iterations = 30;

  void validate() const;  // throws ConfigError
};

// Deterministic per-(fraction, repeat) seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

struct RunRecord {
  Method method;
  std::size_t fraction_index;
  int repeat;  // 1-based
  double accuracy;
};

struct WeightRecord {
  std::size_t fraction_index;
  int repeat;
  BetaWeights beta;
  std::size_t n_pairs;
};

struct ExperimentReport {
  std::vector<double> fractions;
  std::vector<Method> methods;
  std::vector<std::string> path_names;
  std::vector<RunRecord> runs;
  std::vector<WeightRecord> weights;
  std::vector<double> spectral_radii;  // one per fitted run when checked
  double seconds = 0.0;                // wall clock, never written to report files

  double mean(Method m, std::size_t fraction_index) const;
  double stddev(Method m, std::size_t fraction_index) const;  // sample std, 0 for one repeat
  std::vector<double> accuracies(Method m, std::size_t fraction_index) const;
  // Mean normalized weight of each meta-path over all fitted runs.
  std::vector<double> mean_normalized_weights() const;
};

ExperimentReport run_experiment(const PreparedDataset& ds, const PipelineConfig& cfg,
                                const ExperimentSpec& spec, int threads = 1);

struct SweepRow {
  std::string param;
  double value;
  double fraction;
  Method method;
  double mean_accuracy;
};

// One run_experiment per value of "lambda" or "epsilon"; everything else fixed.
std::vector<SweepRow> sweep_parameter(const PreparedDataset& ds, const PipelineConfig& cfg,
                                      const ExperimentSpec& spec, const std::string& param,
                                      std::span<const double> values, int threads = 1);

}  // namespace tpm
