#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpm/graph.hpp"
#include "tpm/metapath.hpp"
#include "tpm/propagate.hpp"
#include "tpm/weights.hpp"

namespace tpm {

struct PipelineConfig {
  std::vector<std::string> metapaths = default_metapaths();
  SvrConfig svr;
  std::size_t max_pairs = 10'000;
  TargetMode target_mode = TargetMode::connections;
  PropagationConfig propagation;
  int knn_k = 5;
};

// Graph, labels and one PathSim matrix per meta-path. PathSims depend only
// on the graph, so experiments compute them once and reuse them per split.
struct PreparedDataset {
  LabeledGraph data;
  std::vector<MetaPath> paths;
  std::vector<PathSimMatrix> pathsims;
};

PreparedDataset prepare_dataset(LabeledGraph data, const std::vector<std::string>& metapaths,
                                int threads = 1);

struct FittedWeights {
  BetaWeights beta;
  std::size_t n_pairs = 0;
  double target_scale = 1.0;
};

// Training pairs among the seeds, targets rescaled to [0,1], then eps-SVR.
FittedWeights fit_weights(const PreparedDataset& ds, const SeedSet& seeds,
                          const PipelineConfig& cfg, std::uint64_t rng_seed);

struct Classification {
  FittedWeights weights;
  ScoreMatrix scores;
  std::vector<Assignment> labels;
};

// fit_weights, fused normalize+combine, propagation and argmax. The combined
// operator is released before returning unless `keep` is given.
Classification classify(const PreparedDataset& ds, const SeedSet& seeds, const PipelineConfig& cfg,
                        std::uint64_t rng_seed, int threads = 1, CombinedSim* keep = nullptr);

// Seeds from the labeled target nodes of a LabelAssignment.
SeedSet seeds_from_labels(const LabelAssignment& labels);

}  // namespace tpm
