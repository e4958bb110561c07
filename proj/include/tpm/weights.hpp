#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpm/error.hpp"
#include "tpm/graph.hpp"
#include "tpm/metapath.hpp"

namespace tpm {

// One regression sample: PathSim features of a target-node pair under every
// meta-path, and the connection target R(i, j).
struct TrainingPair {
  NodeIndex i = 0;
  NodeIndex j = 0;
  std::vector<double> features;
  double target = 0.0;
};

struct SvrConfig {
  double epsilon = 0.2;
  double penalty = 10.0;  // C
  long long max_iter = 10'000'000;
  double tolerance = 1e-3;
};

struct BetaWeights {
  std::vector<double> raw;
  double bias = 0.0;
  std::vector<double> normalized;
  double kkt_residual = 0.0;
  long long iterations = 0;
};

class SvrNotConverged : public Error {
 public:
  SvrNotConverged(BetaWeights best, double residual)
      : Error("SVR did not converge: KKT residual " + std::to_string(residual)),
        best_(std::move(best)),
        residual_(residual) {}
  const BetaWeights& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  BetaWeights best_;
  double residual_;
};

// Soft-margin linear epsilon-SVR,
//   min 1/2 |beta|^2 + C sum(xi + xi*)  s.t. |R - (beta.S + b)| <= eps + xi,
// solved in the dual by SMO with second-order working-set selection. Stops
// when the maximal KKT violation falls below cfg.tolerance.
BetaWeights fit_svr(std::span<const TrainingPair> pairs, const SvrConfig& cfg);

// Clamps negatives to 0 and rescales to sum 1; uniform when nothing is left.
std::vector<double> normalize_weights(std::span<const double> raw);

enum class TargetMode {
  connections,      // shared direct neighbours, weighted by click products
  label_agreement,  // 1 when both seeds share a class, else 0
};

TargetMode parse_target_mode(std::string_view s);
std::string to_string(TargetMode m);

// R(i, j) = sum over types Z linked to the target type of (W_UZ W_UZ^T)(i, j).
double compute_connection_target(const HinGraph& graph, NodeIndex i, NodeIndex j);

struct SeedSet {
  std::vector<NodeIndex> nodes;
  std::vector<int> classes;  // 1-based, parallel to nodes

  std::size_t size() const { return nodes.size(); }
};

// All unordered seed pairs when there are at most max_pairs of them,
// otherwise a uniform sample of max_pairs distinct pairs fixed by rng_seed.
std::vector<TrainingPair> build_training_pairs(const HinGraph& graph,
                                               std::span<const PathSimMatrix> pathsims,
                                               const SeedSet& seeds, std::size_t max_pairs,
                                               std::uint64_t rng_seed,
                                               TargetMode mode = TargetMode::connections);

// Divides every target by the largest one (no-op when all are 0); returns
// the divisor.
double rescale_targets(std::span<TrainingPair> pairs);

}  // namespace tpm
