#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tpm/graph.hpp"

namespace tpm {

// Type sequence starting and ending at the target type, e.g. "U-A-T-A-U".
struct MetaPath {
  std::vector<TypeId> types;
  std::string name;

  std::size_t length() const { return types.size(); }
  bool palindromic() const;
};

MetaPath parse_metapath(std::string_view text, const HinGraph& graph);

// The four user paths: U-A-U, U-T-U, U-A-T-A-U, U-T-A-T-U.
std::vector<std::string> default_metapaths();

// Weighted path-instance counts between target nodes.
struct CommutingMatrix {
  MetaPath path;
  Eigen::MatrixXd entries;
};

// Single precision storage: values live in [0,1] and a 10k-node matrix is
// 400 MB instead of 800 MB.
using SimMatrix = Eigen::MatrixXf;

struct PathSimMatrix {
  MetaPath path;
  SimMatrix entries;
};

enum class ChainOrder {
  optimal,        // matrix-chain DP over relation dimensions
  left_to_right,  // ((R1 R2) R3) ...
  right_to_left,  // ... (R_{k-1} R_k)
};

// Product of the relation matrices along `path`. Inner products are
// sparse-sparse; the outermost product writes a dense n x n result row by
// row, so output is identical for any thread count.
CommutingMatrix commuting_matrix(const HinGraph& graph, const MetaPath& path,
                                 ChainOrder order = ChainOrder::optimal, int threads = 1);

// s(i,j) = 2 M(i,j) / (M(i,i) + M(j,j)), and 0 where the denominator is 0.
// Throws Error when M is not symmetric.
PathSimMatrix pathsim(const CommutingMatrix& m, int threads = 1);

}  // namespace tpm
