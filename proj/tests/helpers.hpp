#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpm/graph.hpp"
#include "tpm/metapath.hpp"

namespace tpm::testing {

struct Edge {
  std::string src, dst;
  double w;
};

// U/A/T graph with the given node counts; ids are u0.., a0.., t0...
inline LabeledGraph uat_graph(int n_u, int n_a, int n_t, const std::vector<Edge>& edges,
                              const std::vector<std::pair<int, int>>& labels = {}) {
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n_u; ++i) nodes.push_back({"u" + std::to_string(i), "U", std::nullopt});
  for (int i = 0; i < n_a; ++i) nodes.push_back({"a" + std::to_string(i), "A", std::nullopt});
  for (int i = 0; i < n_t; ++i) nodes.push_back({"t" + std::to_string(i), "T", std::nullopt});
  for (const auto& [u, c] : labels) nodes[static_cast<std::size_t>(u)].label = c;
  std::vector<EdgeRecord> recs;
  for (const auto& e : edges) recs.push_back({e.src, e.dst, e.w});
  return build_graph(Schema::user_app_type(), nodes, recs);
}

// Random U/A/T graph: each possible edge present with probability `density`,
// integer weights in 1..max_w.
inline LabeledGraph random_uat_graph(std::mt19937_64& rng, int max_nodes, int max_w,
                                     double density) {
  std::uniform_int_distribution<int> count(1, max_nodes);
  const int nu = count(rng), na = count(rng), nt = count(rng);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> weight(1, max_w);
  std::vector<Edge> edges;
  auto add = [&](char a, int na_, char b, int nb_) {
    for (int i = 0; i < na_; ++i)
      for (int j = 0; j < nb_; ++j)
        if (keep(rng))
          edges.push_back({std::string(1, a) + std::to_string(i), std::string(1, b) + std::to_string(j),
                           static_cast<double>(weight(rng))});
  };
  add('u', nu, 'a', na);
  add('a', na, 't', nt);
  add('u', nu, 't', nt);
  return uat_graph(nu, na, nt, edges);
}

// Sum over every concrete node sequence following the path of the product of
// edge weights, by depth-first enumeration over adjacency lists.
inline Eigen::MatrixXd enumerate_paths(const HinGraph& g, const MetaPath& path) {
  const auto n = g.node_count(path.types.front());
  const auto m = g.node_count(path.types.back());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, m);
  std::vector<std::vector<std::vector<std::pair<int, double>>>> adj;
  for (std::size_t k = 0; k + 1 < path.types.size(); ++k) {
    const auto& r = g.relation(path.types[k], path.types[k + 1]).matrix();
    std::vector<std::vector<std::pair<int, double>>> a(static_cast<std::size_t>(r.rows()));
    for (int i = 0; i < r.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(r, i); it; ++it)
        a[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(it.col()), it.value());
    adj.push_back(std::move(a));
  }
  std::function<void(int, std::size_t, int, double)> walk = [&](int start, std::size_t step,
                                                                 int node, double w) {
    if (step == adj.size()) {
      out(start, node) += w;
      return;
    }
    for (const auto& [next, ew] : adj[step][static_cast<std::size_t>(node)])
      walk(start, step + 1, next, w * ew);
  };
  for (int i = 0; i < n; ++i) walk(i, 0, i, 1.0);
  return out;
}

}  // namespace tpm::testing
