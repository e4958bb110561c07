#include "tpm/weights.hpp"

#include <algorithm>
#include <iterator>
#include <random>
#include <numeric>

#include <boost/iterator/counting_iterator.hpp>

namespace tpm {

TargetMode parse_target_mode(std::string_view s) {
  if (s == "connections") return TargetMode::connections;
  if (s == "label_agreement") return TargetMode::label_agreement;
  throw ConfigError("target_mode must be \"connections\" or \"label_agreement\", got \"" +
                    std::string(s) + "\"");
}

std::string to_string(TargetMode m) {
  return m == TargetMode::connections ? "connections" : "label_agreement";
}

namespace {

double sparse_row_dot(const SparseMatrix& w, NodeIndex a, NodeIndex b) {
  SparseMatrix::InnerIterator ia(w, a);
  SparseMatrix::InnerIterator ib(w, b);
  double acc = 0.0;
  while (ia && ib) {
    if (ia.index() < ib.index()) {
      ++ia;
    } else if (ib.index() < ia.index()) {
      ++ib;
    } else {
      acc += ia.value() * ib.value();
      ++ia;
      ++ib;
    }
  }
  return acc;
}

}  // namespace

double compute_connection_target(const HinGraph& graph, NodeIndex i, NodeIndex j) {
  const auto n = graph.target_count();
  if (i < 0 || i >= n || j < 0 || j >= n) throw Error("connection target: node index out of range");
  double r = 0.0;
  for (const auto z : graph.target_neighbour_types()) {
    r += sparse_row_dot(graph.relation(graph.target_type(), z).matrix(), i, j);
  }
  return r;
}

std::vector<TrainingPair> build_training_pairs(const HinGraph& graph,
                                               std::span<const PathSimMatrix> pathsims,
                                               const SeedSet& seeds, std::size_t max_pairs,
                                               std::uint64_t rng_seed, TargetMode mode) {
  if (seeds.size() < 2) throw Error("training pairs need at least 2 seeds");
  if (seeds.classes.size() != seeds.nodes.size()) throw Error("seed classes/nodes size mismatch");
  if (pathsims.empty()) throw Error("training pairs need at least one PathSim matrix");
  const auto n = graph.target_count();
  for (const auto& ps : pathsims) {
    if (ps.entries.rows() != n || ps.entries.cols() != n)
      throw Error("PathSim matrix '" + ps.path.name + "' does not match the target node count");
  }

  const std::uint64_t s = seeds.size();
  const std::uint64_t total = s * (s - 1) / 2;
  std::vector<std::uint64_t> picks;
  if (total <= max_pairs) {
    picks.resize(total);
    std::iota(picks.begin(), picks.end(), std::uint64_t{0});
  } else {
    picks.reserve(max_pairs);
    std::mt19937_64 rng(rng_seed);
    std::sample(boost::counting_iterator<std::uint64_t>(0),
                boost::counting_iterator<std::uint64_t>(total), std::back_inserter(picks),
                max_pairs, rng);
  }

  // Linear pair index k enumerates (a, b), a < b, row by row; picks are sorted.
  std::vector<TrainingPair> pairs;
  pairs.reserve(picks.size());
  std::uint64_t a = 0;
  std::uint64_t row_start = 0;
  for (const auto k : picks) {
    while (k >= row_start + (s - 1 - a)) {
      row_start += s - 1 - a;
      ++a;
    }
    const auto b = a + 1 + (k - row_start);
    TrainingPair p;
    p.i = seeds.nodes[a];
    p.j = seeds.nodes[b];
    p.features.reserve(pathsims.size());
    for (const auto& ps : pathsims) p.features.push_back(ps.entries(p.i, p.j));
    p.target = mode == TargetMode::connections
                   ? compute_connection_target(graph, p.i, p.j)
                   : (seeds.classes[a] == seeds.classes[b] ? 1.0 : 0.0);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

double rescale_targets(std::span<TrainingPair> pairs) {
  double top = 0.0;
  for (const auto& p : pairs) top = std::max(top, p.target);
  if (top <= 0.0) return 1.0;
  for (auto& p : pairs) p.target /= top;
  return top;
}

}  // namespace tpm
