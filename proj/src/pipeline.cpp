#include "tpm/pipeline.hpp"

namespace tpm {

PreparedDataset prepare_dataset(LabeledGraph data, const std::vector<std::string>& metapaths,
                                int threads) {
  if (metapaths.empty()) throw ConfigError("at least one meta-path is required");
  PreparedDataset ds{std::move(data), {}, {}};
  for (const auto& text : metapaths) ds.paths.push_back(parse_metapath(text, ds.data.graph));
  for (const auto& path : ds.paths) {
    // One dense commuting matrix alive at a time.
    ds.pathsims.push_back(
        pathsim(commuting_matrix(ds.data.graph, path, ChainOrder::optimal, threads), threads));
  }
  return ds;
}

FittedWeights fit_weights(const PreparedDataset& ds, const SeedSet& seeds,
                          const PipelineConfig& cfg, std::uint64_t rng_seed) {
  auto pairs = build_training_pairs(ds.data.graph, ds.pathsims, seeds, cfg.max_pairs, rng_seed,
                                    cfg.target_mode);
  FittedWeights out;
  out.n_pairs = pairs.size();
  out.target_scale = rescale_targets(pairs);
  out.beta = fit_svr(pairs, cfg.svr);
  return out;
}

Classification classify(const PreparedDataset& ds, const SeedSet& seeds, const PipelineConfig& cfg,
                        std::uint64_t rng_seed, int threads, CombinedSim* keep) {
  Classification out;
  out.weights = fit_weights(ds, seeds, cfg, rng_seed);
  auto scom = combine_pathsims(ds.pathsims, out.weights.beta, threads);
  const auto y = make_label_matrix(ds.data.graph.target_count(), ds.data.labels.n_classes, seeds);
  out.scores = propagate(scom, y, cfg.propagation, threads);
  out.labels = assign_labels(out.scores);
  if (keep) *keep = std::move(scom);
  return out;
}

SeedSet seeds_from_labels(const LabelAssignment& labels) {
  SeedSet s;
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (labels.labels[i]) {
      s.nodes.push_back(static_cast<NodeIndex>(i));
      s.classes.push_back(*labels.labels[i]);
    }
  }
  return s;
}

}  // namespace tpm
