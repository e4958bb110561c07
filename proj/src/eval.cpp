#include "tpm/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "tpm/parallel.hpp"

namespace tpm {

Split split_seeds(const LabelAssignment& truth, double fraction, std::uint64_t rng_seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("seed fraction must lie in (0,1)");
  const int p = truth.n_classes;
  std::vector<std::vector<NodeIndex>> members(static_cast<std::size_t>(p));
  std::size_t n = 0;
  for (std::size_t i = 0; i < truth.labels.size(); ++i) {
    if (!truth.labels[i]) continue;
    const int c = *truth.labels[i];
    if (c < 1 || c > p) throw Error("label out of range in split_seeds");
    members[static_cast<std::size_t>(c - 1)].push_back(static_cast<NodeIndex>(i));
    ++n;
  }
  const auto total =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (total == 0) throw Error("seed fraction " + std::to_string(fraction) + " yields 0 seeds");

  // Largest-remainder apportionment of `total` over classes.
  std::vector<std::size_t> quota(members.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const double exact =
        static_cast<double>(total) * static_cast<double>(members[c].size()) / static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total && r < remainders.size(); ++r, ++assigned) {
    ++quota[remainders[r].second];
  }

  std::mt19937_64 rng(rng_seed);
  Split split;
  std::vector<char> is_seed(truth.labels.size(), 0);
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto pool = members[c];
    if (pool.empty()) continue;
    const auto q = std::min(std::max<std::size_t>(quota[c], 1), pool.size());
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t k = 0; k < q; ++k) is_seed[static_cast<std::size_t>(pool[k])] = 1;
  }
  for (std::size_t i = 0; i < truth.labels.size(); ++i) {
    if (!truth.labels[i]) continue;
    if (is_seed[i]) {
      split.seeds.nodes.push_back(static_cast<NodeIndex>(i));
      split.seeds.classes.push_back(*truth.labels[i]);
    } else {
      split.eval.push_back(static_cast<NodeIndex>(i));
    }
  }
  return split;
}

double accuracy(std::span<const Assignment> predicted, const LabelAssignment& truth,
                std::span<const NodeIndex> eval) {
  if (eval.empty()) throw Error("accuracy: empty evaluation set");
  std::size_t correct = 0;
  for (const auto v : eval) {
    const auto i = static_cast<std::size_t>(v);
    if (i >= predicted.size() || i >= truth.labels.size() || !truth.labels[i])
      throw Error("accuracy: evaluation node without prediction or label");
    if (predicted[i].label == *truth.labels[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(eval.size());
}

std::vector<Assignment> knn_baseline(const CombinedSim& s, const SeedSet& seeds, int k,
                                     int n_classes, int threads) {
  if (k < 1) throw Error("knn: k must be >= 1");
  if (seeds.size() == 0) throw Error("knn: no seeds");
  const auto n = s.entries.rows();
  std::vector<Assignment> out(static_cast<std::size_t>(n));
  std::vector<int> seed_class(static_cast<std::size_t>(n), 0);
  for (std::size_t t = 0; t < seeds.size(); ++t) {
    seed_class[static_cast<std::size_t>(seeds.nodes[t])] = seeds.classes[t];
  }
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t b, std::size_t e) {
    std::vector<std::pair<double, std::size_t>> cand;
    std::vector<int> votes(static_cast<std::size_t>(n_classes) + 1);
    for (std::size_t v = b; v < e; ++v) {
      if (seed_class[v] != 0) {
        out[v].label = seed_class[v];
        continue;
      }
      cand.clear();
      for (std::size_t t = 0; t < seeds.size(); ++t) {
        const double sim = s.entries(static_cast<Eigen::Index>(v), seeds.nodes[t]);
        if (sim > 0.0) cand.emplace_back(sim, t);
      }
      if (cand.empty()) {
        out[v] = {1, false, true};
        continue;
      }
      const auto take = std::min(cand.size(), static_cast<std::size_t>(k));
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(),
                        [&](const auto& x, const auto& y) {
                          if (x.first != y.first) return x.first > y.first;
                          return seeds.nodes[x.second] < seeds.nodes[y.second];
                        });
      std::fill(votes.begin(), votes.end(), 0);
      for (std::size_t r = 0; r < take; ++r) ++votes[static_cast<std::size_t>(seeds.classes[cand[r].second])];
      int best = 1;
      for (int c = 2; c <= n_classes; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
      }
      out[v].label = best;
    }
  });
  return out;
}

std::vector<Assignment> majority_baseline(const SeedSet& seeds, std::size_t n, int n_classes) {
  if (seeds.size() == 0) throw Error("majority baseline: no seeds");
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes) + 1, 0);
  for (const int c : seeds.classes) ++counts.at(static_cast<std::size_t>(c));
  int best = 1;
  for (int c = 2; c <= n_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
  }
  return std::vector<Assignment>(n, Assignment{best, false, false});
}

Method parse_method(std::string_view s) {
  if (s == "tpathmine") return Method::tpathmine;
  if (s == "knn") return Method::knn;
  if (s == "majority") return Method::majority;
  throw ConfigError("unknown method \"" + std::string(s) + "\"");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::tpathmine: return "tpathmine";
    case Method::knn: return "knn";
    case Method::majority: return "majority";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (fractions.empty()) throw ConfigError("experiment: no seed fractions");
  for (const double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("experiment: fractions must lie in (0,1)");
  }
  if (repeats < 1) throw ConfigError("experiment: repeats must be >= 1");
  if (methods.empty()) throw ConfigError("experiment: no methods");
  if (spectral_iterations < 1) throw ConfigError("experiment: spectral_iterations must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

std::vector<double> ExperimentReport::accuracies(Method m, std::size_t fraction_index) const {
  std::vector<double> out;
  for (const auto& r : runs) {
    if (r.method == m && r.fraction_index == fraction_index) out.push_back(r.accuracy);
  }
  return out;
}

double ExperimentReport::mean(Method m, std::size_t fraction_index) const {
  const auto acc = accuracies(m, fraction_index);
  if (acc.empty()) return 0.0;
  return std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
}

double ExperimentReport::stddev(Method m, std::size_t fraction_index) const {
  const auto acc = accuracies(m, fraction_index);
  if (acc.size() < 2) return 0.0;
  const double mu = mean(m, fraction_index);
  double ss = 0.0;
  for (const double a : acc) ss += (a - mu) * (a - mu);
  return std::sqrt(ss / static_cast<double>(acc.size() - 1));
}

std::vector<double> ExperimentReport::mean_normalized_weights() const {
  std::vector<double> out(path_names.size(), 0.0);
  if (weights.empty()) return out;
  for (const auto& w : weights) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w.beta.normalized[k];
  }
  for (auto& v : out) v /= static_cast<double>(weights.size());
  return out;
}

namespace {

bool uses(const ExperimentSpec& spec, Method m) {
  return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
}

}  // namespace

ExperimentReport run_experiment(const PreparedDataset& ds, const PipelineConfig& cfg,
                                const ExperimentSpec& spec, int threads) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto& truth = ds.data.labels;
  const auto n = static_cast<std::size_t>(ds.data.graph.target_count());
  const int p = truth.n_classes;

  ExperimentReport report;
  report.fractions = spec.fractions;
  report.methods = spec.methods;
  for (const auto& path : ds.paths) report.path_names.push_back(path.name);

  const bool need_fit = uses(spec, Method::tpathmine) || uses(spec, Method::knn);
  for (std::size_t fi = 0; fi < spec.fractions.size(); ++fi) {
    for (int r = 1; r <= spec.repeats; ++r) {
      const auto run_seed = derive_seed(spec.rng_seed, fi, static_cast<std::uint64_t>(r));
      try {
        const auto split = split_seeds(truth, spec.fractions[fi], run_seed);
        std::vector<std::pair<Method, double>> acc;
        if (need_fit) {
          CombinedSim scom;
          const auto result = classify(ds, split.seeds, cfg, derive_seed(run_seed, 1), threads,
                                       &scom);
          report.weights.push_back({fi, r, result.weights.beta, result.weights.n_pairs});
          if (spec.spectral_check) {
            report.spectral_radii.push_back(
                spectral_radius_estimate(scom.entries, spec.spectral_iterations, threads));
          }
          if (uses(spec, Method::tpathmine)) {
            acc.emplace_back(Method::tpathmine, accuracy(result.labels, truth, split.eval));
          }
          if (uses(spec, Method::knn)) {
            const auto knn = knn_baseline(scom, split.seeds, cfg.knn_k, p, threads);
            acc.emplace_back(Method::knn, accuracy(knn, truth, split.eval));
          }
        }
        if (uses(spec, Method::majority)) {
          acc.emplace_back(Method::majority,
                           accuracy(majority_baseline(split.seeds, n, p), truth, split.eval));
        }
        for (const auto m : spec.methods) {
          for (const auto& [am, a] : acc) {
            if (am == m) report.runs.push_back({m, fi, r, a});
          }
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw Error("fraction " + std::to_string(spec.fractions[fi]) + ", repeat " +
                    std::to_string(r) + ": " + e.what());
      }
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SweepRow> sweep_parameter(const PreparedDataset& ds, const PipelineConfig& cfg,
                                      const ExperimentSpec& spec, const std::string& param,
                                      std::span<const double> values, int threads) {
  if (param != "lambda" && param != "epsilon")
    throw ConfigError("sweep: unknown parameter \"" + param + "\" (expected lambda or epsilon)");
  std::vector<SweepRow> rows;
  for (const double v : values) {
    auto c = cfg;
    if (param == "lambda") {
      if (!(v > 0.0)) throw ConfigError("sweep: lambda must be > 0");
      c.propagation.lambda = v;
    } else {
      if (!(v >= 0.0)) throw ConfigError("sweep: epsilon must be >= 0");
      c.svr.epsilon = v;
    }
    const auto report = run_experiment(ds, c, spec, threads);
    for (std::size_t fi = 0; fi < report.fractions.size(); ++fi) {
      for (const auto m : report.methods) {
        rows.push_back({param, v, report.fractions[fi], m, report.mean(m, fi)});
      }
    }
  }
  return rows;
}

}  // namespace tpm
