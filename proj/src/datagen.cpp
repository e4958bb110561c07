#include "tpm/datagen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace tpm {

void GenConfig::validate() const {
  if (n_users < 1 || n_apps < 1 || n_types < 1)
    throw ConfigError("generator: n_users, n_apps and n_types must be >= 1");
  if (n_classes < 2) throw ConfigError("generator: n_classes must be >= 2");
  if (types_per_app_min < 1 || types_per_app_max < types_per_app_min)
    throw ConfigError("generator: need 1 <= types_per_app_min <= types_per_app_max");
  if (types_per_app_max > n_types)
    throw ConfigError("generator: types_per_app_max exceeds n_types");
  if (!(mean_apps_per_user > 0.0)) throw ConfigError("generator: mean_apps_per_user must be > 0");
  if (!(apps_dispersion >= 0.0)) throw ConfigError("generator: apps_dispersion must be >= 0");
  if (!(affinity >= 0.0)) throw ConfigError("generator: affinity must be >= 0");
  if (max_clicks_per_edge < 1) throw ConfigError("generator: max_clicks_per_edge must be >= 1");
}

namespace {

constexpr int kTypeRetries = 1000;

std::string user_id(int u) { return "u" + std::to_string(u); }
std::string app_id(int a) { return "a" + std::to_string(a); }
std::string type_id(int t) { return "t" + std::to_string(t); }

// Uniform over all types mixed with a uniform distribution over the class's
// favoured block: 2*floor(T/C) consecutive types of a shuffled circular order,
// so neighbouring classes share half of their favoured types.
std::vector<std::discrete_distribution<int>> class_preferences(const GenConfig& cfg,
                                                               std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(cfg.n_types));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t stride =
      std::max<std::size_t>(1, perm.size() / static_cast<std::size_t>(cfg.n_classes));
  const std::size_t block = std::min(perm.size(), 2 * stride);
  std::vector<std::vector<int>> favoured(static_cast<std::size_t>(cfg.n_classes));
  for (std::size_t c = 0; c < favoured.size(); ++c) {
    for (std::size_t k = 0; k < block; ++k)
      favoured[c].push_back(perm[(c * stride + k) % perm.size()]);
  }
  const double sharp = cfg.affinity / (1.0 + cfg.affinity);
  std::vector<std::discrete_distribution<int>> out;
  for (const auto& fav : favoured) {
    std::vector<double> w(static_cast<std::size_t>(cfg.n_types),
                          (1.0 - sharp) / static_cast<double>(cfg.n_types));
    for (const int t : fav) w[static_cast<std::size_t>(t)] += sharp / static_cast<double>(fav.size());
    out.emplace_back(w.begin(), w.end());
  }
  return out;
}

}  // namespace

GeneratedRecords generate_records(const GenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  GeneratedRecords out;
  out.schema = Schema::user_app_type();
  out.schema.n_classes = cfg.n_classes;

  for (int u = 0; u < cfg.n_users; ++u) out.nodes.push_back({user_id(u), "U", std::nullopt});
  for (int a = 0; a < cfg.n_apps; ++a) out.nodes.push_back({app_id(a), "A", std::nullopt});
  for (int t = 0; t < cfg.n_types; ++t) out.nodes.push_back({type_id(t), "T", std::nullopt});

  // App memberships.
  std::vector<std::vector<int>> types_of_app(static_cast<std::size_t>(cfg.n_apps));
  std::vector<std::vector<int>> apps_of_type(static_cast<std::size_t>(cfg.n_types));
  // Each app takes the k least-used types so far (random tie-break), which keeps
  // type popularity level across the catalogue.
  std::vector<int> order(static_cast<std::size_t>(cfg.n_types));
  std::vector<std::uint64_t> tie(order.size());
  std::uniform_int_distribution<int> type_count(cfg.types_per_app_min, cfg.types_per_app_max);
  for (int a = 0; a < cfg.n_apps; ++a) {
    const int k = type_count(rng);
    std::iota(order.begin(), order.end(), 0);
    for (auto& x : tie) x = rng();
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      const auto ux = apps_of_type[static_cast<std::size_t>(x)].size();
      const auto uy = apps_of_type[static_cast<std::size_t>(y)].size();
      if (ux != uy) return ux < uy;
      return tie[static_cast<std::size_t>(x)] < tie[static_cast<std::size_t>(y)];
    });
    auto& types = types_of_app[static_cast<std::size_t>(a)];
    types.assign(order.begin(), order.begin() + k);
    std::sort(types.begin(), types.end());
    for (const int t : types) {
      apps_of_type[static_cast<std::size_t>(t)].push_back(a);
      out.edges.push_back({app_id(a), type_id(t), 1.0});
    }
  }

  auto prefs = class_preferences(cfg, rng);
  // Every user's class is uniform; the shuffled round-robin deal keeps class
  // sizes within one of each other.
  std::vector<int> classes(static_cast<std::size_t>(cfg.n_users));
  for (std::size_t u = 0; u < classes.size(); ++u)
    classes[u] = 1 + static_cast<int>(u % static_cast<std::size_t>(cfg.n_classes));
  std::shuffle(classes.begin(), classes.end(), rng);
  auto app_count = [&] {
    double mean = cfg.mean_apps_per_user;
    if (cfg.apps_dispersion > 0.0) {
      std::gamma_distribution<double> g(cfg.apps_dispersion, mean / cfg.apps_dispersion);
      mean = g(rng);
    }
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<int>(mean)(rng);
  };
  std::uniform_int_distribution<int> clicks_dist(1, cfg.max_clicks_per_edge);

  for (int u = 0; u < cfg.n_users; ++u) {
    const int cls = classes[static_cast<std::size_t>(u)];
    out.truth.push_back({user_id(u), cls});
    auto& pref = prefs[static_cast<std::size_t>(cls - 1)];

    auto draw_type = [&] {
      for (int attempt = 0; attempt < kTypeRetries; ++attempt) {
        const int t = pref(rng);
        if (!apps_of_type[static_cast<std::size_t>(t)].empty()) return t;
      }
      throw Error("generator: could not draw an application type that has apps");
    };

    const int wanted = std::min(std::max(1, app_count()), cfg.n_apps);
    std::vector<int> apps;
    for (int attempt = 0; static_cast<int>(apps.size()) < wanted && attempt < 100 * wanted;
         ++attempt) {
      const auto& pool = apps_of_type[static_cast<std::size_t>(draw_type())];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const int a = pool[pick(rng)];
      if (std::find(apps.begin(), apps.end(), a) == apps.end()) apps.push_back(a);
    }

    std::map<int, long long> type_weight;
    long long total_clicks = 0;
    for (const int a : apps) {
      const int clicks = clicks_dist(rng);
      total_clicks += clicks;
      out.edges.push_back({user_id(u), app_id(a), static_cast<double>(clicks)});
      for (const int t : types_of_app[static_cast<std::size_t>(a)]) type_weight[t] += clicks;
    }
    std::poisson_distribution<int> lookups(static_cast<double>(total_clicks) / 4.0);
    for (int l = lookups(rng); l > 0; --l) type_weight[pref(rng)] += 1;
    for (const auto& [t, w] : type_weight) {
      out.edges.push_back({user_id(u), type_id(t), static_cast<double>(w)});
    }
  }
  return out;
}

LabeledGraph generate_dataset(const GenConfig& cfg) {
  const auto rec = generate_records(cfg);
  auto lg = build_graph(rec.schema, rec.nodes, rec.edges);
  for (const auto& row : rec.truth) {
    lg.labels.labels[static_cast<std::size_t>(lg.graph.find(row.id)->index)] = row.label;
  }
  return lg;
}

void write_dataset(const std::filesystem::path& dir, const GeneratedRecords& records) {
  std::filesystem::create_directories(dir);
  write_nodes_csv(dir / "nodes.csv", records.nodes);
  write_edges_csv(dir / "edges.csv", records.edges);
  write_schema_json(dir / "schema.json", records.schema);
  write_id_labels_csv(dir / "truth.csv", records.truth);
}

}  // namespace tpm
