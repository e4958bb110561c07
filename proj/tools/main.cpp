#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "tpm/config.hpp"
#include "tpm/datagen.hpp"
#include "tpm/eval.hpp"
#include "tpm/io.hpp"
#include "tpm/pipeline.hpp"
#include "tpm/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  int threads = 1;
  std::string out;
  std::string data;
  std::string seeds;
  std::string dump_pathsim;
  std::string emit_plots;
  std::string param;
  std::vector<double> values;
};

void log(const std::string& msg) { std::cerr << "[tpathmine] " << msg << '\n'; }

tpm::RunConfig resolve_config(const Options& o, json& resolved) {
  json j = o.config_path.empty() ? json::object() : tpm::load_config_json(o.config_path);
  for (const auto& s : o.sets) tpm::apply_override(j, s);
  auto cfg = tpm::RunConfig::from_json(j);
  if (!o.data.empty()) cfg.data = o.data;
  resolved = cfg.to_json();
  return cfg;
}

std::vector<fs::path> dataset_inputs(const fs::path& dir) {
  std::vector<fs::path> in = {dir / "nodes.csv", dir / "edges.csv", dir / "schema.json"};
  if (fs::exists(dir / "truth.csv")) in.push_back(dir / "truth.csv");
  return in;
}

fs::path require_data(const tpm::RunConfig& cfg) {
  if (!cfg.data) throw tpm::ConfigError("no dataset: pass --data or set \"data\" in the config");
  const fs::path dir = *cfg.data;
  if (!fs::is_directory(dir)) throw tpm::ConfigError("data directory not found: " + dir.string());
  return dir;
}

tpm::SeedSet read_seeds(const fs::path& path, const tpm::LabeledGraph& lg) {
  tpm::SeedSet seeds;
  std::set<tpm::NodeIndex> seen;
  for (const auto& row : tpm::read_id_labels_csv(path)) {
    const auto ref = lg.graph.find(row.id);
    if (!ref || ref->type != lg.graph.target_type())
      throw tpm::Error(path.filename().string() + ": '" + row.id + "' is not a target-type node");
    if (row.label < 1 || row.label > lg.labels.n_classes)
      throw tpm::Error(path.filename().string() + ": label out of range for '" + row.id + "'");
    if (!seen.insert(ref->index).second)
      throw tpm::Error(path.filename().string() + ": duplicate seed '" + row.id + "'");
    seeds.nodes.push_back(ref->index);
    seeds.classes.push_back(row.label);
  }
  return seeds;
}

void write_out(const fs::path& dir, const std::string& name, const std::string& contents,
               tpm::cli::Manifest& m) {
  tpm::write_file(dir / name, contents);
  m.outputs.emplace_back(name);
}

void write_pathsims(const fs::path& dir, const tpm::PreparedDataset& ds, const fs::path& out_root,
                    tpm::cli::Manifest& m) {
  fs::create_directories(dir);
  for (const auto& ps : ds.pathsims) {
    const auto name = "pathsim_" + ps.path.name + ".csv";
    tpm::write_file(dir / name, tpm::format_pathsim_csv(ps));
    if (fs::equivalent(dir, out_root)) m.outputs.emplace_back(name);
  }
}

// Seeds from --seeds, or from labels already present in nodes.csv.
struct SeededData {
  tpm::PreparedDataset ds;
  tpm::SeedSet seeds;
};

SeededData load_seeded(const Options& o, const tpm::RunConfig& cfg, tpm::cli::Manifest& m) {
  const auto dir = require_data(cfg);
  m.inputs = dataset_inputs(dir);
  auto lg = tpm::load_dataset(dir, /*with_truth=*/false);
  tpm::SeedSet seeds;
  if (!o.seeds.empty()) {
    seeds = read_seeds(o.seeds, lg);
    m.inputs.emplace_back(o.seeds);
  } else {
    seeds = tpm::seeds_from_labels(lg.labels);
  }
  if (seeds.size() < 2) throw tpm::Error("at least 2 labeled seeds are required");
  auto ds = tpm::prepare_dataset(std::move(lg), cfg.pipeline.metapaths, o.threads);
  return {std::move(ds), std::move(seeds)};
}

tpm::PreparedDataset load_experiment_data(const tpm::RunConfig& cfg, int threads,
                                          tpm::cli::Manifest& m) {
  tpm::LabeledGraph lg;
  if (cfg.data) {
    const auto dir = require_data(cfg);
    m.inputs = dataset_inputs(dir);
    lg = tpm::load_dataset(dir, /*with_truth=*/true);
  } else {
    log("generating synthetic dataset (" + std::to_string(cfg.generator.n_users) + " users)");
    lg = tpm::generate_dataset(cfg.generator);
  }
  return tpm::prepare_dataset(std::move(lg), cfg.pipeline.metapaths, threads);
}

int cmd_generate(const Options& o) {
  json resolved;
  const auto cfg = resolve_config(o, resolved);
  const fs::path out = o.out;
  const auto rec = tpm::generate_records(cfg.generator);
  tpm::write_dataset(out, rec);
  tpm::cli::Manifest m{"generate", resolved, {}, {"nodes.csv", "edges.csv", "schema.json", "truth.csv"}};
  m.write(out);
  log("wrote " + std::to_string(rec.nodes.size()) + " nodes, " + std::to_string(rec.edges.size()) +
      " edges to " + out.string());
  return 0;
}

int cmd_paths(const Options& o) {
  json resolved;
  const auto cfg = resolve_config(o, resolved);
  const auto dir = require_data(cfg);
  const fs::path out = o.out;
  fs::create_directories(out);
  tpm::cli::Manifest m{"paths", resolved, dataset_inputs(dir), {}};
  auto ds = tpm::prepare_dataset(tpm::load_dataset(dir, false), cfg.pipeline.metapaths, o.threads);
  write_pathsims(out, ds, out, m);
  m.write(out);
  return 0;
}

int cmd_fit(const Options& o, bool classify) {
  json resolved;
  const auto cfg = resolve_config(o, resolved);
  const fs::path out = o.out;
  fs::create_directories(out);
  tpm::cli::Manifest m{classify ? "classify" : "fit", resolved, {}, {}};
  auto [ds, seeds] = load_seeded(o, cfg, m);
  if (!o.dump_pathsim.empty()) write_pathsims(o.dump_pathsim, ds, out, m);
  const auto seed = tpm::derive_seed(cfg.experiment.rng_seed, 0);
  if (!classify) {
    const auto w = tpm::fit_weights(ds, seeds, cfg.pipeline, seed);
    write_out(out, "beta.json", tpm::beta_json(ds.paths, w, cfg.pipeline).dump(2) + "\n", m);
  } else {
    const auto result = tpm::classify(ds, seeds, cfg.pipeline, seed, o.threads);
    write_out(out, "beta.json",
              tpm::beta_json(ds.paths, result.weights, cfg.pipeline).dump(2) + "\n", m);
    write_out(out, "scores.csv",
              tpm::format_scores_csv(ds.data.graph, result.scores, result.labels), m);
  }
  m.write(out);
  return 0;
}

int cmd_evaluate(const Options& o) {
  json resolved;
  const auto cfg = resolve_config(o, resolved);
  const fs::path out = o.out;
  fs::create_directories(out);
  tpm::cli::Manifest m{"evaluate", resolved, {}, {}};
  const auto ds = load_experiment_data(cfg, o.threads, m);
  const auto report = tpm::run_experiment(ds, cfg.pipeline, cfg.experiment, o.threads);
  log("experiment finished in " + tpm::fixed(report.seconds, 1) + " s");
  write_out(out, "report.csv", tpm::format_report_csv(report), m);
  write_out(out, "report.md", tpm::format_report_md(report), m);
  write_out(out, "weights_report.csv", tpm::format_weights_csv(report), m);
  if (!o.emit_plots.empty()) {
    fs::create_directories(o.emit_plots);
    tpm::write_file(fs::path(o.emit_plots) / "accuracy.svg", tpm::svg_accuracy_plot(report));
  }
  m.write(out);
  return 0;
}

int cmd_sweep(const Options& o) {
  json resolved;
  const auto cfg = resolve_config(o, resolved);
  if (o.param != "lambda" && o.param != "epsilon")
    throw tpm::ConfigError("--param must be lambda or epsilon");
  const fs::path out = o.out;
  fs::create_directories(out);
  resolved["sweep"] = {{"param", o.param}, {"values", o.values}};
  tpm::cli::Manifest m{"sweep", resolved, {}, {}};
  const auto ds = load_experiment_data(cfg, o.threads, m);
  const auto rows =
      tpm::sweep_parameter(ds, cfg.pipeline, cfg.experiment, o.param, o.values, o.threads);
  write_out(out, "sweep.csv", tpm::format_sweep_csv(rows), m);
  write_out(out, "sweep.md", tpm::format_sweep_md(rows), m);
  if (!o.emit_plots.empty()) {
    fs::create_directories(o.emit_plots);
    tpm::write_file(fs::path(o.emit_plots) / ("sweep_" + o.param + ".svg"),
                    tpm::svg_sweep_plot(rows));
  }
  m.write(out);
  return 0;
}

void fail(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-path label propagation on heterogeneous information networks"};
  app.set_version_flag("--version", std::string("tpathmine ") + TPM_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "JSON config (a manifest.json also works)");
  app.add_option("--set", o.sets, "Override a config key, e.g. --set lambda=4")
      ->allow_extra_args(false);
  app.add_option("--threads", o.threads, "Worker threads")
      ->envname("METAPATH_THREADS")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
  gen->add_option("--out", o.out, "Output directory")->required();

  auto* paths = app.add_subcommand("paths", "Compute and dump PathSim matrices");
  paths->add_option("--data", o.data, "Dataset directory");
  paths->add_option("--out", o.out, "Output directory")->required();

  auto* fit = app.add_subcommand("fit", "Fit meta-path weights (beta.json)");
  auto* cls = app.add_subcommand("classify", "Full pipeline (scores.csv, beta.json)");
  for (auto* sub : {fit, cls}) {
    sub->add_option("--data", o.data, "Dataset directory");
    sub->add_option("--seeds", o.seeds, "Seed labels (id,label)");
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--dump-pathsim", o.dump_pathsim, "Also write PathSim matrices here");
  }

  auto* evaluate = app.add_subcommand("evaluate", "Seed-fraction experiment");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep");
  for (auto* sub : {evaluate, sweep}) {
    sub->add_option("--data", o.data, "Dataset directory (default: generate from config)");
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--emit-plots", o.emit_plots, "Write SVG plots here");
  }
  sweep->add_option("--param", o.param, "lambda or epsilon")->required();
  sweep->add_option("--values", o.values, "Comma-separated values")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    fail("usage", e.what());
    return 2;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*paths) return cmd_paths(o);
    if (*fit) return cmd_fit(o, false);
    if (*cls) return cmd_fit(o, true);
    if (*evaluate) return cmd_evaluate(o);
    if (*sweep) return cmd_sweep(o);
  } catch (const tpm::ConfigError& e) {
    fail("config", e.what());
    return 3;
  } catch (const std::exception& e) {
    fail("runtime", e.what());
    return 1;
  }
  return 1;
}
