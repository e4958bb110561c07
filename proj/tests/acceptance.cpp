// Acceptance checks 1-10; prints one PASS/FAIL line per criterion.
// Usage: acceptance path/to/tpathmine

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "helpers.hpp"
#include "tpm/datagen.hpp"
#include "tpm/eval.hpp"
#include "tpm/io.hpp"
#include "tpm/propagate.hpp"
#include "tpm/report.hpp"

using namespace tpm;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double secs,
            double limit) {
  const bool in_time = limit <= 0.0 || secs < limit;
  if (!ok || !in_time) ++failures;
  std::ostringstream line;
  line << (ok && in_time ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << detail << " ["
       << fixed(secs, 2) << " s";
  if (limit > 0.0) line << " / limit " << fixed(limit, 0) << " s";
  line << "]";
  std::cout << line.str() << std::endl;
}

int hw_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

void commuting_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int checked = 0, mismatched = 0;
  for (int g = 0; g < 50; ++g) {
    const auto lg = testing::random_uat_graph(rng, 20, 5, 0.25);
    for (const auto& name : default_metapaths()) {
      const auto p = parse_metapath(name, lg.graph);
      ++checked;
      if (commuting_matrix(lg.graph, p).entries != testing::enumerate_paths(lg.graph, p))
        ++mismatched;
    }
  }
  report(1, "commuting matrix vs path enumeration", mismatched == 0,
         std::to_string(checked - mismatched) + "/" + std::to_string(checked) + " exact matches",
         seconds_since(t0), 10);
}

void pathsim_properties() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 15), w(0, 5);
  std::bernoulli_distribution empty_row(0.15);
  int bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    Eigen::MatrixXd b(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      const bool zero = empty_row(rng);
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = zero ? 0 : w(rng);
    }
    CommutingMatrix cm;
    cm.entries = b * b.transpose();
    const auto s = pathsim(cm).entries;
    bool ok = (s.array() >= 0.0f).all() && (s.array() <= 1.0f).all() && s == s.transpose();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      ok = ok && s(i, i) == (cm.entries(i, i) > 0 ? 1.0f : 0.0f);
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        if (cm.entries(i, i) + cm.entries(j, j) == 0) ok = ok && s(i, j) == 0.0f;
    }
    if (!ok) ++bad;
  }
  report(2, "PathSim bounds and symmetry", bad == 0,
         std::to_string(1000 - bad) + "/1000 matrices satisfy all properties", seconds_since(t0), 5);
}

void solver_agreement() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::uniform_int_distribution<int> cls(1, 6);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index n = 200;
    std::vector<PathSimMatrix> ps(3);
    for (auto& p : ps) {
      p.entries = Eigen::MatrixXf::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j)
          if (u(rng) < 0.2f) p.entries(i, j) = p.entries(j, i) = u(rng);
    }
    std::vector<double> raw{u(rng), u(rng), u(rng)};
    BetaWeights beta;
    beta.raw = raw;
    beta.normalized = normalize_weights(raw);
    const auto s = combine_pathsims(ps, beta);
    SeedSet seeds;
    for (NodeIndex i = 0; i < n; i += 5) {
      seeds.nodes.push_back(i);
      seeds.classes.push_back(cls(rng));
    }
    const auto y = make_label_matrix(n, 6, seeds);
    PropagationConfig cfg;  // lambda 2, alpha 1/3
    cfg.tol = 1e-12;
    const auto fc = propagate_closed(s, y, cfg).entries;
    const auto fi = propagate_iterative(s, y, cfg).entries;
    worst = std::max(worst, (fc - fi).cwiseAbs().maxCoeff());
  }
  std::ostringstream d;
  d << "max |F_closed - F_iter| = " << worst << " (< 1e-8)";
  report(3, "closed form vs iteration", worst < 1e-8, d.str(), seconds_since(t0), 30);
}

void two_node_example() {
  const auto t0 = Clock::now();
  Eigen::MatrixXd s(2, 2);
  s << 0, 1, 1, 0;
  PropagationConfig cfg;
  cfg.lambda = 1.0;  // alpha 0.5
  const auto f = propagate_closed({s, {}}, make_label_matrix(2, 2, {{0}, {1}}), cfg).entries;
  const double err = std::max(std::abs(f(0, 0) - 2.0 / 3.0), std::abs(f(1, 0) - 1.0 / 3.0));
  std::ostringstream d;
  d << "F column = [" << f(0, 0) << ", " << f(1, 0) << "], error " << err << " (< 1e-12)";
  report(4, "two-node propagation", err < 1e-12, d.str(), seconds_since(t0), 1);
}

void svr_band() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> truth{1.0, 3.0, 2.0, 4.0};
  std::vector<TrainingPair> pairs;
  for (int k = 0; k < 500; ++k) {
    TrainingPair p;
    for (int d = 0; d < 4; ++d) p.features.push_back(u(rng));
    p.target = std::inner_product(truth.begin(), truth.end(), p.features.begin(), 0.0);
    pairs.push_back(std::move(p));
  }
  SvrConfig cfg;
  cfg.epsilon = 0.1;
  cfg.penalty = 100.0;
  cfg.tolerance = 1e-9;
  const auto b = fit_svr(pairs, cfg);
  double worst = 0.0;
  for (const auto& p : pairs) {
    const double r =
        std::inner_product(b.raw.begin(), b.raw.end(), p.features.begin(), b.bias) - p.target;
    worst = std::max(worst, std::abs(r));
  }
  const double dot = std::inner_product(b.raw.begin(), b.raw.end(), truth.begin(), 0.0);
  const double cosine = dot / std::sqrt(std::inner_product(b.raw.begin(), b.raw.end(),
                                                           b.raw.begin(), 0.0) *
                                        std::inner_product(truth.begin(), truth.end(),
                                                           truth.begin(), 0.0));
  std::ostringstream d;
  d << "max residual " << worst << " (<= eps + 1e-6 = " << cfg.epsilon + 1e-6 << "), cosine "
    << cosine << " (>= 0.99)";
  report(5, "SVR epsilon band", worst <= cfg.epsilon + 1e-6 && cosine >= 0.99, d.str(),
         seconds_since(t0), 10);
}

std::vector<double> all_radii;

void synthetic_trend(const PreparedDataset& ds, double prep_seconds) {
  const auto t0 = Clock::now();
  ExperimentSpec spec;
  spec.spectral_check = true;
  const auto r = run_experiment(ds, {}, spec, hw_threads());
  const double secs = seconds_since(t0) + prep_seconds;
  all_radii.insert(all_radii.end(), r.spectral_radii.begin(), r.spectral_radii.end());
  std::cout << format_report_md(r);

  bool trend = true, beats = true;
  int dips = 0;
  std::ostringstream d;
  d << "TPathMine/KNN/majority:";
  for (std::size_t f = 0; f < r.fractions.size(); ++f) {
    const double tp = r.mean(Method::tpathmine, f);
    const double kn = r.mean(Method::knn, f);
    const double mj = r.mean(Method::majority, f);
    d << " " << fixed(100 * r.fractions[f], 0) << "%=" << fixed(tp, 2) << "/" << fixed(kn, 2) << "/"
      << fixed(mj, 2);
    beats = beats && tp > kn && tp > mj;
    if (f > 0) {
      const double step = tp - r.mean(Method::tpathmine, f - 1);
      if (step < 0) {
        ++dips;
        if (step < -1.0) trend = false;
      }
    }
  }
  if (dips > 1) trend = false;
  d << (trend ? "; trend ok" : "; trend broken")
    << (beats ? ", beats baselines" : ", baseline not beaten");
  report(6, "seed-fraction trend on 10k users", trend && beats, d.str(), secs, 300);

  const auto w = r.mean_normalized_weights();
  std::size_t uau = 0;
  for (std::size_t k = 0; k < r.path_names.size(); ++k)
    if (r.path_names[k] == "U-A-U") uau = k;
  bool minimum = true;
  std::ostringstream wd;
  wd << "mean normalized weights:";
  for (std::size_t k = 0; k < w.size(); ++k) {
    wd << " " << r.path_names[k] << "=" << fixed(w[k], 4);
    if (w[k] < w[uau]) minimum = false;
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    if ((r.path_names[k] == "U-T-U" || r.path_names[k] == "U-A-T-A-U") && !(w[k] > w[uau]))
      minimum = false;
  }
  report(7, "U-A-U has the lowest weight", minimum, wd.str(), 0, 0);
}

void lambda_sweep(const PreparedDataset& ds) {
  const auto t0 = Clock::now();
  ExperimentSpec spec;
  spec.fractions = {0.1, 0.3, 0.5};
  spec.methods = {Method::tpathmine};
  spec.spectral_check = true;
  const std::vector<double> lambdas{1, 2, 4, 6, 8};
  std::vector<std::vector<double>> acc(spec.fractions.size());
  for (const double l : lambdas) {
    PipelineConfig cfg;
    cfg.propagation.lambda = l;
    const auto r = run_experiment(ds, cfg, spec, hw_threads());
    all_radii.insert(all_radii.end(), r.spectral_radii.begin(), r.spectral_radii.end());
    for (std::size_t f = 0; f < spec.fractions.size(); ++f)
      acc[f].push_back(r.mean(Method::tpathmine, f));
  }
  bool smooth = true, dominate = true;
  std::ostringstream d;
  for (std::size_t f = 0; f < acc.size(); ++f) {
    const auto [lo, hi] = std::minmax_element(acc[f].begin(), acc[f].end());
    smooth = smooth && *hi - *lo < 15.0;
    d << fixed(100 * spec.fractions[f], 0) << "%: [";
    for (std::size_t k = 0; k < acc[f].size(); ++k) d << (k ? " " : "") << fixed(acc[f][k], 2);
    d << "] spread " << fixed(*hi - *lo, 2) << "; ";
    if (f > 0)
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        dominate = dominate && acc[f][k] > acc[f - 1][k];
  }
  d << (dominate ? "higher fractions dominate" : "fraction ordering violated");
  report(8, "lambda sweep {1,2,4,6,8}", smooth && dominate, d.str(), seconds_since(t0), 600);
}

void spectral_invariant() {
  const double top =
      all_radii.empty() ? 0.0 : *std::max_element(all_radii.begin(), all_radii.end());
  std::ostringstream d;
  d << all_radii.size() << " runs, max rho(S_com) = " << fixed(top, 12) << " (<= 1 + 1e-9)";
  report(9, "spectral radius bound", !all_radii.empty() && top <= 1.0 + 1e-9, d.str(), 0, 0);
}

int run(const std::string& cmd) {
  return std::system((cmd + " 2>/dev/null").c_str());
}

void cli_determinism(const std::string& exe, double trend_seconds) {
  const auto t0 = Clock::now();
  if (exe.empty() || !fs::exists(exe)) {
    report(10, "CLI evaluate determinism", false, "tpathmine executable not given", 0, 0);
    return;
  }
  const fs::path work = fs::absolute("acceptance_cli");
  fs::remove_all(work);
  fs::create_directories(work);
  write_file(work / "cfg.json",
             R"({"generator": {"n_users": 2000, "n_apps": 200, "seed": 42},
 "experiment": {"fractions": [0.1, 0.2, 0.3, 0.4, 0.5], "repeats": 5}})");
  const std::string base = "\"" + exe + "\" --config \"" + (work / "cfg.json").string() + "\"";
  const int a = run(base + " --threads 8 evaluate --out \"" + (work / "a").string() + "\"");
  const int b = run(base + " --threads 8 evaluate --out \"" + (work / "b").string() + "\"");
  const int c = run(base + " --threads 1 evaluate --out \"" + (work / "c").string() + "\"");
  bool ok = a == 0 && b == 0 && c == 0;
  std::string detail = "exit codes " + std::to_string(a) + "/" + std::to_string(b) + "/" +
                       std::to_string(c);
  if (ok) {
    const auto ra = read_file(work / "a" / "report.csv");
    const bool twice = ra == read_file(work / "b" / "report.csv");
    const bool threads = ra == read_file(work / "c" / "report.csv");
    ok = twice && threads && !ra.empty();
    detail = std::string("repeat run ") + (twice ? "identical" : "DIFFERS") + ", threads 1 vs 8 " +
             (threads ? "identical" : "DIFFERS") + " (" + std::to_string(ra.size()) +
             " bytes, 2000 users)";
  }
  report(10, "CLI evaluate determinism", ok, detail, seconds_since(t0), 2 * trend_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  commuting_oracle();
  pathsim_properties();
  solver_agreement();
  two_node_example();
  svr_band();

  GenConfig g;
  g.n_users = 10000;
  g.n_apps = 1000;
  g.affinity = 4.0;
  const auto t0 = Clock::now();
  const auto ds = prepare_dataset(generate_dataset(g), default_metapaths(), hw_threads());
  const double prep = seconds_since(t0);
  const auto t1 = Clock::now();
  synthetic_trend(ds, prep);
  const double trend_seconds = seconds_since(t1) + prep;
  lambda_sweep(ds);
  spectral_invariant();
  cli_determinism(exe, trend_seconds);

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
