#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "tpm/datagen.hpp"
#include "tpm/eval.hpp"
#include "tpm/report.hpp"

using namespace tpm;

namespace {

LabelAssignment labels_of(const std::vector<int>& classes, int p) {
  LabelAssignment l;
  l.n_classes = p;
  for (int c : classes) l.labels.emplace_back(c);
  return l;
}

std::vector<Assignment> assigned(const std::vector<int>& classes) {
  std::vector<Assignment> out;
  for (int c : classes) out.push_back({c, false, false});
  return out;
}

PreparedDataset small_dataset(std::uint64_t seed = 42) {
  GenConfig g;
  g.n_users = 300;
  g.n_apps = 60;
  g.seed = seed;
  return prepare_dataset(generate_dataset(g), default_metapaths(), 2);
}

}  // namespace

TEST_CASE("split_seeds") {
  std::vector<int> cls;
  for (int i = 0; i < 100; ++i) cls.push_back(1 + i % 4);
  const auto truth = labels_of(cls, 4);
  const auto s = split_seeds(truth, 0.1, 3);
  CHECK(s.seeds.size() == 10);
  CHECK(s.eval.size() == 90);
  CHECK(std::is_sorted(s.eval.begin(), s.eval.end()));
  std::set<NodeIndex> all(s.eval.begin(), s.eval.end());
  for (std::size_t k = 0; k < s.seeds.size(); ++k) {
    CHECK(all.insert(s.seeds.nodes[k]).second);
    CHECK(s.seeds.classes[k] == cls[static_cast<std::size_t>(s.seeds.nodes[k])]);
  }
  CHECK(all.size() == 100);
  std::set<int> classes(s.seeds.classes.begin(), s.seeds.classes.end());
  CHECK(classes.size() == 4);

  const auto again = split_seeds(truth, 0.1, 3);
  CHECK(again.seeds.nodes == s.seeds.nodes);
  CHECK(again.eval == s.eval);
  CHECK(split_seeds(truth, 0.1, 4).seeds.nodes != s.seeds.nodes);

  const auto singles = split_seeds(labels_of({1, 2, 3, 4, 5, 6}, 6), 0.1, 1);
  CHECK(singles.seeds.size() == 6);
  CHECK(singles.eval.empty());

  auto partial = truth;
  partial.labels[5].reset();
  const auto sp = split_seeds(partial, 0.5, 1);
  CHECK(sp.seeds.size() + sp.eval.size() == 99);

  CHECK_THROWS_AS(split_seeds(truth, 0.0, 1), Error);
  CHECK_THROWS_AS(split_seeds(truth, 1.0, 1), Error);
  CHECK_THROWS_AS(split_seeds(labels_of({}, 2), 0.5, 1), Error);
}

TEST_CASE("accuracy") {
  const auto truth = labels_of({1, 2, 3, 1}, 3);
  const std::vector<NodeIndex> eval{0, 1, 2, 3};
  CHECK(accuracy(assigned({1, 2, 3, 1}), truth, eval) == 100.0);
  CHECK(accuracy(assigned({2, 3, 1, 2}), truth, eval) == 0.0);
  CHECK(accuracy(assigned({1, 2, 3, 2}), truth, eval) == 75.0);
  CHECK(accuracy(assigned({1, 1, 1, 2}), truth, std::vector<NodeIndex>{0}) == 100.0);
  CHECK_THROWS_AS(accuracy(assigned({1}), truth, std::vector<NodeIndex>{}), Error);
}

TEST_CASE("knn baseline") {
  SUBCASE("single positive seed") {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
    s(0, 1) = s(1, 0) = 0.4;
    const auto out = knn_baseline({s, {}}, {{1}, {3}}, 1, 3);
    CHECK(out[0].label == 3);
    CHECK(out[1].label == 3);
    CHECK_FALSE(out[0].unreachable);
    CHECK(out[2].label == 1);
    CHECK(out[2].unreachable);
  }
  SUBCASE("majority among three") {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(5, 5);
    for (int j = 1; j < 5; ++j) s(0, j) = s(j, 0) = 1.0 - 0.1 * j;
    const auto out = knn_baseline({s, {}}, {{1, 2, 3, 4}, {2, 5, 2, 5}}, 3, 5);
    CHECK(out[0].label == 2);
  }
  SUBCASE("similarity ties go to the lower node, vote ties to the lower class") {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
    for (int j = 1; j < 4; ++j) s(0, j) = s(j, 0) = 0.5;
    const auto one = knn_baseline({s, {}}, {{3, 1, 2}, {4, 2, 3}}, 1, 4);
    CHECK(one[0].label == 2);
    const auto two = knn_baseline({s, {}}, {{3, 2}, {4, 3}}, 2, 4);
    CHECK(two[0].label == 3);
  }
  CHECK_THROWS_AS(knn_baseline({Eigen::MatrixXd::Zero(2, 2), {}}, {}, 1, 2), Error);
}

TEST_CASE("majority baseline") {
  const auto out = majority_baseline({{0, 1, 2, 3}, {2, 3, 3, 2}}, 6, 4);
  CHECK(out.size() == 6);
  CHECK(out[5].label == 2);
  CHECK(majority_baseline({{0, 1, 2}, {4, 4, 1}}, 2, 4)[0].label == 4);
}

TEST_CASE("method names and spec validation") {
  CHECK(parse_method("knn") == Method::knn);
  CHECK(to_string(Method::tpathmine) == "tpathmine");
  CHECK_THROWS_AS(parse_method("svm"), ConfigError);
  ExperimentSpec bad;
  bad.repeats = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.fractions = {};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(derive_seed(7, 1, 2) == derive_seed(7, 1, 2));
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 2, 1));
}

TEST_CASE("majority-only experiment scores the largest eval class share") {
  const auto ds = small_dataset();
  ExperimentSpec spec;
  spec.fractions = {0.1};
  spec.repeats = 1;
  spec.methods = {Method::majority};
  const auto r = run_experiment(ds, {}, spec);
  REQUIRE(r.runs.size() == 1);
  const auto split = split_seeds(ds.data.labels, 0.1, derive_seed(spec.rng_seed, 0, 1));
  std::vector<int> counts(7, 0);
  for (auto v : split.eval)
    ++counts[static_cast<std::size_t>(*ds.data.labels.labels[static_cast<std::size_t>(v)])];
  const double top = *std::max_element(counts.begin(), counts.end());
  CHECK(r.runs[0].accuracy == doctest::Approx(100.0 * top / static_cast<double>(split.eval.size())));
  CHECK(r.weights.empty());
}

TEST_CASE("experiment report is deterministic and thread-count independent") {
  const auto ds = small_dataset();
  ExperimentSpec spec;
  spec.fractions = {0.2, 0.5};
  spec.repeats = 2;
  spec.spectral_check = true;
  const auto a = run_experiment(ds, {}, spec, 1);
  const auto b = run_experiment(ds, {}, spec, 4);
  CHECK(format_report_csv(a) == format_report_csv(b));
  CHECK(format_report_md(a) == format_report_md(b));
  CHECK(format_weights_csv(a) == format_weights_csv(b));
  CHECK(a.runs.size() == 2 * 2 * 3);
  CHECK(a.weights.size() == 4);
  CHECK(a.spectral_radii.size() == 4);
  for (double rho : a.spectral_radii) CHECK(rho <= 1.0 + 1e-9);
  for (const auto& run : a.runs) {
    CHECK(run.accuracy >= 0.0);
    CHECK(run.accuracy <= 100.0);
  }
  const auto acc = a.accuracies(Method::tpathmine, 1);
  CHECK(a.mean(Method::tpathmine, 1) == doctest::Approx((acc[0] + acc[1]) / 2.0));
  const auto w = a.mean_normalized_weights();
  CHECK(w.size() == 4);
  double total = 0.0;
  for (double x : w) total += x;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("sweep_parameter") {
  const auto ds = small_dataset();
  ExperimentSpec spec;
  spec.fractions = {0.3};
  spec.repeats = 1;
  spec.methods = {Method::tpathmine};
  CHECK(sweep_parameter(ds, {}, spec, "lambda", std::vector<double>{}).empty());
  const std::vector<double> eps{0.1, 0.3};
  const auto rows = sweep_parameter(ds, {}, spec, "epsilon", eps);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].value == 0.3);
  CHECK(rows[1].param == "epsilon");
  CHECK_THROWS_AS(sweep_parameter(ds, {}, spec, "mu", eps), ConfigError);
  CHECK_THROWS_AS(sweep_parameter(ds, {}, spec, "lambda", std::vector<double>{-1.0}), ConfigError);
  CHECK(format_sweep_csv(rows) == format_sweep_csv(sweep_parameter(ds, {}, spec, "epsilon", eps)));
}
