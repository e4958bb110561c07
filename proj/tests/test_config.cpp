#include <doctest.h>

#include <filesystem>

#include "tpm/config.hpp"
#include "tpm/io.hpp"

using namespace tpm;
using nlohmann::json;

TEST_CASE("defaults from an empty object") {
  const auto c = RunConfig::from_json(json::object());
  CHECK(c.pipeline.svr.epsilon == 0.2);
  CHECK(c.pipeline.propagation.lambda == 2.0);
  CHECK(c.pipeline.metapaths.size() == 4);
  CHECK(c.generator.n_types == 40);
  CHECK(c.experiment.repeats == 5);
  CHECK_FALSE(c.data.has_value());
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_WITH_AS(RunConfig::from_json(json{{"lamda", 2}}),
                       doctest::Contains("unknown config key \"lamda\""), ConfigError);
  CHECK_THROWS_WITH_AS(RunConfig::from_json(json{{"generator", {{"users", 5}}}}),
                       doctest::Contains("generator.users"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json{{"lambda", "two"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json{{"lambda", 0}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json{{"metapaths", json::array()}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json{{"solver", "qr"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json{{"experiment", {{"methods", {"svm"}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json{{"experiment", {{"fractions", {1.5}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json::array()), ConfigError);
}

TEST_CASE("round trip through json") {
  json j = {{"lambda", 4.0},
            {"epsilon", 0.3},
            {"solver", "iterative"},
            {"target_mode", "label_agreement"},
            {"data", "some/dir"},
            {"generator", {{"n_users", 300}, {"affinity", 1.5}}},
            {"experiment", {{"fractions", {0.2, 0.4}}, {"methods", {"knn"}}}}};
  const auto c = RunConfig::from_json(j);
  const auto again = RunConfig::from_json(c.to_json());
  CHECK(again.to_json() == c.to_json());
  CHECK(again.pipeline.propagation.solver == Solver::iterative);
  CHECK(again.pipeline.target_mode == TargetMode::label_agreement);
  CHECK(again.generator.n_users == 300);
  CHECK(again.experiment.fractions == std::vector<double>{0.2, 0.4});
  CHECK(again.experiment.methods == std::vector<Method>{Method::knn});
  CHECK(*again.data == "some/dir");
}

TEST_CASE("overrides") {
  json j = json::object();
  apply_override(j, "lambda=4");
  apply_override(j, "generator.n_users=250");
  apply_override(j, "solver=iterative");
  apply_override(j, "experiment.fractions=[0.1,0.5]");
  CHECK(j["lambda"] == 4);
  CHECK(j["generator"]["n_users"] == 250);
  CHECK(j["solver"] == "iterative");
  const auto c = RunConfig::from_json(j);
  CHECK(c.pipeline.propagation.lambda == 4.0);
  CHECK(c.experiment.fractions.size() == 2);
  CHECK_THROWS_AS(apply_override(j, "lambda"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(j, "a..b=3"), ConfigError);
}

TEST_CASE("config files and manifests") {
  const auto dir = std::filesystem::temp_directory_path() / "tpm_test_cfg";
  std::filesystem::create_directories(dir);
  write_file(dir / "cfg.json", R"({"lambda": 6})");
  CHECK(load_config_json(dir / "cfg.json")["lambda"] == 6);
  write_file(dir / "manifest.json", R"({"config": {"lambda": 8}, "outputs": []})");
  CHECK(RunConfig::from_json(load_config_json(dir / "manifest.json")).pipeline.propagation.lambda ==
        8.0);
  write_file(dir / "broken.json", "{lambda");
  CHECK_THROWS_AS(load_config_json(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_config_json(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}
