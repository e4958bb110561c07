#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tpm::cli {

std::string sha256_file(const std::filesystem::path& path);

// manifest.json: command, resolved config and SHA-256 of inputs and outputs.
struct Manifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;  // relative to the output dir

  void write(const std::filesystem::path& out_dir) const;
};

}  // namespace tpm::cli
