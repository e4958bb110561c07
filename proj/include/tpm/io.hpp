#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpm/graph.hpp"

namespace tpm {

namespace fs = std::filesystem;

// nodes.csv: id,type,label   (label empty when absent)
std::vector<NodeRecord> read_nodes_csv(const fs::path& path);
void write_nodes_csv(const fs::path& path, const std::vector<NodeRecord>& nodes);

// edges.csv: src,dst,weight   (weight a positive base-10 integer)
std::vector<EdgeRecord> read_edges_csv(const fs::path& path);
void write_edges_csv(const fs::path& path, const std::vector<EdgeRecord>& edges);

Schema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const Schema& s);
Schema read_schema_json(const fs::path& path);
void write_schema_json(const fs::path& path, const Schema& s);

// id,label pairs (truth.csv and seed files share this layout).
struct IdLabel {
  std::string id;
  int label = 0;
};
std::vector<IdLabel> read_id_labels_csv(const fs::path& path);
void write_id_labels_csv(const fs::path& path, const std::vector<IdLabel>& rows);

// Loads nodes.csv, edges.csv and schema.json from `dir`. With `with_truth`
// and a truth.csv present, its labels fill target nodes that nodes.csv
// leaves unlabeled.
LabeledGraph load_dataset(const fs::path& dir, bool with_truth = true);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& contents);

}  // namespace tpm
