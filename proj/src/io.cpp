#include "tpm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tpm {
namespace {

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads a headed CSV; calls row(fields, line_no) for each non-empty data row.
template <typename RowFn>
void read_csv(const fs::path& path, std::string_view header, std::size_t n_fields, RowFn&& row) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      if (line != header)
        throw Error(path.filename().string() + ": expected header '" + std::string(header) +
                    "', got '" + line + "'");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_row(line);
    if (fields.size() != n_fields)
      throw Error(path.filename().string() + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(n_fields) + " fields");
    row(fields, line_no);
  }
  if (!saw_header) throw Error(path.filename().string() + ": missing header");
}

long long parse_int(const std::string& s, const fs::path& path, std::size_t line_no,
                    std::string_view what) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end)
    throw Error(path.filename().string() + ":" + std::to_string(line_no) + ": invalid " +
                std::string(what) + " '" + s + "'");
  return v;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<NodeRecord> read_nodes_csv(const fs::path& path) {
  std::vector<NodeRecord> nodes;
  read_csv(path, "id,type,label", 3, [&](auto& f, std::size_t line_no) {
    NodeRecord r{std::move(f[0]), std::move(f[1]), std::nullopt};
    if (!f[2].empty()) r.label = static_cast<int>(parse_int(f[2], path, line_no, "label"));
    nodes.push_back(std::move(r));
  });
  return nodes;
}

void write_nodes_csv(const fs::path& path, const std::vector<NodeRecord>& nodes) {
  auto out = open_out(path);
  out << "id,type,label\n";
  for (const auto& n : nodes) {
    out << n.id << ',' << n.type << ',';
    if (n.label) out << *n.label;
    out << '\n';
  }
}

std::vector<EdgeRecord> read_edges_csv(const fs::path& path) {
  std::vector<EdgeRecord> edges;
  read_csv(path, "src,dst,weight", 3, [&](auto& f, std::size_t line_no) {
    const auto w = parse_int(f[2], path, line_no, "weight");
    if (w <= 0)
      throw Error(path.filename().string() + ":" + std::to_string(line_no) +
                  ": weight must be a positive integer");
    edges.push_back({std::move(f[0]), std::move(f[1]), static_cast<double>(w)});
  });
  return edges;
}

void write_edges_csv(const fs::path& path, const std::vector<EdgeRecord>& edges) {
  auto out = open_out(path);
  out << "src,dst,weight\n";
  for (const auto& e : edges) {
    out << e.src << ',' << e.dst << ',' << static_cast<long long>(e.weight) << '\n';
  }
}

Schema schema_from_json(const nlohmann::json& j) {
  Schema s;
  try {
    s.types = j.at("types").get<std::vector<std::string>>();
    for (const auto& r : j.at("relations")) {
      auto pair = r.get<std::vector<std::string>>();
      if (pair.size() != 2) throw ConfigError("schema: relation must name two types");
      s.relations.emplace_back(pair[0], pair[1]);
    }
    s.target = j.at("target").get<std::string>();
    s.n_classes = j.value("classes", 6);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json schema_to_json(const Schema& s) {
  nlohmann::json rel = nlohmann::json::array();
  for (const auto& [a, b] : s.relations) rel.push_back({a, b});
  return {{"types", s.types}, {"relations", rel}, {"target", s.target}, {"classes", s.n_classes}};
}

Schema read_schema_json(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.filename().string() + ": " + e.what());
  }
  return schema_from_json(j);
}

void write_schema_json(const fs::path& path, const Schema& s) {
  write_file(path, schema_to_json(s).dump(2) + "\n");
}

std::vector<IdLabel> read_id_labels_csv(const fs::path& path) {
  std::vector<IdLabel> rows;
  read_csv(path, "id,label", 2, [&](auto& f, std::size_t line_no) {
    rows.push_back({std::move(f[0]), static_cast<int>(parse_int(f[1], path, line_no, "label"))});
  });
  return rows;
}

void write_id_labels_csv(const fs::path& path, const std::vector<IdLabel>& rows) {
  auto out = open_out(path);
  out << "id,label\n";
  for (const auto& r : rows) out << r.id << ',' << r.label << '\n';
}

LabeledGraph load_dataset(const fs::path& dir, bool with_truth) {
  const auto schema = read_schema_json(dir / "schema.json");
  const auto nodes = read_nodes_csv(dir / "nodes.csv");
  const auto edges = read_edges_csv(dir / "edges.csv");
  auto lg = build_graph(schema, nodes, edges);
  if (with_truth && fs::exists(dir / "truth.csv")) {
    for (const auto& row : read_id_labels_csv(dir / "truth.csv")) {
      const auto ref = lg.graph.find(row.id);
      if (!ref || ref->type != lg.graph.target_type())
        throw Error("truth.csv: '" + row.id + "' is not a target-type node");
      if (row.label < 1 || row.label > schema.n_classes)
        throw Error("truth.csv: label out of range for '" + row.id + "'");
      auto& slot = lg.labels.labels[ref->index];
      if (!slot) slot = row.label;
    }
  }
  return lg;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  auto out = open_out(path);
  out << contents;
}

}  // namespace tpm
