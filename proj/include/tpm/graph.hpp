#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "tpm/error.hpp"

namespace tpm {

using NodeIndex = std::int32_t;
using TypeId = int;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Node types, allowed relations and the target type of a heterogeneous
// network. Relations are unordered pairs of distinct types; both directions
// are materialized in a HinGraph.
struct Schema {
  std::vector<std::string> types;
  std::vector<std::pair<std::string, std::string>> relations;
  std::string target;
  int n_classes = 6;

  // {U, A, T} with U-A, A-T, U-T and target U.
  static Schema user_app_type();

  std::optional<TypeId> find_type(std::string_view name) const;
  TypeId type_id(std::string_view name) const;  // throws on unknown names
  TypeId target_id() const { return type_id(target); }
  bool has_relation(TypeId a, TypeId b) const;

  // Throws ConfigError on duplicate/unknown types, self relations, p < 2.
  void validate() const;
};

// Click-weighted relation between two node types.
class RelationMatrix {
 public:
  RelationMatrix() = default;
  explicit RelationMatrix(SparseMatrix m) : m_(std::move(m)) {}

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  Eigen::Index nonzeros() const { return m_.nonZeros(); }
  double coeff(Eigen::Index i, Eigen::Index j) const { return m_.coeff(i, j); }
  double sum() const { return m_.sum(); }
  const SparseMatrix& matrix() const { return m_; }

 private:
  SparseMatrix m_;
};

struct NodeRecord;
struct EdgeRecord;
struct LabeledGraph;

struct NodeRef {
  TypeId type;
  NodeIndex index;
};

class HinGraph {
 public:
  const Schema& schema() const { return schema_; }
  TypeId target_type() const { return target_; }

  NodeIndex node_count(TypeId type) const {
    return static_cast<NodeIndex>(ids_.at(type).size());
  }
  NodeIndex target_count() const { return node_count(target_); }
  const std::vector<std::string>& node_ids(TypeId type) const { return ids_.at(type); }
  std::optional<NodeRef> find(std::string_view id) const;

  // Stored matrix for (src, dst); throws Error("no such relation ...").
  const RelationMatrix& relation(TypeId src, TypeId dst) const;
  const RelationMatrix& relation(std::string_view src, std::string_view dst) const;

  // Types Z with a schema relation target-Z.
  std::vector<TypeId> target_neighbour_types() const;

 private:
  friend LabeledGraph build_graph(const Schema&, std::span<const NodeRecord>,
                                  std::span<const EdgeRecord>);
  Schema schema_;
  TypeId target_ = 0;
  std::vector<std::vector<std::string>> ids_;
  std::unordered_map<std::string, NodeRef> lookup_;
  std::map<std::pair<TypeId, TypeId>, RelationMatrix> relations_;
};

// Class ids in 1..n_classes for target-type nodes, indexed like the graph.
struct LabelAssignment {
  int n_classes = 0;
  std::vector<std::optional<int>> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t labeled_count() const;
};

struct NodeRecord {
  std::string id;
  std::string type;
  std::optional<int> label;
};

struct EdgeRecord {
  std::string src;
  std::string dst;
  double weight = 0.0;
};

struct LabeledGraph {
  HinGraph graph;
  LabelAssignment labels;
};

// Dense per-type indices in first-seen order; duplicate edges are summed and
// both directions of every relation are stored.
LabeledGraph build_graph(const Schema& schema, std::span<const NodeRecord> nodes,
                         std::span<const EdgeRecord> edges);

}  // namespace tpm
