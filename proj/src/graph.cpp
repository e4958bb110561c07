#include "tpm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tpm {

Schema Schema::user_app_type() {
  Schema s;
  s.types = {"U", "A", "T"};
  s.relations = {{"U", "A"}, {"A", "T"}, {"U", "T"}};
  s.target = "U";
  s.n_classes = 6;
  return s;
}

std::optional<TypeId> Schema::find_type(std::string_view name) const {
  auto it = std::find(types.begin(), types.end(), name);
  if (it == types.end()) return std::nullopt;
  return static_cast<TypeId>(it - types.begin());
}

TypeId Schema::type_id(std::string_view name) const {
  auto t = find_type(name);
  if (!t) throw Error("unknown node type '" + std::string(name) + "'");
  return *t;
}

bool Schema::has_relation(TypeId a, TypeId b) const {
  for (const auto& [x, y] : relations) {
    const auto xa = find_type(x);
    const auto yb = find_type(y);
    if ((xa == a && yb == b) || (xa == b && yb == a)) return true;
  }
  return false;
}

void Schema::validate() const {
  if (types.empty()) throw ConfigError("schema declares no node types");
  std::set<std::string> seen;
  for (const auto& t : types) {
    if (t.empty()) throw ConfigError("schema: empty type name");
    if (t.find('-') != std::string::npos)
      throw ConfigError("schema: type name '" + t + "' must not contain '-'");
    if (!seen.insert(t).second) throw ConfigError("schema: duplicate type '" + t + "'");
  }
  if (!find_type(target)) throw ConfigError("schema: unknown target type '" + target + "'");
  std::set<std::pair<std::string, std::string>> rels;
  for (const auto& [a, b] : relations) {
    if (!find_type(a) || !find_type(b))
      throw ConfigError("schema: relation " + a + "-" + b + " references unknown type");
    if (a == b) throw ConfigError("schema: self relation " + a + "-" + b);
    auto key = std::minmax(a, b);
    if (!rels.insert({key.first, key.second}).second)
      throw ConfigError("schema: duplicate relation " + a + "-" + b);
  }
  if (n_classes < 2) throw ConfigError("schema: class count must be >= 2");
}

std::optional<NodeRef> HinGraph::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const RelationMatrix& HinGraph::relation(TypeId src, TypeId dst) const {
  auto it = relations_.find({src, dst});
  if (it == relations_.end()) {
    auto name = [&](TypeId t) {
      return t >= 0 && t < static_cast<TypeId>(schema_.types.size()) ? schema_.types[t]
                                                                     : std::to_string(t);
    };
    throw Error("no such relation " + name(src) + "->" + name(dst));
  }
  return it->second;
}

const RelationMatrix& HinGraph::relation(std::string_view src, std::string_view dst) const {
  return relation(schema_.type_id(src), schema_.type_id(dst));
}

std::vector<TypeId> HinGraph::target_neighbour_types() const {
  std::vector<TypeId> out;
  for (TypeId t = 0; t < static_cast<TypeId>(schema_.types.size()); ++t) {
    if (t != target_ && schema_.has_relation(target_, t)) out.push_back(t);
  }
  return out;
}

std::size_t LabelAssignment::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); }));
}

LabeledGraph build_graph(const Schema& schema, std::span<const NodeRecord> nodes,
                         std::span<const EdgeRecord> edges) {
  schema.validate();
  LabeledGraph out;
  HinGraph& g = out.graph;
  g.schema_ = schema;
  g.target_ = schema.target_id();
  g.ids_.assign(schema.types.size(), {});

  std::vector<std::optional<int>> target_labels;
  for (const auto& rec : nodes) {
    const auto type = schema.find_type(rec.type);
    if (!type) throw Error("unknown node type '" + rec.type + "' for node '" + rec.id + "'");
    if (rec.id.empty()) throw Error("empty node id");
    const auto index = static_cast<NodeIndex>(g.ids_[*type].size());
    if (!g.lookup_.emplace(rec.id, NodeRef{*type, index}).second)
      throw Error("duplicate node id '" + rec.id + "'");
    g.ids_[*type].push_back(rec.id);
    if (rec.label) {
      if (*type != g.target_)
        throw Error("label on non-target node '" + rec.id + "' of type " + rec.type);
      if (*rec.label < 1 || *rec.label > schema.n_classes)
        throw Error("label " + std::to_string(*rec.label) + " of node '" + rec.id +
                    "' outside 1.." + std::to_string(schema.n_classes));
    }
    if (*type == g.target_) target_labels.push_back(rec.label);
  }

  // Triplets keyed by the schema orientation (a, b); the reverse is a transpose.
  std::map<std::pair<TypeId, TypeId>, std::vector<Eigen::Triplet<double>>> triplets;
  for (const auto& [a, b] : schema.relations) triplets[{schema.type_id(a), schema.type_id(b)}];

  for (const auto& e : edges) {
    const auto src = g.find(e.src);
    const auto dst = g.find(e.dst);
    if (!src) throw Error("unknown node '" + e.src + "' in edge " + e.src + "," + e.dst);
    if (!dst) throw Error("unknown node '" + e.dst + "' in edge " + e.src + "," + e.dst);
    if (!(e.weight > 0.0) || std::floor(e.weight) != e.weight)
      throw Error("edge " + e.src + "," + e.dst + ": weight must be a positive integer");
    if (auto it = triplets.find({src->type, dst->type}); it != triplets.end()) {
      it->second.emplace_back(src->index, dst->index, e.weight);
    } else if (auto rit = triplets.find({dst->type, src->type}); rit != triplets.end()) {
      rit->second.emplace_back(dst->index, src->index, e.weight);
    } else {
      throw Error("edge " + e.src + "," + e.dst + ": no schema relation " +
                  schema.types[src->type] + "-" + schema.types[dst->type]);
    }
  }

  for (auto& [key, trips] : triplets) {
    const auto [a, b] = key;
    SparseMatrix m(g.node_count(a), g.node_count(b));
    m.setFromTriplets(trips.begin(), trips.end());  // duplicates summed
    m.makeCompressed();
    SparseMatrix mt = m.transpose();
    mt.makeCompressed();
    g.relations_.emplace(std::pair{a, b}, RelationMatrix(std::move(m)));
    g.relations_.emplace(std::pair{b, a}, RelationMatrix(std::move(mt)));
  }

  out.labels.n_classes = schema.n_classes;
  out.labels.labels = std::move(target_labels);
  return out;
}

}  // namespace tpm
