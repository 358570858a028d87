#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pgview/value.hpp"

namespace pgview {

/// Placeholder tokens usable inside maintenance templates. $L/$K/$V name a
/// node's label, primary-key property and value; the $S*/$D* family names the
/// two endpoints of an edge and $RID its identifier.
enum class Placeholder { L, K, V, SL, SK, SV, DL, DK, DV, RID };

const char* to_string(Placeholder p);

/// A label position: either a concrete name or a placeholder.
struct LabelRef {
  std::variant<std::string, Placeholder> v;

  bool is_placeholder() const { return v.index() == 1; }
  const std::string& name() const { return std::get<std::string>(v); }
  Placeholder placeholder() const { return std::get<Placeholder>(v); }
  friend bool operator==(const LabelRef&, const LabelRef&) = default;
};

/// A property-map key: concrete name or placeholder.
struct KeyRef {
  std::variant<std::string, Placeholder> v;

  bool is_placeholder() const { return v.index() == 1; }
  const std::string& name() const { return std::get<std::string>(v); }
  Placeholder placeholder() const { return std::get<Placeholder>(v); }
  friend bool operator==(const KeyRef&, const KeyRef&) = default;
};

/// A literal position: concrete value or placeholder.
struct ValueRef {
  std::variant<PropertyValue, Placeholder> v;

  bool is_placeholder() const { return v.index() == 1; }
  const PropertyValue& value() const { return std::get<PropertyValue>(v); }
  Placeholder placeholder() const { return std::get<Placeholder>(v); }
  friend bool operator==(const ValueRef&, const ValueRef&) = default;
};

struct PropEntry {
  KeyRef key;
  ValueRef value;
  friend bool operator==(const PropEntry&, const PropEntry&) = default;
};

struct NodePattern {
  std::optional<std::string> variable;
  std::vector<LabelRef> labels;  // templates may stack a placeholder label
  std::vector<PropEntry> props;
  // Position of this node in the owning view's match path; carried on
  // template statements so matched rows can be folded into instance keys.
  std::optional<int> view_node_pos;

  friend bool operator==(const NodePattern& a, const NodePattern& b) {
    return a.variable == b.variable && a.labels == b.labels && a.props == b.props;
  }
};

enum class EdgeDir { Right, Left, Undirected };  // (a)-[]->(b), (a)<-[]-(b), (a)-[]-(b)

struct RangeSpec {
  std::uint32_t min = 1;
  std::optional<std::uint32_t> max = 1;  // nullopt = unbounded
  bool has_range = false;                // whether a '*' form was written

  bool unbounded() const { return !max.has_value(); }
  bool fixed_hop() const { return min == 1 && max && *max == 1; }
  friend bool operator==(const RangeSpec&, const RangeSpec&) = default;
};

struct RelPattern {
  std::optional<std::string> variable;  // may be a template variable like @R
  std::optional<LabelRef> type;
  EdgeDir dir = EdgeDir::Right;
  RangeSpec range;
  std::vector<PropEntry> props;
  bool no_dup_edge = false;
  // Template metadata: which view-path edge this pattern piece came from and
  // its segment position (pattern order) after a variable-length split.
  std::optional<int> view_edge_pos;
  int view_seg_index = 0;

  friend bool operator==(const RelPattern& a, const RelPattern& b) {
    return a.variable == b.variable && a.type == b.type && a.dir == b.dir && a.range == b.range &&
           a.props == b.props && a.no_dup_edge == b.no_dup_edge;
  }
};

struct PatternPath {
  std::vector<NodePattern> nodes;  // nodes.size() == edges.size() + 1
  std::vector<RelPattern> edges;
  friend bool operator==(const PatternPath&, const PatternPath&) = default;
};

/// WHERE conjunct: `var.prop = literal` or `id(var) = int`.
struct Predicate {
  enum class Kind { PropEquals, IdEquals };
  Kind kind = Kind::PropEquals;
  std::string variable;
  std::string property;  // empty for IdEquals
  ValueRef value;
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// One MATCH...WHERE block. A statement is a chain of stages separated by
/// WITH projections, ending in RETURN/DELETE/CREATE. Consecutive MATCH
/// clauses share a stage; path_clause records which clause each path came
/// from, since edge-trail uniqueness is scoped per clause.
struct Stage {
  std::vector<PatternPath> paths;
  std::vector<int> path_clause;  // parallel to paths
  std::vector<Predicate> where;
  friend bool operator==(const Stage&, const Stage&) = default;
};

struct ReturnItem {
  enum class Kind { Variable, CountStar };
  Kind kind = Kind::Variable;
  std::string variable;
  friend bool operator==(const ReturnItem&, const ReturnItem&) = default;
};

struct QueryStatement {
  enum class Action { Return, Delete, Create, None };

  std::vector<Stage> stages;                       // stages.size() >= 1
  std::vector<std::vector<std::string>> with_vars; // size == stages.size() - 1
  Action action = Action::None;
  std::vector<ReturnItem> return_items;
  std::vector<std::string> delete_vars;
  std::vector<PatternPath> create_paths;

  friend bool operator==(const QueryStatement&, const QueryStatement&) = default;
};

struct ViewDefinition {
  std::string name;
  PatternPath construct;  // exactly two nodes, one edge
  PatternPath match_path;
  friend bool operator==(const ViewDefinition&, const ViewDefinition&) = default;
};

struct CreateViewStatement {
  ViewDefinition def;
  friend bool operator==(const CreateViewStatement&, const CreateViewStatement&) = default;
};

struct DropViewStatement {
  std::string name;
  friend bool operator==(const DropViewStatement&, const DropViewStatement&) = default;
};

struct ShowViewsStatement {
  friend bool operator==(const ShowViewsStatement&, const ShowViewsStatement&) = default;
};

/// Top-level statement. A plain query is a union of one part.
struct Statement {
  std::variant<std::vector<QueryStatement>, CreateViewStatement, DropViewStatement,
               ShowViewsStatement>
      node;

  bool is_query() const { return node.index() == 0; }
  const std::vector<QueryStatement>& query_parts() const {
    return std::get<std::vector<QueryStatement>>(node);
  }
  std::vector<QueryStatement>& query_parts() {
    return std::get<std::vector<QueryStatement>>(node);
  }

  friend bool operator==(const Statement&, const Statement&) = default;
};

/// True if any placeholder or template variable (@x) remains in the statement.
bool has_placeholders(const Statement& stmt);

}  // namespace pgview
