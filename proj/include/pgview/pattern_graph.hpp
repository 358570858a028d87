#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgview/ast.hpp"

namespace pgview {

/// Where a pattern element sits in the statement text.
struct PatternPos {
  int stage = 0;
  int path = 0;  // index within the stage
  int index = 0; // node or edge offset within the path
  friend bool operator==(const PatternPos&, const PatternPos&) = default;
};

struct PatternNodeEl {
  std::optional<std::string> variable;
  std::vector<LabelRef> labels;
  std::vector<PropEntry> props;
  bool is_referenced = false;
  std::vector<int> incident;        // edge element indexes, insertion order
  std::vector<PatternPos> occurrences;

  int degree() const { return static_cast<int>(incident.size()); }
};

struct PatternEdgeEl {
  int left = 0;   // node element at the pattern-order left endpoint
  int right = 0;
  EdgeDir dir = EdgeDir::Right;
  std::optional<std::string> variable;
  std::optional<LabelRef> type;
  RangeSpec range;
  std::vector<PropEntry> props;
  bool no_dup_edge = false;
  bool is_referenced = false;
  PatternPos pos;
};

/// Pattern graph of a query statement: one node element per variable (shared
/// variables unify) or per anonymous occurrence, one edge element per
/// syntactic relationship. An element is referenced iff its variable occurs
/// anywhere outside its own defining pattern position.
struct PatternGraph {
  std::vector<PatternNodeEl> nodes;
  std::vector<PatternEdgeEl> edges;

  int node_at(const PatternPos& pos) const;
};

PatternGraph build_pattern_graph(const QueryStatement& stmt);

/// Pattern graph of the first (or only) union part.
PatternGraph build_pattern_graph(const Statement& stmt);

}  // namespace pgview
