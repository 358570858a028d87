#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgview/ast.hpp"
#include "pgview/graph.hpp"

namespace pgview {

struct OpStats {
  std::string name;
  std::uint64_t rows = 0;
  std::uint64_t db_hits = 0;
};

/// Per-operator Rows / DBHit profile. Rows is the number of records an
/// operator emitted; DBHits count storage touches: one per node scanned or
/// fetched by key, one per edge yielded by an adjacency scan, one per
/// neighbor node materialized, one per element written by a mutation.
/// Reading properties of an already materialized element is free.
struct ProfileReport {
  struct Part {
    std::vector<OpStats> ops;
  };
  std::vector<Part> parts;

  std::uint64_t total_rows() const;
  std::uint64_t total_db_hits() const;
  std::string to_text() const;
  /// One line per operator: operator,rows,dbhits (fields quoted as needed).
  std::string to_csv() const;
};

/// Positional bindings for one matched row of a pattern list. Fixed-length
/// relationships bind a single-edge list; variable-length ones bind the
/// whole trail in pattern order (left to right).
struct MatchRow {
  struct PathBind {
    std::vector<NodeId> nodes;
    std::vector<std::vector<EdgeId>> rels;
  };
  std::vector<PathBind> paths;
};

struct MatchResult {
  std::vector<MatchRow> rows;
  ProfileReport profile;
};

struct MutationSummary {
  std::uint64_t nodes_created = 0;
  std::uint64_t edges_created = 0;
  std::uint64_t nodes_deleted = 0;
  std::uint64_t base_edges_deleted = 0;
  std::uint64_t view_edges_deleted = 0;
  std::uint64_t view_edges_created = 0;
};

struct QueryResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // canonical cell text
  MutationSummary mutations;
  ProfileReport profile;
};

/// Supplied by the view manager when it executes maintenance statements.
/// CREATE/DELETE then operate on the named view's edges through the internal
/// store paths, and matched instances are deduplicated across the statements
/// of one mutation event via the shared key set.
struct MaintenanceContext {
  std::string view_name;
  std::set<std::string>* seen_instances = nullptr;
};

/// Matches pattern paths (one MATCH clause) against the graph, with optional
/// WHERE conjuncts. Read-only; deterministic row order.
MatchResult match_pattern(const Graph& graph, const std::vector<PatternPath>& pattern,
                          const std::vector<Predicate>& where = {});

/// Executes a query statement (all union parts). Mutating statements collect
/// their rows first, then apply changes row by row, so reads never observe
/// this statement's own writes mid-scan.
QueryResult execute(Graph& graph, const Statement& stmt, MaintenanceContext* ctx = nullptr);

/// Renders the operator pipeline of a statement without executing it.
std::string explain_plan(const Graph& graph, const Statement& stmt);

}  // namespace pgview
