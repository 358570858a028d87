#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgview/ast.hpp"
#include "pgview/pattern_graph.hpp"
#include "pgview/views.hpp"

namespace pgview {

/// Cost the planner assigns to answering the view's pattern from the
/// materialized edges: scan the start-label nodes, then touch every view
/// edge and its far endpoint.
std::int64_t view_scan_cost(std::uint64_t n_start_label, std::uint64_t e_view_label);

/// Estimated cost of answering the view's pattern from base data, scaled
/// from the creation-time ratio; rounded to the nearest integer.
std::int64_t estimate_dbhit(double opt_rate, std::uint64_t n_start_label,
                            std::uint64_t e_view_label);

/// Saved DBHits when the view replaces its pattern: estimate minus scan
/// cost. May be negative if the view has grown stale relative to its ratio.
std::int64_t view_opt_eff(double opt_rate, std::uint64_t n_start_label,
                          std::uint64_t e_view_label);

struct ViewOptInfo {
  std::string name;
  std::uint64_t n_start_label = 0;
  std::uint64_t e_view_label = 0;
  double opt_rate = 0.0;
  std::int64_t estimate = 0;
  std::int64_t opt_eff = 0;
};

/// Descending opt_eff; ties break on ascending name. Stable given equal keys.
void sort_by_opt_eff(std::vector<ViewOptInfo>& infos);

/// Assembles current-size info for every catalog view.
std::vector<ViewOptInfo> collect_view_infos(const Graph& graph, const ViewCatalog& views);

/// A subgraph of the query's pattern graph matching the view's path:
/// node_map[i] / edge_map[i] give the pattern elements matched by the i-th
/// view path node / edge.
struct ViewMatch {
  std::vector<int> node_map;
  std::vector<int> edge_map;
};

/// Backtracking search for an occurrence of the view's path inside the
/// query pattern. Interior pattern nodes must be unreferenced, degree-2 and
/// filter-free; matched edges must be unreferenced, filter-free and agree on
/// type, direction and hop range exactly.
std::optional<ViewMatch> match_view(const PatternGraph& q, const ViewCatalogEntry& view);

/// Splices the matched pattern occurrence out of the statement, wiring the
/// two boundary nodes with one edge typed as the view. Returns false if the
/// match does not map back to a single path (it always should).
bool change_pg(QueryStatement& stmt, const PatternGraph& q, const ViewCatalogEntry& view,
               const ViewMatch& m);

struct RewriteStep {
  std::string view;
  std::int64_t opt_eff = 0;
  std::string before;
  std::string after;
};

struct OptimizeResult {
  Statement stmt;
  std::vector<RewriteStep> steps;
  std::map<std::string, int> rewrites_per_view;
  std::int64_t predicted_view_scan_cost = 0;  // sum of scan costs of applied views
  std::string log;
};

/// Rewrites every union part against all catalog views, best savings first,
/// reapplying each view until it no longer matches.
OptimizeResult optimize(const Graph& graph, const ViewCatalog& views, const Statement& stmt);

}  // namespace pgview
