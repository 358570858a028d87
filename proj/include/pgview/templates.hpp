#pragma once

#include <vector>

#include "pgview/ast.hpp"
#include "pgview/graph.hpp"

namespace pgview {

/// Spec-facing aliases: maintenance inputs are described by label/pk data,
/// never by internal identifiers alone.
using NodeInfo = NodeRef;
using EdgeInfo = EdgeRef;

/// Maintenance statements generated once per view at creation time. Each
/// list is ordered; statements are instantiated and run in order under one
/// shared per-event instance-dedup set.
struct MaintenanceTemplateSet {
  std::vector<Statement> delete_node;  // run before a node deletion
  std::vector<Statement> create_edge;  // run after an edge insertion
  std::vector<Statement> delete_edge;  // run before an edge deletion
};

/// Statement list that repairs a view when a node disappears: one statement
/// pinning each explicit path node, plus, per variable-length edge, one
/// statement per way the vanished node can sit inside the trail.
std::vector<Statement> gen_delete_node_template(const ViewDefinition& def);

/// Statement list reacting to a base-edge insertion or deletion: one
/// statement pinning each fixed path edge, plus, per variable-length edge,
/// one statement per split of the trail around the touched edge.
std::vector<Statement> gen_update_edge_template(const ViewDefinition& def, bool is_create);

MaintenanceTemplateSet generate_templates(const ViewDefinition& def);

/// Fills $L/$K/$V from a node description. Identical stacked labels collapse
/// to one. Throws PlaceholderMismatch if the template expects edge data.
Statement instantiate(const Statement& tmpl, const NodeInfo& info);

/// Fills $SL/$SK/$SV, $DL/$DK/$DV and $RID from an edge description.
/// Throws PlaceholderMismatch if the template expects node data.
Statement instantiate(const Statement& tmpl, const EdgeInfo& info);

}  // namespace pgview
