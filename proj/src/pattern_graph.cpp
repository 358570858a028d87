#include "pgview/pattern_graph.hpp"

#include <map>

#include "pgview/errors.hpp"

namespace pgview {

int PatternGraph::node_at(const PatternPos& pos) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (const PatternPos& occ : nodes[i].occurrences)
      if (occ == pos) return static_cast<int>(i);
  return -1;
}

PatternGraph build_pattern_graph(const QueryStatement& stmt) {
  PatternGraph pg;
  std::map<std::string, int> node_by_var;
  std::map<std::string, int> pattern_occurrences;  // per variable, across all paths
  std::map<std::string, int> clause_mentions;      // where/with/return/delete mentions
  std::map<std::string, int> edge_el_by_var;

  auto note_mention = [&](const std::string& var) { ++clause_mentions[var]; };

  for (std::size_t s = 0; s < stmt.stages.size(); ++s) {
    const Stage& stage = stmt.stages[s];
    for (std::size_t p = 0; p < stage.paths.size(); ++p) {
      const PatternPath& path = stage.paths[p];
      std::vector<int> node_el(path.nodes.size());
      for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        const NodePattern& n = path.nodes[i];
        PatternPos pos{static_cast<int>(s), static_cast<int>(p), static_cast<int>(i)};
        int el;
        if (n.variable) {
          ++pattern_occurrences[*n.variable];
          auto it = node_by_var.find(*n.variable);
          if (it != node_by_var.end()) {
            el = it->second;
          } else {
            el = static_cast<int>(pg.nodes.size());
            pg.nodes.push_back(PatternNodeEl{});
            pg.nodes[el].variable = n.variable;
            node_by_var[*n.variable] = el;
          }
        } else {
          el = static_cast<int>(pg.nodes.size());
          pg.nodes.push_back(PatternNodeEl{});
        }
        PatternNodeEl& ne = pg.nodes[el];
        // constraints accumulate across occurrences of the same variable
        for (const LabelRef& l : n.labels) {
          bool seen = false;
          for (const LabelRef& have : ne.labels) seen |= have == l;
          if (!seen) ne.labels.push_back(l);
        }
        for (const PropEntry& e : n.props) ne.props.push_back(e);
        ne.occurrences.push_back(pos);
        node_el[i] = el;
      }
      for (std::size_t i = 0; i < path.edges.size(); ++i) {
        const RelPattern& r = path.edges[i];
        int el = static_cast<int>(pg.edges.size());
        PatternEdgeEl ee;
        int left = node_el[i];
        int right = node_el[i + 1];
        ee.left = left;
        ee.right = right;
        ee.dir = r.dir;
        ee.variable = r.variable;
        ee.type = r.type;
        ee.range = r.range;
        ee.props = r.props;
        ee.no_dup_edge = r.no_dup_edge;
        ee.pos = PatternPos{static_cast<int>(s), static_cast<int>(p), static_cast<int>(i)};
        pg.edges.push_back(std::move(ee));
        pg.nodes[left].incident.push_back(el);
        pg.nodes[right].incident.push_back(el);
        if (r.variable) {
          ++pattern_occurrences[*r.variable];
          edge_el_by_var[*r.variable] = el;
        }
      }
    }
    for (const Predicate& pred : stage.where) note_mention(pred.variable);
  }

  for (const auto& vars : stmt.with_vars)
    for (const std::string& v : vars) note_mention(v);
  for (const ReturnItem& item : stmt.return_items)
    if (item.kind == ReturnItem::Kind::Variable) note_mention(item.variable);
  for (const std::string& v : stmt.delete_vars) note_mention(v);
  for (const PatternPath& p : stmt.create_paths) {
    for (const NodePattern& n : p.nodes)
      if (n.variable) note_mention(*n.variable);
    for (const RelPattern& r : p.edges)
      if (r.variable) note_mention(*r.variable);
  }

  auto referenced = [&](const std::optional<std::string>& var) {
    if (!var) return false;
    auto occ = pattern_occurrences.find(*var);
    if (occ != pattern_occurrences.end() && occ->second > 1) return true;
    auto men = clause_mentions.find(*var);
    return men != clause_mentions.end() && men->second > 0;
  };

  for (PatternNodeEl& n : pg.nodes) n.is_referenced = referenced(n.variable);
  for (PatternEdgeEl& e : pg.edges) e.is_referenced = referenced(e.variable);
  return pg;
}

PatternGraph build_pattern_graph(const Statement& stmt) {
  if (!stmt.is_query() || stmt.query_parts().empty())
    throw Error(ErrorCode::SyntaxError, "pattern graph requires a query statement");
  return build_pattern_graph(stmt.query_parts().front());
}

}  // namespace pgview
