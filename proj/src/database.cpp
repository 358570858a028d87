#include "pgview/database.hpp"

#include <sstream>

#include "pgview/optimizer.hpp"
#include "pgview/parser.hpp"

namespace pgview {

namespace {

MaintenanceEventStats diff(const MaintenanceEventStats& after, const MaintenanceEventStats& before) {
  MaintenanceEventStats d;
  d.statements_run = after.statements_run - before.statements_run;
  d.db_hits = after.db_hits - before.db_hits;
  d.view_edges_created = after.view_edges_created - before.view_edges_created;
  d.view_edges_deleted = after.view_edges_deleted - before.view_edges_deleted;
  return d;
}

// A label that is neither declared nor a materialized view can only be a
// typo; executing against it would just scan nothing. Placeholder labels
// belong to maintenance templates, which bypass this entry point.
void check_labels(const Graph& g, const std::vector<PatternPath>& paths) {
  for (const PatternPath& path : paths) {
    for (const NodePattern& n : path.nodes)
      for (const LabelRef& l : n.labels)
        if (!l.is_placeholder() && !g.schema().has_node_label(l.name()))
          throw Error(ErrorCode::UnknownLabel, "no node label '" + l.name() + "' in the schema");
    for (const RelPattern& e : path.edges)
      if (e.type && !e.type->is_placeholder() && !g.schema().has_edge_label(e.type->name()) &&
          !g.is_view_label(e.type->name()))
        throw Error(ErrorCode::UnknownLabel, "no edge label or view '" + e.type->name() + "'");
  }
}

void check_labels(const Graph& g, const Statement& stmt) {
  if (!stmt.is_query()) return;
  for (const QueryStatement& part : stmt.query_parts()) {
    for (const Stage& stage : part.stages) check_labels(g, stage.paths);
    check_labels(g, part.create_paths);
  }
}

}  // namespace

RunResult Database::run(const std::string& text, const RunOptions& opts) {
  return run(parse(text), opts);
}

RunResult Database::run(const Statement& stmt, const RunOptions& opts) {
  RunResult res;
  res.executed = stmt;
  check_labels(graph_, stmt);

  if (auto* cv = std::get_if<CreateViewStatement>(&stmt.node)) {
    views_.create_view(cv->def);
    res.result.columns = {"view", "edges"};
    res.result.rows = {{cv->def.name, std::to_string(graph_.edge_count(cv->def.name))}};
    res.result.mutations.view_edges_created = graph_.edge_count(cv->def.name);
    return res;
  }
  if (auto* dv = std::get_if<DropViewStatement>(&stmt.node)) {
    std::uint64_t had = graph_.edge_count(dv->name);
    views_.drop_view(dv->name);
    res.result.columns = {"view", "edges"};
    res.result.rows = {{dv->name, std::to_string(had)}};
    res.result.mutations.view_edges_deleted = had;
    return res;
  }
  if (std::get_if<ShowViewsStatement>(&stmt.node)) {
    res.result.columns = {"view", "edges", "optRate"};
    for (const auto& name : views_.names()) {
      const auto& entry = views_.view(name);
      res.result.rows.push_back({name, std::to_string(graph_.edge_count(name)),
                                 PropertyValue(entry.stats.opt_rate).to_text()});
    }
    return res;
  }

  MaintenanceEventStats before = views_.cumulative();
  if (opts.optimize && !views_.names().empty()) {
    OptimizeResult opt = optimize(graph_, views_, stmt);
    res.optimizer_log = opt.log;
    res.rewritten = !opt.steps.empty();
    res.executed = std::move(opt.stmt);
  }
  res.result = execute(graph_, res.executed);
  res.maintenance = diff(views_.cumulative(), before);
  return res;
}

std::string Database::explain(const std::string& text) const {
  Statement stmt = parse(text);
  std::ostringstream out;
  if (!stmt.is_query()) {
    out << "catalog statement: " << render(stmt) << "\n";
    return out.str();
  }
  out << "statement: " << render(stmt) << "\n";
  out << explain_plan(graph_, stmt);
  if (!views_.names().empty()) {
    OptimizeResult opt = optimize(graph_, views_, stmt);
    out << "-- rewrite --\n" << opt.log;
    if (!opt.steps.empty()) {
      out << "-- rewritten pipeline --\n" << explain_plan(graph_, opt.stmt);
    }
  }
  return out.str();
}

}  // namespace pgview
