#include "pgview/views.hpp"

#include <algorithm>
#include <set>

#include "pgview/parser.hpp"

namespace pgview {

std::string ConsistencyReport::to_text() const {
  if (ok) return "view " + view + ": consistent\n";
  std::string out = "view " + view + ": INCONSISTENT (" + std::to_string(missing.size()) +
                    " missing, " + std::to_string(extra.size()) + " extra)\n";
  for (const std::string& m : missing) out += "  missing " + m + "\n";
  for (const std::string& e : extra) out += "  extra   " + e + "\n";
  return out;
}

ViewCatalog::ViewCatalog(Graph& graph) : graph_(graph) { graph_.set_listener(this); }

ViewCatalog::~ViewCatalog() { graph_.set_listener(nullptr); }

const ViewCatalogEntry& ViewCatalog::view(const std::string& name) const {
  auto it = views_.find(name);
  if (it == views_.end()) throw Error(ErrorCode::NoSuchView, "view '" + name + "'");
  return it->second;
}

std::vector<std::string> ViewCatalog::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : views_) out.push_back(name);
  return out;
}

void ViewCatalog::validate_definition(const ViewDefinition& def) const {
  auto bad = [](const std::string& why) -> Error {
    return Error(ErrorCode::InvalidViewDefinition, why);
  };
  if (def.name.empty()) throw bad("view name is empty");
  if (graph_.schema().has_node_label(def.name) || graph_.schema().has_edge_label(def.name))
    throw bad("view name '" + def.name + "' collides with a schema label");

  const PatternPath& mp = def.match_path;
  if (mp.edges.empty()) throw bad("match path needs at least one edge");
  if (!mp.nodes.front().variable || !mp.nodes.back().variable)
    throw bad("match path endpoints need variables");
  if (*mp.nodes.front().variable == *mp.nodes.back().variable)
    throw bad("match path endpoints must be distinct variables");

  std::set<std::string> vars;
  for (const NodePattern& n : mp.nodes) {
    if (n.variable && !vars.insert(*n.variable).second)
      throw bad("variable '" + *n.variable + "' repeats in the match path");
    if (!n.props.empty()) throw bad("property filters are not allowed in a view");
    for (const LabelRef& l : n.labels) {
      if (l.is_placeholder()) throw bad("placeholders are not allowed in a view");
      if (!graph_.schema().has_node_label(l.name()))
        throw bad("unknown node label '" + l.name() + "'");
    }
    if (n.labels.size() > 1) throw bad("view nodes carry at most one label");
  }
  if (mp.nodes.front().labels.empty() || mp.nodes.back().labels.empty())
    throw bad("match path endpoints need labels");
  for (const RelPattern& r : mp.edges) {
    if (r.dir == EdgeDir::Undirected) throw bad("view edges must be directed");
    if (!r.props.empty()) throw bad("property filters are not allowed in a view");
    if (r.no_dup_edge) throw bad("NoDupEdge is reserved for maintenance statements");
    if (r.variable) {
      if ((*r.variable)[0] == '@') throw bad("template variables are not allowed in a view");
      if (!vars.insert(*r.variable).second)
        throw bad("variable '" + *r.variable + "' repeats in the match path");
    }
    if (r.type) {
      if (r.type->is_placeholder()) throw bad("placeholders are not allowed in a view");
      if (views_.count(r.type->name())) throw bad("views cannot be defined over views");
      if (!graph_.schema().has_edge_label(r.type->name()))
        throw bad("unknown edge label '" + r.type->name() + "'");
    }
  }

  const PatternPath& c = def.construct;
  if (c.nodes.size() != 2 || c.edges.size() != 1)
    throw bad("construct clause must be a single edge between two nodes");
  if (c.edges[0].dir == EdgeDir::Undirected) throw bad("construct edge must be directed");
  if (c.edges[0].range.has_range) throw bad("construct edge must be fixed-length");
  if (c.edges[0].type && !(c.edges[0].type->is_placeholder() == false &&
                           c.edges[0].type->name() == def.name))
    throw bad("construct edge type must equal the view name");
  if (!c.nodes[0].variable || !c.nodes[1].variable)
    throw bad("construct nodes must be variables");
  const std::string& vf = *mp.nodes.front().variable;
  const std::string& vl = *mp.nodes.back().variable;
  const std::string& ca = *c.nodes[0].variable;
  const std::string& cb = *c.nodes[1].variable;
  bool forward = ca == vf && cb == vl;
  bool backward = ca == vl && cb == vf;
  if (!forward && !backward)
    throw bad("construct must connect the match path's endpoint variables");
}

const ViewCatalogEntry& ViewCatalog::create_view(const ViewDefinition& def) {
  if (views_.count(def.name))
    throw Error(ErrorCode::DuplicateViewName, "view '" + def.name + "'");
  validate_definition(def);

  ViewCatalogEntry entry;
  entry.def = def;
  entry.templates = generate_templates(def);
  entry.construct_forward =
      *def.construct.nodes[0].variable == *def.match_path.nodes.front().variable;

  graph_.register_view_label(def.name);
  MatchResult matched;
  try {
    matched = match_pattern(graph_, {def.match_path});
  } catch (...) {
    graph_.unregister_view_label(def.name);
    throw;
  }

  std::uint64_t made = 0;
  for (const MatchRow& row : matched.rows) {
    NodeId first = row.paths[0].nodes.front();
    NodeId last = row.paths[0].nodes.back();
    NodeId src = entry.construct_forward ? first : last;
    NodeId dst = entry.construct_forward ? last : first;
    graph_.create_view_edge_internal(src, dst, def.name);
    ++made;
  }

  entry.stats.start_label = def.match_path.nodes.front().labels[0].name();
  entry.stats.initial_db_hit = matched.profile.total_db_hits();
  entry.stats.initial_denominator =
      graph_.node_count(entry.stats.start_label) + 2 * made;
  entry.stats.opt_rate =
      entry.stats.initial_denominator
          ? static_cast<double>(entry.stats.initial_db_hit) /
                static_cast<double>(entry.stats.initial_denominator)
          : 0.0;

  auto [it, inserted] = views_.emplace(def.name, std::move(entry));
  return it->second;
}

void ViewCatalog::drop_view(const std::string& name) {
  auto it = views_.find(name);
  if (it == views_.end()) throw Error(ErrorCode::NoSuchView, "view '" + name + "'");
  std::vector<EdgeId> ids = graph_.edges_with_label(name);  // copy: we mutate below
  for (EdgeId id : ids) graph_.delete_view_edge_internal(id);
  graph_.unregister_view_label(name);
  views_.erase(it);
}

template <typename Info>
void ViewCatalog::run_event(const std::vector<Statement> MaintenanceTemplateSet::* list,
                            const Info& info) {
  last_event_ = MaintenanceEventStats{};
  for (auto& [name, entry] : views_) {
    std::set<std::string> seen;
    MaintenanceContext ctx;
    ctx.view_name = name;
    ctx.seen_instances = &seen;
    for (const Statement& tmpl : entry.templates.*list) {
      Statement inst = instantiate(tmpl, info);
      QueryResult r = execute(graph_, inst, &ctx);
      ++last_event_.statements_run;
      last_event_.db_hits += r.profile.total_db_hits();
      last_event_.view_edges_created += r.mutations.view_edges_created;
      last_event_.view_edges_deleted += r.mutations.view_edges_deleted;
    }
  }
  cumulative_.statements_run += last_event_.statements_run;
  cumulative_.db_hits += last_event_.db_hits;
  cumulative_.view_edges_created += last_event_.view_edges_created;
  cumulative_.view_edges_deleted += last_event_.view_edges_deleted;
}

void ViewCatalog::before_delete_node(const Node& node) {
  if (views_.empty()) return;
  NodeInfo info = graph_.node_ref(node.id);
  run_event(&MaintenanceTemplateSet::delete_node, info);
}

void ViewCatalog::after_create_edge(const Edge& edge) {
  if (views_.empty()) return;
  EdgeInfo info = graph_.edge_ref(edge.id);
  run_event(&MaintenanceTemplateSet::create_edge, info);
}

void ViewCatalog::before_delete_edge(const Edge& edge) {
  if (views_.empty()) return;
  EdgeInfo info = graph_.edge_ref(edge.id);
  run_event(&MaintenanceTemplateSet::delete_edge, info);
}

namespace {

/// Plain recursive trail enumerator over the base graph; deliberately apart
/// from the statement executor so the two can check each other.
class OracleWalker {
 public:
  OracleWalker(const Graph& g, const PatternPath& path) : g_(g), path_(path) {}

  std::vector<std::pair<NodeId, NodeId>> run() {
    const NodePattern& n0 = path_.nodes.front();
    if (!n0.labels.empty()) {
      for (NodeId id : g_.nodes_with_label(n0.labels[0].name())) start(id);
    } else {
      g_.for_each_live_node([&](const Node& n) {
        start(n.id);
        return true;
      });
    }
    return std::move(out_);
  }

 private:
  void start(NodeId id) {
    start_ = id;
    walk(0, id);
  }

  bool node_fits(std::size_t idx, NodeId id) const {
    const NodePattern& n = path_.nodes[idx];
    if (n.labels.empty()) return true;
    return g_.node(id).label == n.labels[0].name();
  }

  void walk(std::size_t edge_idx, NodeId cur) {
    if (edge_idx == path_.edges.size()) {
      out_.emplace_back(start_, cur);
      return;
    }
    const RelPattern& r = path_.edges[edge_idx];
    std::uint32_t lo = r.range.has_range ? r.range.min : 1;
    std::optional<std::uint32_t> hi = r.range.has_range ? r.range.max : 1;
    trail(edge_idx, r, cur, 0, lo, hi);
  }

  void trail(std::size_t edge_idx, const RelPattern& r, NodeId cur, std::uint32_t len,
             std::uint32_t lo, std::optional<std::uint32_t> hi) {
    if (len >= lo && node_fits(edge_idx + 1, cur)) walk(edge_idx + 1, cur);
    if (hi && len == *hi) return;
    Direction dir = r.dir == EdgeDir::Right  ? Direction::Out
                    : r.dir == EdgeDir::Left ? Direction::In
                                             : Direction::Both;
    const std::string* type = nullptr;
    std::string type_name;
    if (r.type) {
      type_name = r.type->name();
      type = &type_name;
    }
    g_.for_each_incident(cur, dir, type, [&](const Edge& e) {
      if (std::find(used_.begin(), used_.end(), e.id) != used_.end()) return true;
      NodeId nb = dir == Direction::Out  ? e.dst
                  : dir == Direction::In ? e.src
                                         : (e.src == cur ? e.dst : e.src);
      used_.push_back(e.id);
      trail(edge_idx, r, nb, len + 1, lo, hi);
      used_.pop_back();
      return true;
    });
  }

  const Graph& g_;
  const PatternPath& path_;
  NodeId start_ = 0;
  std::vector<EdgeId> used_;
  std::vector<std::pair<NodeId, NodeId>> out_;
};

std::string endpoint_text(const Graph& g, NodeId src, NodeId dst) {
  NodeRef a = g.node_ref(src);
  NodeRef b = g.node_ref(dst);
  return a.label + "{" + a.pk_name + ":" + a.pk_value.to_text() + "}->" + b.label + "{" +
         b.pk_name + ":" + b.pk_value.to_text() + "}";
}

}  // namespace

std::vector<std::pair<NodeId, NodeId>> ViewCatalog::recompute_oracle(
    const std::string& name) const {
  const ViewCatalogEntry& entry = view(name);
  OracleWalker walker(graph_, entry.def.match_path);
  std::vector<std::pair<NodeId, NodeId>> pairs = walker.run();
  if (!entry.construct_forward)
    for (auto& [s, d] : pairs) std::swap(s, d);
  return pairs;
}

ConsistencyReport ViewCatalog::check_consistency(const std::string& name) const {
  ConsistencyReport report;
  report.view = name;

  std::map<std::pair<NodeId, NodeId>, long> balance;
  for (const auto& pair : recompute_oracle(name)) ++balance[pair];
  for (EdgeId id : graph_.edges_with_label(name)) {
    const Edge& e = graph_.edge(id);
    --balance[std::make_pair(e.src, e.dst)];
  }
  for (const auto& [pair, count] : balance) {
    for (long i = 0; i < count; ++i)
      report.missing.push_back(endpoint_text(graph_, pair.first, pair.second));
    for (long i = 0; i > count; --i)
      report.extra.push_back(endpoint_text(graph_, pair.first, pair.second));
  }
  report.ok = report.missing.empty() && report.extra.empty();
  return report;
}

std::vector<ConsistencyReport> ViewCatalog::check_all() const {
  std::vector<ConsistencyReport> out;
  for (const auto& [name, entry] : views_) out.push_back(check_consistency(name));
  return out;
}

}  // namespace pgview
