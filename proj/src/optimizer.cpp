#include "pgview/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pgview/parser.hpp"

namespace pgview {

std::int64_t view_scan_cost(std::uint64_t n_start_label, std::uint64_t e_view_label) {
  return static_cast<std::int64_t>(n_start_label) + 2 * static_cast<std::int64_t>(e_view_label);
}

std::int64_t estimate_dbhit(double opt_rate, std::uint64_t n_start_label,
                            std::uint64_t e_view_label) {
  return static_cast<std::int64_t>(
      std::llround(opt_rate * static_cast<double>(view_scan_cost(n_start_label, e_view_label))));
}

std::int64_t view_opt_eff(double opt_rate, std::uint64_t n_start_label,
                          std::uint64_t e_view_label) {
  return estimate_dbhit(opt_rate, n_start_label, e_view_label) -
         view_scan_cost(n_start_label, e_view_label);
}

void sort_by_opt_eff(std::vector<ViewOptInfo>& infos) {
  std::sort(infos.begin(), infos.end(), [](const ViewOptInfo& a, const ViewOptInfo& b) {
    if (a.opt_eff != b.opt_eff) return a.opt_eff > b.opt_eff;
    return a.name < b.name;
  });
}

std::vector<ViewOptInfo> collect_view_infos(const Graph& graph, const ViewCatalog& views) {
  std::vector<ViewOptInfo> out;
  for (const auto& name : views.names()) {
    const ViewCatalogEntry& entry = views.view(name);
    ViewOptInfo info;
    info.name = name;
    info.n_start_label = graph.node_count(entry.stats.start_label);
    info.e_view_label = graph.edge_count(name);
    info.opt_rate = entry.stats.opt_rate;
    info.estimate = estimate_dbhit(info.opt_rate, info.n_start_label, info.e_view_label);
    info.opt_eff = view_opt_eff(info.opt_rate, info.n_start_label, info.e_view_label);
    out.push_back(std::move(info));
  }
  return out;
}

namespace {

std::vector<std::string> label_names(const std::vector<LabelRef>& labels) {
  std::vector<std::string> out;
  for (const auto& l : labels) {
    if (!l.is_placeholder()) out.push_back(l.name());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<std::uint32_t, std::optional<std::uint32_t>> hop_range(const RangeSpec& r) {
  if (!r.has_range) return {1, 1};
  return {r.min, r.max};
}

bool node_can_match(const NodePattern& vn, const PatternNodeEl& qn, bool interior) {
  if (label_names(vn.labels) != label_names(qn.labels)) return false;
  if (interior) {
    if (qn.is_referenced) return false;
    if (qn.degree() != 2) return false;
    if (!qn.props.empty()) return false;
  }
  return true;
}

bool relp_can_match(const RelPattern& ve, const PatternEdgeEl& qe, bool qe_forward) {
  if (qe.is_referenced || qe.no_dup_edge || !qe.props.empty()) return false;
  if (qe.dir == EdgeDir::Undirected) return false;
  if (ve.type.has_value() != qe.type.has_value()) return false;
  if (ve.type && ve.type->name() != qe.type->name()) return false;
  if (hop_range(ve.range) != hop_range(qe.range)) return false;
  bool ve_forward = (ve.dir == EdgeDir::Right);
  return ve_forward == qe_forward;
}

struct Matcher {
  const PatternGraph& q;
  const PatternPath& vq;
  std::vector<int> node_map;
  std::vector<int> edge_map;
  std::vector<char> node_used;
  std::vector<char> edge_used;

  bool extend(std::size_t vi) {
    if (vi == vq.edges.size()) return true;
    int qn = node_map[vi];
    const RelPattern& ve = vq.edges[vi];
    bool interior = (vi + 1 < vq.edges.size());
    for (int qei : q.nodes[static_cast<std::size_t>(qn)].incident) {
      if (edge_used[static_cast<std::size_t>(qei)]) continue;
      const PatternEdgeEl& qe = q.edges[static_cast<std::size_t>(qei)];
      int qnext;
      bool qe_forward;
      if (qe.left == qn) {
        qnext = qe.right;
        qe_forward = (qe.dir == EdgeDir::Right);
      } else {
        qnext = qe.left;
        qe_forward = (qe.dir == EdgeDir::Left);
      }
      if (!relp_can_match(ve, qe, qe_forward)) continue;
      if (node_used[static_cast<std::size_t>(qnext)]) continue;
      if (!node_can_match(vq.nodes[vi + 1], q.nodes[static_cast<std::size_t>(qnext)], interior))
        continue;
      node_map[vi + 1] = qnext;
      node_used[static_cast<std::size_t>(qnext)] = 1;
      edge_map[vi] = qei;
      edge_used[static_cast<std::size_t>(qei)] = 1;
      if (extend(vi + 1)) return true;
      node_used[static_cast<std::size_t>(qnext)] = 0;
      edge_used[static_cast<std::size_t>(qei)] = 0;
    }
    return false;
  }
};

int count_edges(const QueryStatement& part) {
  int n = 0;
  for (const auto& st : part.stages) {
    for (const auto& p : st.paths) n += static_cast<int>(p.edges.size());
  }
  return n;
}

}  // namespace

std::optional<ViewMatch> match_view(const PatternGraph& q, const ViewCatalogEntry& view) {
  const PatternPath& vq = view.def.match_path;
  Matcher m{q, vq, {}, {}, {}, {}};
  m.node_map.assign(vq.nodes.size(), -1);
  m.edge_map.assign(vq.edges.size(), -1);
  m.node_used.assign(q.nodes.size(), 0);
  m.edge_used.assign(q.edges.size(), 0);
  for (std::size_t qi = 0; qi < q.nodes.size(); ++qi) {
    if (!node_can_match(vq.nodes[0], q.nodes[qi], false)) continue;
    m.node_map[0] = static_cast<int>(qi);
    m.node_used[qi] = 1;
    if (m.extend(0)) return ViewMatch{m.node_map, m.edge_map};
    m.node_used[qi] = 0;
  }
  return std::nullopt;
}

bool change_pg(QueryStatement& stmt, const PatternGraph& q, const ViewCatalogEntry& view,
               const ViewMatch& m) {
  if (m.edge_map.empty()) return false;
  PatternPos p0 = q.edges[static_cast<std::size_t>(m.edge_map.front())].pos;
  int lo = p0.index;
  int hi = p0.index;
  for (int ei : m.edge_map) {
    const PatternPos& pos = q.edges[static_cast<std::size_t>(ei)].pos;
    if (pos.stage != p0.stage || pos.path != p0.path) return false;
    lo = std::min(lo, pos.index);
    hi = std::max(hi, pos.index);
  }
  if (hi - lo + 1 != static_cast<int>(m.edge_map.size())) return false;

  int qa = q.node_at(PatternPos{p0.stage, p0.path, lo});
  int src_q = view.construct_forward ? m.node_map.front() : m.node_map.back();
  int dst_q = view.construct_forward ? m.node_map.back() : m.node_map.front();
  RelPattern rel;
  rel.type = LabelRef{view.def.name};
  if (qa == src_q) {
    rel.dir = EdgeDir::Right;
  } else if (qa == dst_q) {
    rel.dir = EdgeDir::Left;
  } else {
    return false;
  }

  auto& path = stmt.stages[static_cast<std::size_t>(p0.stage)]
                   .paths[static_cast<std::size_t>(p0.path)];
  path.nodes.erase(path.nodes.begin() + lo + 1, path.nodes.begin() + hi + 1);
  path.edges.erase(path.edges.begin() + lo, path.edges.begin() + hi + 1);
  path.edges.insert(path.edges.begin() + lo, std::move(rel));
  return true;
}

OptimizeResult optimize(const Graph& graph, const ViewCatalog& views, const Statement& stmt) {
  OptimizeResult res;
  res.stmt = stmt;
  std::ostringstream log;
  if (!stmt.is_query() || has_placeholders(stmt)) {
    log << "no rewriting: statement is not a plain query\n";
    res.log = log.str();
    return res;
  }

  auto infos = collect_view_infos(graph, views);
  sort_by_opt_eff(infos);
  for (const auto& info : infos) {
    log << "view " << info.name << ": startNodes=" << info.n_start_label
        << " viewEdges=" << info.e_view_label
        << " scanCost=" << view_scan_cost(info.n_start_label, info.e_view_label)
        << " estimate=" << info.estimate << " optEff=" << info.opt_eff << "\n";
  }

  auto& parts = res.stmt.query_parts();
  for (auto& part : parts) {
    for (const auto& info : infos) {
      const ViewCatalogEntry& entry = views.view(info.name);
      // Each rewrite removes at least one base-typed edge, so this bound is
      // never reached; it only guards against a rewrite that failed to shrink.
      int bound = count_edges(part);
      int applied = 0;
      while (applied <= bound) {
        PatternGraph pg = build_pattern_graph(part);
        auto m = match_view(pg, entry);
        if (!m) break;
        std::string before = render(part);
        if (!change_pg(part, pg, entry, *m)) break;
        ++applied;
        res.rewrites_per_view[info.name] += 1;
        res.predicted_view_scan_cost += view_scan_cost(info.n_start_label, info.e_view_label);
        res.steps.push_back({info.name, info.opt_eff, std::move(before), render(part)});
      }
    }
  }

  if (res.steps.empty()) {
    log << "no view matched; statement unchanged\n";
  } else {
    for (const auto& s : res.steps) {
      log << "rewrite with " << s.view << " (optEff=" << s.opt_eff << "): " << s.after << "\n";
    }
    log << "predicted view-scan cost of applied views: " << res.predicted_view_scan_cost << "\n";
  }
  res.log = log.str();
  return res;
}

}  // namespace pgview
