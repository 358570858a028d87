#include "pgview/templates.hpp"

#include <algorithm>
#include <set>

#include "pgview/errors.hpp"

namespace pgview {

namespace {

/// Copies the view match path and marks every element with its position, so
/// that rows matched by different statements of one event can be recognized
/// as the same graph instance.
PatternPath annotate(const PatternPath& p) {
  PatternPath out = p;
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    out.nodes[i].view_node_pos = static_cast<int>(i);
  for (std::size_t j = 0; j < out.edges.size(); ++j) {
    out.edges[j].view_edge_pos = static_cast<int>(j);
    out.edges[j].view_seg_index = 0;
  }
  return out;
}

RangeSpec make_range(std::uint32_t lo, std::optional<std::uint32_t> hi) {
  RangeSpec r;
  r.min = lo;
  r.max = hi;
  r.has_range = true;
  return r;
}

std::string construct_rel_var(const ViewDefinition& def) {
  if (def.construct.edges[0].variable) return *def.construct.edges[0].variable;
  std::set<std::string> taken;
  auto grab = [&](const PatternPath& p) {
    for (const NodePattern& n : p.nodes)
      if (n.variable) taken.insert(*n.variable);
    for (const RelPattern& e : p.edges)
      if (e.variable) taken.insert(*e.variable);
  };
  grab(def.construct);
  grab(def.match_path);
  std::string var = "r";
  int k = 0;
  while (taken.count(var)) var = "r" + std::to_string(k++);
  return var;
}

/// Action suffix: WITH vf,vl then either a NoDupEdge-guarded delete of one
/// view edge, or the creation of one view edge.
void attach_action(QueryStatement& q, const ViewDefinition& def, bool is_delete) {
  const std::string& vf = *def.match_path.nodes.front().variable;
  const std::string& vl = *def.match_path.nodes.back().variable;
  q.with_vars.push_back({vf, vl});

  PatternPath cons;
  for (const NodePattern& n : def.construct.nodes) {
    NodePattern plain;
    plain.variable = n.variable;
    cons.nodes.push_back(std::move(plain));
  }
  RelPattern rel;
  rel.variable = construct_rel_var(def);
  rel.type = LabelRef{def.name};
  rel.dir = def.construct.edges[0].dir;
  cons.edges.push_back(rel);

  if (is_delete) {
    cons.edges[0].no_dup_edge = true;
    Stage s1;
    s1.paths.push_back(cons);
    s1.path_clause.push_back(0);
    q.stages.push_back(std::move(s1));
    q.action = QueryStatement::Action::Delete;
    q.delete_vars.push_back(*rel.variable);
  } else {
    q.stages.push_back(Stage{});
    q.action = QueryStatement::Action::Create;
    q.create_paths.push_back(std::move(cons));
  }
}

Statement make_statement(PatternPath path, const ViewDefinition& def, bool has_rid,
                         bool is_delete) {
  QueryStatement q;
  Stage s0;
  s0.paths.push_back(std::move(path));
  s0.path_clause.push_back(0);
  if (has_rid) {
    Predicate p;
    p.kind = Predicate::Kind::IdEquals;
    p.variable = "@R";
    p.value.v = Placeholder::RID;
    s0.where.push_back(std::move(p));
  }
  q.stages.push_back(std::move(s0));
  attach_action(q, def, is_delete);
  Statement stmt;
  stmt.node = std::vector<QueryStatement>{std::move(q)};
  return stmt;
}

NodePattern placeholder_node(Placeholder label, Placeholder key, Placeholder value) {
  NodePattern n;
  n.labels.push_back(LabelRef{label});
  n.props.push_back(PropEntry{KeyRef{key}, ValueRef{value}});
  return n;
}

RelPattern seg_rel(const RelPattern& base, RangeSpec range, int seg) {
  RelPattern r;
  r.type = base.type;
  r.dir = base.dir;
  r.range = range;
  r.view_edge_pos = base.view_edge_pos;
  r.view_seg_index = seg;
  return r;
}

/// Replaces edge j of the annotated path with the given pieces (alternating
/// rel/node/rel/... in pattern order).
PatternPath splice(const PatternPath& path, std::size_t j, std::vector<RelPattern> rels,
                   std::vector<NodePattern> mids) {
  PatternPath out;
  for (std::size_t i = 0; i <= j; ++i) out.nodes.push_back(path.nodes[i]);
  for (std::size_t i = 0; i < j; ++i) out.edges.push_back(path.edges[i]);
  for (std::size_t k = 0; k < rels.size(); ++k) {
    out.edges.push_back(std::move(rels[k]));
    if (k < mids.size()) out.nodes.push_back(std::move(mids[k]));
  }
  for (std::size_t i = j + 1; i < path.nodes.size(); ++i) out.nodes.push_back(path.nodes[i]);
  for (std::size_t i = j + 1; i < path.edges.size(); ++i) out.edges.push_back(path.edges[i]);
  return out;
}

bool is_vlen(const RelPattern& r) { return r.range.has_range; }

}  // namespace

std::vector<Statement> gen_delete_node_template(const ViewDefinition& def) {
  std::vector<Statement> out;
  PatternPath base = annotate(def.match_path);

  // one statement pinning each explicit path node to the vanished node
  for (std::size_t k = 0; k < base.nodes.size(); ++k) {
    PatternPath p = base;
    p.nodes[k].labels.push_back(LabelRef{Placeholder::L});
    p.nodes[k].props.push_back(PropEntry{KeyRef{Placeholder::K}, ValueRef{Placeholder::V}});
    out.push_back(make_statement(std::move(p), def, false, true));
  }

  // per variable-length edge: the vanished node interior to the trail,
  // one statement per distance from the trail's start
  for (std::size_t j = 0; j < base.edges.size(); ++j) {
    const RelPattern& e = base.edges[j];
    if (!is_vlen(e)) continue;
    std::uint32_t n = e.range.min;
    auto emit = [&](RangeSpec r1, RangeSpec r2) {
      NodePattern mid = placeholder_node(Placeholder::L, Placeholder::K, Placeholder::V);
      std::vector<RelPattern> rels;
      if (e.dir == EdgeDir::Right) {
        rels = {seg_rel(e, r1, 0), seg_rel(e, r2, 1)};
      } else {
        rels = {seg_rel(e, r2, 0), seg_rel(e, r1, 1)};
      }
      out.push_back(
          make_statement(splice(base, j, std::move(rels), {std::move(mid)}), def, false, true));
    };
    if (e.range.unbounded()) {
      std::uint32_t hi = std::max<std::uint32_t>(n > 0 ? n - 1 : 0, 1);
      for (std::uint32_t i = 1; i <= hi; ++i) {
        if (i < hi)
          emit(make_range(i, i), make_range(n - i, std::nullopt));
        else
          emit(make_range(i, std::nullopt), make_range(1, std::nullopt));
      }
    } else {
      std::uint32_t m = *e.range.max;
      for (std::uint32_t i = 1; i + 1 <= m; ++i)
        emit(make_range(i, i), make_range(std::max<std::uint32_t>(n > i ? n - i : 0, 1), m - i));
    }
  }
  return out;
}

std::vector<Statement> gen_update_edge_template(const ViewDefinition& def, bool is_create) {
  std::vector<Statement> out;
  PatternPath base = annotate(def.match_path);

  for (std::size_t j = 0; j < base.edges.size(); ++j) {
    const RelPattern& e = base.edges[j];

    if (!is_vlen(e)) {
      // the touched edge is this fixed edge; pin both endpoints and its id
      PatternPath p = base;
      bool fwd = e.dir == EdgeDir::Right;
      NodePattern& src = p.nodes[fwd ? j : j + 1];
      NodePattern& dst = p.nodes[fwd ? j + 1 : j];
      src.labels.push_back(LabelRef{Placeholder::SL});
      src.props.push_back(PropEntry{KeyRef{Placeholder::SK}, ValueRef{Placeholder::SV}});
      dst.labels.push_back(LabelRef{Placeholder::DL});
      dst.props.push_back(PropEntry{KeyRef{Placeholder::DK}, ValueRef{Placeholder::DV}});
      p.edges[j].variable = "@R";
      out.push_back(make_statement(std::move(p), def, true, !is_create));
      continue;
    }

    // the touched edge sits somewhere inside the trail: split around it
    std::uint32_t n = e.range.min;
    auto emit = [&](RangeSpec r1, RangeSpec r2) {
      NodePattern src = placeholder_node(Placeholder::SL, Placeholder::SK, Placeholder::SV);
      NodePattern dst = placeholder_node(Placeholder::DL, Placeholder::DK, Placeholder::DV);
      RelPattern mid;
      mid.variable = "@R";
      mid.type = e.type;
      mid.dir = e.dir;
      mid.view_edge_pos = e.view_edge_pos;
      std::vector<RelPattern> rels;
      std::vector<NodePattern> mids;
      if (e.dir == EdgeDir::Right) {
        mid.view_seg_index = 1;
        rels = {seg_rel(e, r1, 0), mid, seg_rel(e, r2, 2)};
        mids = {std::move(src), std::move(dst)};
      } else {
        mid.view_seg_index = 1;
        rels = {seg_rel(e, r2, 0), mid, seg_rel(e, r1, 2)};
        mids = {std::move(dst), std::move(src)};
      }
      out.push_back(make_statement(splice(base, j, std::move(rels), std::move(mids)), def, true,
                                   !is_create));
    };
    if (e.range.unbounded()) {
      std::uint32_t hi = n > 0 ? n - 1 : 0;
      for (std::uint32_t i = 0; i <= hi; ++i) {
        if (i < hi)
          emit(make_range(i, i), make_range(n - 1 - i, std::nullopt));
        else
          emit(make_range(i, std::nullopt), make_range(0, std::nullopt));
      }
    } else {
      std::uint32_t m = *e.range.max;
      for (std::uint32_t i = 0; i + 1 <= m; ++i)
        emit(make_range(i, i),
             make_range(n > i + 1 ? n - i - 1 : 0, m - i - 1));
    }
  }
  return out;
}

MaintenanceTemplateSet generate_templates(const ViewDefinition& def) {
  MaintenanceTemplateSet set;
  set.delete_node = gen_delete_node_template(def);
  set.create_edge = gen_update_edge_template(def, true);
  set.delete_edge = gen_update_edge_template(def, false);
  return set;
}

namespace {

enum class Family { None, Node, Edge };

Family family_of(Placeholder p) {
  switch (p) {
    case Placeholder::L:
    case Placeholder::K:
    case Placeholder::V:
      return Family::Node;
    default:
      return Family::Edge;
  }
}

struct Substitution {
  Family family = Family::None;
  // node family
  std::string label, key;
  PropertyValue value;
  // edge family
  std::string sl, sk, dl, dk;
  PropertyValue sv, dv;
  std::int64_t rid = 0;

  std::string label_for(Placeholder p) const {
    check(p);
    switch (p) {
      case Placeholder::L: return label;
      case Placeholder::SL: return sl;
      case Placeholder::DL: return dl;
      default:
        throw Error(ErrorCode::PlaceholderMismatch,
                    std::string(to_string(p)) + " is not a label placeholder");
    }
  }
  std::string key_for(Placeholder p) const {
    check(p);
    switch (p) {
      case Placeholder::K: return key;
      case Placeholder::SK: return sk;
      case Placeholder::DK: return dk;
      default:
        throw Error(ErrorCode::PlaceholderMismatch,
                    std::string(to_string(p)) + " is not a key placeholder");
    }
  }
  PropertyValue value_for(Placeholder p) const {
    check(p);
    switch (p) {
      case Placeholder::V: return value;
      case Placeholder::SV: return sv;
      case Placeholder::DV: return dv;
      case Placeholder::RID: return PropertyValue(rid);
      default:
        throw Error(ErrorCode::PlaceholderMismatch,
                    std::string(to_string(p)) + " is not a value placeholder");
    }
  }

 private:
  void check(Placeholder p) const {
    if (family_of(p) != family)
      throw Error(ErrorCode::PlaceholderMismatch,
                  std::string("template uses ") + to_string(p) +
                      (family == Family::Node ? " but node data was supplied"
                                              : " but edge data was supplied"));
  }
};

void subst_path(PatternPath& path, const Substitution& sub) {
  for (NodePattern& n : path.nodes) {
    for (LabelRef& l : n.labels)
      if (l.is_placeholder()) l.v = sub.label_for(l.placeholder());
    // identical stacked labels collapse
    std::vector<LabelRef> labels;
    for (LabelRef& l : n.labels) {
      bool dup = false;
      for (const LabelRef& have : labels) dup |= have == l;
      if (!dup) labels.push_back(std::move(l));
    }
    n.labels = std::move(labels);
    for (PropEntry& e : n.props) {
      if (e.key.is_placeholder()) e.key.v = sub.key_for(e.key.placeholder());
      if (e.value.is_placeholder()) e.value.v = sub.value_for(e.value.placeholder());
    }
  }
  for (RelPattern& r : path.edges) {
    if (r.type && r.type->is_placeholder()) r.type->v = sub.label_for(r.type->placeholder());
    for (PropEntry& e : r.props) {
      if (e.key.is_placeholder()) e.key.v = sub.key_for(e.key.placeholder());
      if (e.value.is_placeholder()) e.value.v = sub.value_for(e.value.placeholder());
    }
  }
}

Statement subst_statement(const Statement& tmpl, const Substitution& sub) {
  Statement out = tmpl;
  if (!out.is_query())
    throw Error(ErrorCode::PlaceholderMismatch, "only query templates can be instantiated");
  for (QueryStatement& q : out.query_parts()) {
    for (Stage& st : q.stages) {
      for (PatternPath& p : st.paths) subst_path(p, sub);
      for (Predicate& pred : st.where)
        if (pred.value.is_placeholder())
          pred.value.v = sub.value_for(pred.value.placeholder());
    }
    for (PatternPath& p : q.create_paths) subst_path(p, sub);
  }
  return out;
}

}  // namespace

Statement instantiate(const Statement& tmpl, const NodeInfo& info) {
  Substitution sub;
  sub.family = Family::Node;
  sub.label = info.label;
  sub.key = info.pk_name;
  sub.value = info.pk_value;
  return subst_statement(tmpl, sub);
}

Statement instantiate(const Statement& tmpl, const EdgeInfo& info) {
  Substitution sub;
  sub.family = Family::Edge;
  sub.sl = info.src.label;
  sub.sk = info.src.pk_name;
  sub.sv = info.src.pk_value;
  sub.dl = info.dst.label;
  sub.dk = info.dst.pk_name;
  sub.dv = info.dst.pk_value;
  sub.rid = static_cast<std::int64_t>(info.edge_id);
  return subst_statement(tmpl, sub);
}

}  // namespace pgview
