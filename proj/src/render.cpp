#include <charconv>

#include "pgview/ast.hpp"
#include "pgview/parser.hpp"

namespace pgview {

const char* to_string(Placeholder p) {
  switch (p) {
    case Placeholder::L: return "$L";
    case Placeholder::K: return "$K";
    case Placeholder::V: return "$V";
    case Placeholder::SL: return "$SL";
    case Placeholder::SK: return "$SK";
    case Placeholder::SV: return "$SV";
    case Placeholder::DL: return "$DL";
    case Placeholder::DK: return "$DK";
    case Placeholder::DV: return "$DV";
    case Placeholder::RID: return "$RID";
  }
  return "$?";
}

std::string PropertyValue::to_text() const {
  if (is_int()) return std::to_string(as_int());
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_double()) {
    // shortest representation that round-trips; always keep a decimal marker
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), as_double());
    std::string out(buf, ptr);
    if (out.find('.') == std::string::npos && out.find('e') == std::string::npos &&
        out.find("inf") == std::string::npos && out.find("nan") == std::string::npos)
      out += ".0";
    return out;
  }
  std::string out = "'";
  for (char c : as_string()) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out += "'";
  return out;
}

namespace {

void render_label(std::string& out, const LabelRef& l) {
  out += l.is_placeholder() ? to_string(l.placeholder()) : l.name();
}

void render_props(std::string& out, const std::vector<PropEntry>& props) {
  out += "{";
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (i) out += ",";
    const PropEntry& e = props[i];
    out += e.key.is_placeholder() ? to_string(e.key.placeholder()) : e.key.name();
    out += ":";
    out += e.value.is_placeholder() ? to_string(e.value.placeholder()) : e.value.value().to_text();
  }
  out += "}";
}

void render_node(std::string& out, const NodePattern& n) {
  out += "(";
  if (n.variable) out += *n.variable;
  for (const LabelRef& l : n.labels) {
    out += ":";
    render_label(out, l);
  }
  if (!n.props.empty()) render_props(out, n.props);
  out += ")";
}

void render_range(std::string& out, const RangeSpec& range) {
  if (!range.has_range) return;
  out += "*";
  if (range.max && *range.max == range.min) {
    out += std::to_string(range.min);
  } else {
    out += std::to_string(range.min);
    out += "..";
    if (range.max) out += std::to_string(*range.max);
  }
}

void render_rel(std::string& out, const RelPattern& r) {
  out += (r.dir == EdgeDir::Left) ? "<-" : "-";
  bool body = r.variable || r.type || r.range.has_range || !r.props.empty() || r.no_dup_edge;
  if (body) {
    out += "[";
    if (r.variable) out += *r.variable;
    if (r.type) {
      out += ":";
      render_label(out, *r.type);
    }
    render_range(out, r.range);
    if (!r.props.empty()) render_props(out, r.props);
    if (r.no_dup_edge) out += " NoDupEdge";
    out += "]";
  }
  out += (r.dir == EdgeDir::Right) ? "->" : "-";
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void render_value_ref(std::string& out, const ValueRef& v) {
  out += v.is_placeholder() ? to_string(v.placeholder()) : v.value().to_text();
}

void render_stage(std::string& out, const Stage& stage) {
  for (std::size_t i = 0; i < stage.paths.size(); ++i) {
    bool new_clause = i == 0 || stage.path_clause[i] != stage.path_clause[i - 1];
    if (new_clause) {
      if (i) out += " ";
      out += "MATCH ";
    } else {
      out += ",";
    }
    out += render(stage.paths[i]);
  }
  if (!stage.where.empty()) {
    out += " WHERE ";
    for (std::size_t i = 0; i < stage.where.size(); ++i) {
      if (i) out += " AND ";
      const Predicate& p = stage.where[i];
      if (p.kind == Predicate::Kind::IdEquals) {
        out += "id(" + p.variable + ")=";
      } else {
        out += p.variable + "." + p.property + "=";
      }
      render_value_ref(out, p.value);
    }
  }
}

}  // namespace

std::string render(const PatternPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    render_node(out, path.nodes[i]);
    if (i < path.edges.size()) render_rel(out, path.edges[i]);
  }
  return out;
}

std::string render(const QueryStatement& q) {
  std::string out;
  for (std::size_t i = 0; i < q.stages.size(); ++i) {
    if (i) {
      out += " WITH ";
      out += join(q.with_vars[i - 1], ",");
      if (!q.stages[i].paths.empty() || !q.stages[i].where.empty()) out += " ";
    }
    render_stage(out, q.stages[i]);
  }
  switch (q.action) {
    case QueryStatement::Action::Return: {
      out += " RETURN ";
      std::vector<std::string> items;
      for (const ReturnItem& item : q.return_items)
        items.push_back(item.kind == ReturnItem::Kind::CountStar ? "count(*)" : item.variable);
      out += join(items, ",");
      break;
    }
    case QueryStatement::Action::Delete:
      out += " DELETE ";
      out += join(q.delete_vars, ",");
      break;
    case QueryStatement::Action::Create: {
      out += out.empty() ? "CREATE " : " CREATE ";
      for (std::size_t i = 0; i < q.create_paths.size(); ++i) {
        if (i) out += ",";
        out += render(q.create_paths[i]);
      }
      break;
    }
    case QueryStatement::Action::None:
      break;
  }
  // statements that begin with an action (plain CREATE) have no leading stage text
  if (out.rfind(" ", 0) == 0) out.erase(0, 1);
  return out;
}

std::string render(const Statement& stmt) {
  if (stmt.is_query()) {
    std::vector<std::string> parts;
    for (const QueryStatement& q : stmt.query_parts()) parts.push_back(render(q));
    return join(parts, " UNION ");
  }
  if (const auto* cv = std::get_if<CreateViewStatement>(&stmt.node)) {
    return "CREATE VIEW " + cv->def.name + " AS ( CONSTRUCT " + render(cv->def.construct) +
           " MATCH " + render(cv->def.match_path) + " )";
  }
  if (const auto* dv = std::get_if<DropViewStatement>(&stmt.node)) {
    return "DROP VIEW " + dv->name;
  }
  return "SHOW VIEWS";
}

bool has_placeholders(const Statement& stmt) {
  bool found = false;
  auto check_label = [&](const LabelRef& l) { found |= l.is_placeholder(); };
  auto check_props = [&](const std::vector<PropEntry>& props) {
    for (const PropEntry& e : props)
      found |= e.key.is_placeholder() || e.value.is_placeholder();
  };
  auto check_path = [&](const PatternPath& p) {
    for (const NodePattern& n : p.nodes) {
      for (const LabelRef& l : n.labels) check_label(l);
      check_props(n.props);
    }
    for (const RelPattern& r : p.edges) {
      if (r.type) check_label(*r.type);
      check_props(r.props);
      if (r.variable && !r.variable->empty() && (*r.variable)[0] == '@') found = true;
    }
  };
  if (!stmt.is_query()) {
    if (const auto* cv = std::get_if<CreateViewStatement>(&stmt.node)) {
      check_path(cv->def.construct);
      check_path(cv->def.match_path);
    }
    return found;
  }
  for (const QueryStatement& q : stmt.query_parts()) {
    for (const Stage& st : q.stages) {
      for (const PatternPath& p : st.paths) check_path(p);
      for (const Predicate& pred : st.where) {
        found |= pred.value.is_placeholder();
        if (!pred.variable.empty() && pred.variable[0] == '@') found = true;
      }
    }
    for (const PatternPath& p : q.create_paths) check_path(p);
  }
  return found;
}

}  // namespace pgview
