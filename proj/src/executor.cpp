#include "pgview/executor.hpp"

#include <algorithm>
#include <map>

#include "pgview/parser.hpp"

namespace pgview {

namespace {

struct SlotVal {
  enum Kind { Empty, NodeV, EdgeV, TrailV } kind = Empty;
  std::uint64_t id = 0;
  std::vector<EdgeId> trail;
};

struct NodeCheck {
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, PropertyValue>> props;
};

enum class OpKind {
  Unit, ScanLabel, ScanPk, ScanAll, Anchor, Expand, VarExpand, Filter, Dedup, Project, Action
};

struct KeyPart {
  int pos = 0;        // view node/edge position
  int seg = 0;        // segment order for split edges
  bool is_node = false;
  int slot = -1;
};

struct ResolvedPred {
  Predicate::Kind kind = Predicate::Kind::PropEquals;
  int slot = -1;
  std::string display;
  std::string property;
  PropertyValue value;
};

struct Op {
  OpKind kind = OpKind::Unit;
  std::string name;
  OpStats stats;

  int slot = -1;  // scan/anchor target
  std::string label;
  PropertyValue pk_value;
  NodeCheck check;

  int src_slot = -1;
  int dst_slot = -1;
  int rel_slot = -1;
  bool dst_bound = false;
  Direction dir = Direction::Out;
  std::optional<std::string> type;
  std::uint32_t min = 1;
  std::optional<std::uint32_t> max = 1;
  bool no_dup = false;
  std::vector<std::pair<std::string, PropertyValue>> rel_props;
  int clause = 0;

  ResolvedPred pred;
  std::vector<std::string> proj;
  std::vector<KeyPart> key_parts;
};

std::string resolve_label(const LabelRef& l) {
  if (l.is_placeholder())
    throw Error(ErrorCode::UnresolvedPlaceholder,
                std::string("label placeholder ") + to_string(l.placeholder()));
  return l.name();
}

PropertyValue resolve_value(const ValueRef& v) {
  if (v.is_placeholder())
    throw Error(ErrorCode::UnresolvedPlaceholder,
                std::string("value placeholder ") + to_string(v.placeholder()));
  return v.value();
}

std::pair<std::string, PropertyValue> resolve_prop(const PropEntry& e) {
  if (e.key.is_placeholder())
    throw Error(ErrorCode::UnresolvedPlaceholder,
                std::string("key placeholder ") + to_string(e.key.placeholder()));
  return {e.key.name(), resolve_value(e.value)};
}

NodeCheck make_check(const NodePattern& n) {
  NodeCheck c;
  for (const LabelRef& l : n.labels) {
    std::string name = resolve_label(l);
    if (std::find(c.labels.begin(), c.labels.end(), name) == c.labels.end())
      c.labels.push_back(std::move(name));
  }
  for (const PropEntry& e : n.props) c.props.push_back(resolve_prop(e));
  return c;
}

bool node_ok(const Graph& g, NodeId id, const NodeCheck& c) {
  const Node& n = g.node(id);
  for (const std::string& l : c.labels)
    if (n.label != l) return false;
  for (const auto& [k, v] : c.props) {
    auto it = n.props.find(k);
    if (it == n.props.end() || it->second != v) return false;
  }
  return true;
}

bool edge_props_ok(const Edge& e, const std::vector<std::pair<std::string, PropertyValue>>& ps) {
  for (const auto& [k, v] : ps) {
    auto it = e.props.find(k);
    if (it == e.props.end() || it->second != v) return false;
  }
  return true;
}

std::string brief_node(const NodePattern& n) {
  std::string out = "(";
  if (n.variable) out += *n.variable;
  for (const LabelRef& l : n.labels) {
    out += ":";
    out += l.is_placeholder() ? to_string(l.placeholder()) : l.name();
  }
  out += ")";
  return out;
}

/// Operator pipeline for one union part. Built statically; deterministic.
class Plan {
 public:
  Plan(const Graph& g, const QueryStatement& stmt, MaintenanceContext* ctx)
      : g_(g), stmt_(stmt), ctx_(ctx) {
    build();
  }

  void run();

  const std::vector<Op>& ops() const { return ops_; }
  std::vector<Op>& ops() { return ops_; }
  const std::vector<std::vector<SlotVal>>& sink() const { return sink_; }
  std::vector<std::vector<SlotVal>>& sink() { return sink_; }
  int slot_of(const std::string& var) const {
    auto it = var_slot_.find(var);
    if (it == var_slot_.end())
      throw Error(ErrorCode::UnboundVariable, "variable '" + var + "'");
    return it->second;
  }
  bool is_no_dup_slot(int slot) const { return no_dup_slots_.count(slot) > 0; }
  int action_op() const { return static_cast<int>(ops_.size()) - 1; }
  // stage-0 positional slots, used for MatchRow extraction
  const std::vector<std::vector<int>>& s0_node_slots() const { return s0_node_slots_; }
  const std::vector<std::vector<int>>& s0_rel_slots() const { return s0_rel_slots_; }
  int num_slots() const { return nslots_; }

 private:
  void build();
  void build_path(const PatternPath& path, int clause, bool record);
  int slot_for_var(const std::optional<std::string>& var) {
    if (!var) return nslots_++;
    auto it = var_slot_.find(*var);
    if (it != var_slot_.end()) return it->second;
    int s = nslots_++;
    var_slot_[*var] = s;
    return s;
  }
  void step(std::size_t i);
  void emit(std::size_t i);
  bool used_in_clause(int clause, EdgeId e) const {
    for (const auto& [c, id] : used_)
      if (c == clause && id == e) return true;
    return false;
  }
  void var_expand(const Op& op, std::size_t i, NodeId cur, std::uint32_t len);

  const Graph& g_;
  const QueryStatement& stmt_;
  MaintenanceContext* ctx_;
  std::vector<Op> ops_;
  std::map<std::string, int> var_slot_;
  std::map<int, int> binder_op_;  // slot -> op index that binds it
  std::set<int> no_dup_slots_;
  int nslots_ = 0;
  std::vector<std::vector<int>> s0_node_slots_;
  std::vector<std::vector<int>> s0_rel_slots_;

  // run state
  std::vector<SlotVal> row_;
  std::vector<std::pair<int, EdgeId>> used_;  // (clause, edge) of the partial row
  std::vector<std::vector<SlotVal>> sink_;
};

void Plan::build() {
  int global_clause = 0;
  for (std::size_t s = 0; s < stmt_.stages.size(); ++s) {
    const Stage& stage = stmt_.stages[s];
    if (s > 0) {
      Op op;
      op.kind = OpKind::Project;
      op.proj = stmt_.with_vars[s - 1];
      std::string vars;
      for (std::size_t i = 0; i < op.proj.size(); ++i)
        vars += (i ? "," : "") + op.proj[i];
      op.name = "Project(" + vars + ")";
      ops_.push_back(std::move(op));
    }
    int stage_first = static_cast<int>(ops_.size());
    int last_clause = -1;
    for (std::size_t p = 0; p < stage.paths.size(); ++p) {
      int c = stage.path_clause.empty() ? 0 : stage.path_clause[p];
      if (c != last_clause) {
        if (last_clause != -1) ++global_clause;
        last_clause = c;
      }
      build_path(stage.paths[p], global_clause, s == 0);
    }
    ++global_clause;

    // WHERE conjuncts filter as early as their variables allow, but never
    // before this stage.
    struct Pending {
      int ip;
      int idx;
      Op op;
    };
    std::vector<Pending> pending;
    for (std::size_t w = 0; w < stage.where.size(); ++w) {
      const Predicate& pred = stage.where[w];
      Op op;
      op.kind = OpKind::Filter;
      op.pred.kind = pred.kind;
      op.pred.slot = slot_of(pred.variable);
      if (pred.kind == Predicate::Kind::PropEquals) {
        op.pred.property = pred.property;
        op.pred.value = resolve_value(pred.value);
        op.pred.display = pred.variable + "." + pred.property + "=" + op.pred.value.to_text();
      } else {
        op.pred.value = resolve_value(pred.value);
        if (!op.pred.value.is_int())
          throw Error(ErrorCode::SyntaxError, "id() compares against an integer");
        op.pred.display = "id(" + pred.variable + ")=" + op.pred.value.to_text();
      }
      op.name = "Filter(" + op.pred.display + ")";
      int ip = stage_first;
      auto b = binder_op_.find(op.pred.slot);
      if (b != binder_op_.end()) ip = std::max(ip, b->second + 1);
      pending.push_back(Pending{ip, static_cast<int>(w), std::move(op)});
    }
    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
      if (a.ip != b.ip) return a.ip > b.ip;
      return a.idx > b.idx;
    });
    for (Pending& pen : pending) ops_.insert(ops_.begin() + pen.ip, std::move(pen.op));

    if (s == 0 && ctx_ && ctx_->seen_instances) {
      std::vector<KeyPart> parts;
      for (const PatternPath& path : stage.paths) {
        // positions in s0 slot tables survive the filter insertions: slots,
        // not op indexes, are recorded there
        std::size_t pi = &path - stage.paths.data();
        for (std::size_t i = 0; i < path.nodes.size(); ++i)
          if (path.nodes[i].view_node_pos)
            parts.push_back(KeyPart{*path.nodes[i].view_node_pos, 0, true,
                                    s0_node_slots_[pi][i]});
        for (std::size_t i = 0; i < path.edges.size(); ++i)
          if (path.edges[i].view_edge_pos)
            parts.push_back(KeyPart{*path.edges[i].view_edge_pos, path.edges[i].view_seg_index,
                                    false, s0_rel_slots_[pi][i]});
      }
      if (!parts.empty()) {
        std::sort(parts.begin(), parts.end(), [](const KeyPart& a, const KeyPart& b) {
          if (a.is_node != b.is_node) return a.is_node;
          if (a.pos != b.pos) return a.pos < b.pos;
          return a.seg < b.seg;
        });
        Op op;
        op.kind = OpKind::Dedup;
        op.name = "DedupInstances";
        op.key_parts = std::move(parts);
        ops_.push_back(std::move(op));
      }
    }
  }

  Op action;
  action.kind = OpKind::Action;
  switch (stmt_.action) {
    case QueryStatement::Action::Return: {
      bool count = !stmt_.return_items.empty() &&
                   stmt_.return_items[0].kind == ReturnItem::Kind::CountStar;
      action.name = count ? "CountAggregate" : "Return";
      break;
    }
    case QueryStatement::Action::Delete: {
      std::string vars;
      for (std::size_t i = 0; i < stmt_.delete_vars.size(); ++i)
        vars += (i ? "," : "") + stmt_.delete_vars[i];
      action.name = "Delete(" + vars + ")";
      break;
    }
    case QueryStatement::Action::Create:
      action.name = "Create";
      break;
    case QueryStatement::Action::None:
      action.name = "Collect";
      break;
  }
  ops_.push_back(std::move(action));
}

void Plan::build_path(const PatternPath& path, int clause, bool record) {
  std::vector<int> node_slots(path.nodes.size());
  std::vector<int> rel_slots(path.edges.size());

  const NodePattern& n0 = path.nodes[0];
  int slot0 = slot_for_var(n0.variable);
  node_slots[0] = slot0;
  bool bound0 = binder_op_.count(slot0) > 0;
  if (bound0) {
    Op op;
    op.kind = OpKind::Anchor;
    op.slot = slot0;
    op.check = make_check(n0);
    op.name = "Anchor" + brief_node(n0);
    ops_.push_back(std::move(op));
  } else {
    Op op;
    op.slot = slot0;
    op.check = make_check(n0);
    std::string pk_label;
    PropertyValue pk_value;
    for (const std::string& l : op.check.labels) {
      if (!g_.schema().has_node_label(l)) continue;
      const std::string& pk = g_.schema().pk_property(l);
      for (const auto& [k, v] : op.check.props) {
        if (k == pk) {
          pk_label = l;
          pk_value = v;
          break;
        }
      }
      if (!pk_label.empty()) break;
    }
    if (!pk_label.empty()) {
      op.kind = OpKind::ScanPk;
      op.label = pk_label;
      op.pk_value = pk_value;
      op.name = "NodeByPkLookup" + brief_node(n0);
    } else if (!op.check.labels.empty()) {
      op.kind = OpKind::ScanLabel;
      op.label = op.check.labels[0];
      op.name = "NodeByLabelScan" + brief_node(n0);
    } else {
      op.kind = OpKind::ScanAll;
      op.name = "AllNodesScan" + brief_node(n0);
    }
    binder_op_[slot0] = static_cast<int>(ops_.size());
    ops_.push_back(std::move(op));
  }

  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const RelPattern& r = path.edges[i];
    const NodePattern& nd = path.nodes[i + 1];
    int dslot = slot_for_var(nd.variable);
    node_slots[i + 1] = dslot;
    int rslot = slot_for_var(r.variable);
    rel_slots[i] = rslot;

    Op op;
    op.src_slot = node_slots[i];
    op.dst_slot = dslot;
    op.rel_slot = rslot;
    op.dst_bound = binder_op_.count(dslot) > 0;
    op.check = make_check(nd);
    op.dir = r.dir == EdgeDir::Right  ? Direction::Out
             : r.dir == EdgeDir::Left ? Direction::In
                                      : Direction::Both;
    if (r.type) op.type = resolve_label(*r.type);
    for (const PropEntry& e : r.props) op.rel_props.push_back(resolve_prop(e));
    op.clause = clause;
    op.no_dup = r.no_dup_edge;

    std::string arrow_l = r.dir == EdgeDir::Left ? "<-" : "-";
    std::string arrow_r = r.dir == EdgeDir::Right ? "->" : "-";
    std::string body;
    if (r.variable) body += *r.variable;
    if (op.type) body += ":" + *op.type;

    if (r.range.has_range) {
      op.kind = OpKind::VarExpand;
      op.min = r.range.min;
      op.max = r.range.max;
      body += "*" + std::to_string(op.min);
      if (!op.max)
        body += "..";
      else if (*op.max != op.min)
        body += ".." + std::to_string(*op.max);
      op.name = "VarLenExpand(" + brief_node(path.nodes[i]) + arrow_l + "[" + body + "]" +
                arrow_r + brief_node(nd) + ")";
    } else {
      op.kind = OpKind::Expand;
      op.min = 1;
      op.max = 1;
      if (r.no_dup_edge) body += " NoDupEdge";
      op.name = std::string(op.dst_bound ? "ExpandInto(" : "ExpandAll(") +
                brief_node(path.nodes[i]) + arrow_l + "[" + body + "]" + arrow_r +
                brief_node(nd) + ")";
      if (r.no_dup_edge) no_dup_slots_.insert(rslot);
    }
    binder_op_[rslot] = static_cast<int>(ops_.size());
    if (!op.dst_bound) binder_op_[dslot] = static_cast<int>(ops_.size());
    ops_.push_back(std::move(op));
  }

  if (record) {
    s0_node_slots_.push_back(std::move(node_slots));
    s0_rel_slots_.push_back(std::move(rel_slots));
  }
}

void Plan::run() {
  row_.assign(static_cast<std::size_t>(nslots_), SlotVal{});
  used_.clear();
  sink_.clear();
  step(0);
}

void Plan::emit(std::size_t i) {
  ++ops_[i].stats.rows;
  step(i + 1);
}

void Plan::step(std::size_t i) {
  if (ops_[i].kind == OpKind::Action) {
    ++ops_[i].stats.rows;
    sink_.push_back(row_);
    return;
  }
  Op& op = ops_[i];
  switch (op.kind) {
    case OpKind::Unit:
      emit(i);
      return;

    case OpKind::ScanLabel: {
      const auto& ids = g_.nodes_with_label(op.label);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        NodeId id = ids[k];
        ++op.stats.db_hits;
        if (!node_ok(g_, id, op.check)) continue;
        row_[op.slot] = SlotVal{SlotVal::NodeV, id, {}};
        emit(i);
      }
      return;
    }

    case OpKind::ScanAll: {
      g_.for_each_live_node([&](const Node& n) {
        ++op.stats.db_hits;
        if (node_ok(g_, n.id, op.check)) {
          row_[op.slot] = SlotVal{SlotVal::NodeV, n.id, {}};
          emit(i);
        }
        return true;
      });
      return;
    }

    case OpKind::ScanPk: {
      ++op.stats.db_hits;
      std::optional<NodeId> id = g_.lookup_pk(op.label, op.pk_value);
      if (id && node_ok(g_, *id, op.check)) {
        row_[op.slot] = SlotVal{SlotVal::NodeV, *id, {}};
        emit(i);
      }
      return;
    }

    case OpKind::Anchor: {
      const SlotVal& v = row_[op.slot];
      if (v.kind == SlotVal::NodeV && node_ok(g_, v.id, op.check)) emit(i);
      return;
    }

    case OpKind::Expand: {
      NodeId src = row_[op.src_slot].id;
      const std::string* type = op.type ? &*op.type : nullptr;
      bool stop = false;
      g_.for_each_incident(src, op.dir, type, [&](const Edge& e) {
        ++op.stats.db_hits;
        if (used_in_clause(op.clause, e.id)) return true;
        if (!edge_props_ok(e, op.rel_props)) return true;
        NodeId nb = (op.dir == Direction::Out) ? e.dst
                    : (op.dir == Direction::In) ? e.src
                                                : (e.src == src ? e.dst : e.src);
        ++op.stats.db_hits;  // neighbor materialized
        if (op.dst_bound) {
          if (row_[op.dst_slot].kind != SlotVal::NodeV || row_[op.dst_slot].id != nb)
            return true;
          if (!node_ok(g_, nb, op.check)) return true;
        } else if (!node_ok(g_, nb, op.check)) {
          return true;
        }
        if (!op.dst_bound) row_[op.dst_slot] = SlotVal{SlotVal::NodeV, nb, {}};
        row_[op.rel_slot] = SlotVal{SlotVal::EdgeV, e.id, {}};
        used_.emplace_back(op.clause, e.id);
        emit(i);
        used_.pop_back();
        if (op.no_dup) {
          stop = true;
          return false;
        }
        return true;
      });
      (void)stop;
      return;
    }

    case OpKind::VarExpand: {
      NodeId src = row_[op.src_slot].id;
      var_expand(op, i, src, 0);
      return;
    }

    case OpKind::Filter: {
      const SlotVal& v = row_[op.pred.slot];
      bool pass = false;
      if (op.pred.kind == Predicate::Kind::IdEquals) {
        if (v.kind == SlotVal::NodeV || v.kind == SlotVal::EdgeV)
          pass = static_cast<std::int64_t>(v.id) == op.pred.value.as_int();
      } else {
        const PropertyMap* props = nullptr;
        if (v.kind == SlotVal::NodeV)
          props = &g_.node(v.id).props;
        else if (v.kind == SlotVal::EdgeV)
          props = &g_.edge(v.id).props;
        if (props) {
          auto it = props->find(op.pred.property);
          pass = it != props->end() && it->second == op.pred.value;
        }
      }
      if (pass) emit(i);
      return;
    }

    case OpKind::Dedup: {
      // Segments with the same view-edge position fold into one flat trail
      // (parts are sorted by position, then segment). A statement that can
      // split the same trail at several points then keys every split
      // identically, so one instance is never processed twice per event.
      std::string key;
      std::size_t p = 0;
      while (p < op.key_parts.size()) {
        const KeyPart& part = op.key_parts[p];
        if (part.is_node) {
          key += "n" + std::to_string(part.pos) + "=" +
                 std::to_string(row_[part.slot].id) + ";";
          ++p;
          continue;
        }
        key += "e" + std::to_string(part.pos) + "=";
        bool first = true;
        while (p < op.key_parts.size() && !op.key_parts[p].is_node &&
               op.key_parts[p].pos == part.pos) {
          const SlotVal& v = row_[op.key_parts[p].slot];
          if (v.kind == SlotVal::EdgeV) {
            key += (first ? "" : ",") + std::to_string(v.id);
            first = false;
          } else {
            for (EdgeId id : v.trail) {
              key += (first ? "" : ",") + std::to_string(id);
              first = false;
            }
          }
          ++p;
        }
        key += ";";
      }
      if (ctx_->seen_instances->insert(key).second) emit(i);
      return;
    }

    case OpKind::Project:
      emit(i);
      return;

    case OpKind::Action:
      return;  // handled above
  }
}

void Plan::var_expand(const Op& op, std::size_t i, NodeId cur, std::uint32_t len) {
  Op& mop = ops_[i];
  if (len >= op.min) {
    bool ok;
    if (op.dst_bound)
      ok = row_[op.dst_slot].kind == SlotVal::NodeV && row_[op.dst_slot].id == cur &&
           node_ok(g_, cur, op.check);
    else
      ok = node_ok(g_, cur, op.check);
    if (ok) {
      if (!op.dst_bound) row_[op.dst_slot] = SlotVal{SlotVal::NodeV, cur, {}};
      SlotVal trail;
      trail.kind = SlotVal::TrailV;
      // this expansion pushed exactly `len` entries on top of used_
      for (std::size_t k = used_.size() - len; k < used_.size(); ++k)
        trail.trail.push_back(used_[k].second);
      row_[op.rel_slot] = std::move(trail);
      emit(i);
    }
  }
  if (op.max && len == *op.max) return;
  const std::string* type = op.type ? &*op.type : nullptr;
  g_.for_each_incident(cur, op.dir, type, [&](const Edge& e) {
    ++mop.stats.db_hits;
    if (used_in_clause(op.clause, e.id)) return true;
    if (!edge_props_ok(e, op.rel_props)) return true;
    NodeId nb = (op.dir == Direction::Out) ? e.dst
                : (op.dir == Direction::In) ? e.src
                                            : (e.src == cur ? e.dst : e.src);
    ++mop.stats.db_hits;
    used_.emplace_back(op.clause, e.id);
    var_expand(op, i, nb, len + 1);
    used_.pop_back();
    return true;
  });
}

}  // namespace

// ---------------------------------------------------------------------------

std::uint64_t ProfileReport::total_rows() const {
  std::uint64_t n = 0;
  for (const Part& p : parts)
    for (const OpStats& s : p.ops) n += s.rows;
  return n;
}

std::uint64_t ProfileReport::total_db_hits() const {
  std::uint64_t n = 0;
  for (const Part& p : parts)
    for (const OpStats& s : p.ops) n += s.db_hits;
  return n;
}

std::string ProfileReport::to_text() const {
  std::string out;
  std::size_t width = 8;
  for (const Part& p : parts)
    for (const OpStats& s : p.ops) width = std::max(width, s.name.size());
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    if (parts.size() > 1) out += "part " + std::to_string(pi + 1) + "\n";
    for (const OpStats& s : parts[pi].ops) {
      std::string line = s.name;
      line.resize(width + 2, ' ');
      line += "rows=" + std::to_string(s.rows);
      line.resize(width + 2 + 16, ' ');
      line += "dbHits=" + std::to_string(s.db_hits);
      out += line + "\n";
    }
  }
  out += "total dbHits=" + std::to_string(total_db_hits()) + "\n";
  return out;
}

std::string ProfileReport::to_csv() const {
  std::string out = "operator,rows,dbhits\n";
  for (const Part& p : parts) {
    for (const OpStats& s : p.ops) {
      std::string name = s.name;
      if (name.find(',') != std::string::npos || name.find('"') != std::string::npos) {
        std::string quoted = "\"";
        for (char c : name) {
          if (c == '"') quoted += "\"\"";
          else quoted.push_back(c);
        }
        quoted += "\"";
        name = std::move(quoted);
      }
      out += name + "," + std::to_string(s.rows) + "," + std::to_string(s.db_hits) + "\n";
    }
  }
  return out;
}

namespace {

std::string node_text(const Graph& g, NodeId id) {
  NodeRef ref = g.node_ref(id);
  return ref.label + "{" + ref.pk_name + ":" + ref.pk_value.to_text() + "}";
}

std::string edge_text(const Graph& g, EdgeId id) {
  const Edge& e = g.edge(id);
  return e.label + "[" + node_text(g, e.src) + "->" + node_text(g, e.dst) + "]";
}

std::string cell_text(const Graph& g, const SlotVal& v) {
  switch (v.kind) {
    case SlotVal::NodeV: return node_text(g, v.id);
    case SlotVal::EdgeV: return edge_text(g, v.id);
    case SlotVal::TrailV: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.trail.size(); ++i)
        out += (i ? "," : "") + edge_text(g, v.trail[i]);
      return out + "]";
    }
    case SlotVal::Empty: break;
  }
  return "null";
}

void apply_delete(Graph& g, Plan& plan, const QueryStatement& stmt, MaintenanceContext* ctx,
                  MutationSummary& sum, Op& action) {
  std::vector<int> slots;
  for (const std::string& v : stmt.delete_vars) slots.push_back(plan.slot_of(v));
  for (const auto& row : plan.sink()) {
    for (std::size_t vi = 0; vi < slots.size(); ++vi) {
      const SlotVal& v = row[slots[vi]];
      if (v.kind == SlotVal::NodeV) {
        if (!g.node_live(v.id)) continue;  // removed by an earlier row
        DeletionSummary ds = g.delete_node(v.id);
        sum.nodes_deleted += ds.nodes_removed;
        sum.base_edges_deleted += ds.base_edges_removed;
        sum.view_edges_deleted += ds.view_edges_removed;
        action.stats.db_hits +=
            ds.nodes_removed + ds.base_edges_removed + ds.view_edges_removed;
      } else if (v.kind == SlotVal::EdgeV) {
        EdgeId eid = v.id;
        if (!g.edge_live(eid)) {
          // NoDupEdge bindings re-resolve to the next parallel edge so each
          // row still removes at most one edge
          if (!plan.is_no_dup_slot(slots[vi])) continue;
          const Edge& dead = g.edge_any(eid);
          if (!g.node_live(dead.src) || !g.node_live(dead.dst)) continue;
          EdgeId found = 0;
          bool have = false;
          g.for_each_incident(dead.src, Direction::Out, &dead.label, [&](const Edge& e) {
            if (e.dst == dead.dst) {
              found = e.id;
              have = true;
              return false;
            }
            return true;
          });
          if (!have) continue;
          eid = found;
        }
        const Edge& e = g.edge(eid);
        if (ctx) {
          if (!e.is_view || e.label != ctx->view_name)
            throw Error(ErrorCode::IsViewEdge, "maintenance may only delete its view's edges");
          g.delete_view_edge_internal(eid);
          ++sum.view_edges_deleted;
          ++action.stats.db_hits;
        } else {
          DeletionSummary ds = g.delete_edge(eid);  // IsViewEdge propagates
          sum.base_edges_deleted += ds.base_edges_removed;
          ++action.stats.db_hits;
        }
      } else if (v.kind == SlotVal::TrailV) {
        for (EdgeId eid : v.trail) {
          if (!g.edge_live(eid)) continue;
          if (ctx) throw Error(ErrorCode::IsViewEdge, "maintenance deletes fixed edges only");
          DeletionSummary ds = g.delete_edge(eid);
          sum.base_edges_deleted += ds.base_edges_removed;
          ++action.stats.db_hits;
        }
      }
    }
  }
}

void apply_create(Graph& g, Plan& plan, const QueryStatement& stmt, MaintenanceContext* ctx,
                  MutationSummary& sum, Op& action) {
  for (auto& row : plan.sink()) {
    std::map<std::string, SlotVal> local;
    auto slot_value = [&](const std::optional<std::string>& var) -> SlotVal* {
      if (!var) return nullptr;
      auto lit = local.find(*var);
      if (lit != local.end()) return &lit->second;
      return nullptr;
    };
    for (const PatternPath& path : stmt.create_paths) {
      std::vector<NodeId> ids(path.nodes.size());
      for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        const NodePattern& n = path.nodes[i];
        SlotVal* lv = slot_value(n.variable);
        bool bound = false;
        if (lv && lv->kind == SlotVal::NodeV) {
          ids[i] = lv->id;
          bound = true;
        } else if (n.variable) {
          try {
            int s = plan.slot_of(*n.variable);
            if (row[s].kind == SlotVal::NodeV) {
              ids[i] = row[s].id;
              bound = true;
            }
          } catch (const Error&) {
          }
        }
        if (bound) continue;
        NodeCheck c = make_check(n);
        if (c.labels.size() != 1)
          throw Error(ErrorCode::UnknownLabel, "CREATE node needs exactly one label");
        PropertyMap props;
        for (auto& [k, v] : c.props) props.emplace(k, v);
        ids[i] = g.create_node(c.labels[0], std::move(props));
        ++sum.nodes_created;
        ++action.stats.db_hits;
        if (n.variable) local[*n.variable] = SlotVal{SlotVal::NodeV, ids[i], {}};
      }
      for (std::size_t i = 0; i < path.edges.size(); ++i) {
        const RelPattern& r = path.edges[i];
        NodeId src = ids[i], dst = ids[i + 1];
        if (r.dir == EdgeDir::Left) std::swap(src, dst);
        std::string type = resolve_label(*r.type);
        PropertyMap props;
        for (const PropEntry& e : r.props) {
          auto [k, v] = resolve_prop(e);
          props.emplace(std::move(k), std::move(v));
        }
        if (ctx) {
          if (type != ctx->view_name)
            throw Error(ErrorCode::IsViewEdge, "maintenance may only create its view's edges");
          g.create_view_edge_internal(src, dst, type);
          ++sum.view_edges_created;
          ++action.stats.db_hits;
        } else {
          g.create_edge(src, dst, type, std::move(props));
          ++sum.edges_created;
          ++action.stats.db_hits;
        }
      }
    }
  }
}

}  // namespace

MatchResult match_pattern(const Graph& graph, const std::vector<PatternPath>& pattern,
                          const std::vector<Predicate>& where) {
  QueryStatement stmt;
  Stage stage;
  stage.paths = pattern;
  stage.path_clause.assign(pattern.size(), 0);
  stage.where = where;
  stmt.stages.push_back(std::move(stage));
  stmt.action = QueryStatement::Action::None;

  Plan plan(graph, stmt, nullptr);
  plan.run();

  MatchResult out;
  for (const auto& row : plan.sink()) {
    MatchRow mr;
    for (std::size_t p = 0; p < pattern.size(); ++p) {
      MatchRow::PathBind pb;
      for (int s : plan.s0_node_slots()[p]) pb.nodes.push_back(row[s].id);
      for (int s : plan.s0_rel_slots()[p]) {
        const SlotVal& v = row[s];
        if (v.kind == SlotVal::EdgeV)
          pb.rels.push_back({v.id});
        else
          pb.rels.push_back(v.trail);
      }
      mr.paths.push_back(std::move(pb));
    }
    out.rows.push_back(std::move(mr));
  }
  ProfileReport::Part part;
  for (const Op& op : plan.ops()) {
    part.ops.push_back(op.stats);
    part.ops.back().name = op.name;
  }
  out.profile.parts.push_back(std::move(part));
  return out;
}

QueryResult execute(Graph& graph, const Statement& stmt, MaintenanceContext* ctx) {
  if (!stmt.is_query())
    throw Error(ErrorCode::SyntaxError, "execute expects a query statement");
  QueryResult res;
  for (const QueryStatement& part : stmt.query_parts()) {
    Plan plan(graph, part, ctx);
    plan.run();
    Op& action = plan.ops().back();

    switch (part.action) {
      case QueryStatement::Action::Return: {
        bool count = part.return_items[0].kind == ReturnItem::Kind::CountStar;
        if (res.columns.empty()) {
          for (const ReturnItem& item : part.return_items)
            res.columns.push_back(item.kind == ReturnItem::Kind::CountStar ? "count(*)"
                                                                           : item.variable);
        }
        if (count) {
          res.rows.push_back({std::to_string(plan.sink().size())});
          action.stats.rows = 1;  // the aggregate emits a single row
        } else {
          std::vector<int> slots;
          for (const ReturnItem& item : part.return_items)
            slots.push_back(plan.slot_of(item.variable));
          for (const auto& row : plan.sink()) {
            std::vector<std::string> cells;
            for (int s : slots) cells.push_back(cell_text(graph, row[s]));
            res.rows.push_back(std::move(cells));
          }
        }
        break;
      }
      case QueryStatement::Action::Delete:
        apply_delete(graph, plan, part, ctx, res.mutations, action);
        break;
      case QueryStatement::Action::Create:
        apply_create(graph, plan, part, ctx, res.mutations, action);
        break;
      case QueryStatement::Action::None:
        break;
    }

    ProfileReport::Part prof;
    for (const Op& op : plan.ops()) {
      prof.ops.push_back(op.stats);
      prof.ops.back().name = op.name;
    }
    res.profile.parts.push_back(std::move(prof));
  }
  return res;
}

std::string explain_plan(const Graph& graph, const Statement& stmt) {
  if (!stmt.is_query()) return "(no pipeline)\n";
  std::string out;
  for (const QueryStatement& part : stmt.query_parts()) {
    Plan plan(graph, part, nullptr);
    for (const Op& op : plan.ops()) out += op.name + "\n";
  }
  return out;
}

}  // namespace pgview
