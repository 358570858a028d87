#include "pgview/graph.hpp"

#include <algorithm>

namespace pgview {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MissingPrimaryKey: return "MissingPrimaryKey";
    case ErrorCode::DuplicatePrimaryKey: return "DuplicatePrimaryKey";
    case ErrorCode::NoSuchNode: return "NoSuchNode";
    case ErrorCode::NoSuchEdge: return "NoSuchEdge";
    case ErrorCode::IsViewEdge: return "IsViewEdge";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::DuplicateViewName: return "DuplicateViewName";
    case ErrorCode::InvalidViewDefinition: return "InvalidViewDefinition";
    case ErrorCode::NoSuchView: return "NoSuchView";
    case ErrorCode::PlaceholderMismatch: return "PlaceholderMismatch";
    case ErrorCode::UnresolvedPlaceholder: return "UnresolvedPlaceholder";
    case ErrorCode::IncompleteMatch: return "IncompleteMatch";
    case ErrorCode::CsvParseError: return "CsvParseError";
    case ErrorCode::InsufficientEdges: return "InsufficientEdges";
  }
  return "Error";
}

Graph::Graph(GraphSchema schema) : schema_(std::move(schema)) {}

NodeId Graph::create_node(const std::string& label, PropertyMap props) {
  if (!schema_.has_node_label(label))
    throw Error(ErrorCode::UnknownLabel, "node label '" + label + "'");
  const std::string& pk = schema_.pk_property(label);
  auto pv = props.find(pk);
  if (pv == props.end())
    throw Error(ErrorCode::MissingPrimaryKey, "node of label '" + label + "' lacks '" + pk + "'");
  auto key = std::make_pair(label, pv->second);
  if (pk_index_.count(key))
    throw Error(ErrorCode::DuplicatePrimaryKey,
                "label '" + label + "' pk " + pv->second.to_text());

  NodeId id = nodes_.size();
  nodes_.push_back(Node{id, label, std::move(props), true});
  out_.emplace_back();
  in_.emplace_back();
  pk_index_.emplace(std::move(key), id);
  label_nodes_[label].push_back(id);
  ++live_nodes_;
  return id;
}

DeletionSummary Graph::delete_node(NodeId id) {
  if (!node_live(id)) throw Error(ErrorCode::NoSuchNode, "node " + std::to_string(id));
  Node& n = nodes_[id];

  if (listener_ && !in_listener_) {
    in_listener_ = true;
    try {
      listener_->before_delete_node(n);
    } catch (...) {
      in_listener_ = false;
      throw;
    }
    in_listener_ = false;
  }

  // Detach whatever is still incident (the listener may have removed view
  // edges already). Self-loops appear in both lists; dedupe via liveness.
  DeletionSummary summary;
  summary.nodes_removed = 1;
  std::vector<EdgeId> incident = out_[id];
  incident.insert(incident.end(), in_[id].begin(), in_[id].end());
  for (EdgeId eid : incident) {
    if (!edge_live(eid)) continue;
    if (edges_[eid].is_view)
      ++summary.view_edges_removed;
    else
      ++summary.base_edges_removed;
    remove_edge_physical(eid);
  }

  pk_index_.erase(std::make_pair(n.label, n.props.at(schema_.pk_property(n.label))));
  erase_sorted(label_nodes_[n.label], id);
  n.live = false;
  --live_nodes_;
  return summary;
}

EdgeId Graph::create_edge(NodeId src, NodeId dst, const std::string& label, PropertyMap props) {
  if (!node_live(src)) throw Error(ErrorCode::NoSuchNode, "src node " + std::to_string(src));
  if (!node_live(dst)) throw Error(ErrorCode::NoSuchNode, "dst node " + std::to_string(dst));
  if (is_view_label(label))
    throw Error(ErrorCode::IsViewEdge, "edges of view '" + label + "' are engine-managed");
  if (!schema_.has_edge_label(label))
    throw Error(ErrorCode::UnknownLabel, "edge label '" + label + "'");

  EdgeId id = insert_edge(src, dst, label, std::move(props), false);
  if (listener_ && !in_listener_) {
    in_listener_ = true;
    try {
      listener_->after_create_edge(edges_[id]);
    } catch (...) {
      in_listener_ = false;
      remove_edge_physical(id);
      throw;
    }
    in_listener_ = false;
  }
  return id;
}

DeletionSummary Graph::delete_edge(EdgeId id) {
  if (!edge_live(id)) throw Error(ErrorCode::NoSuchEdge, "edge " + std::to_string(id));
  Edge& e = edges_[id];
  if (e.is_view)
    throw Error(ErrorCode::IsViewEdge, "edge " + std::to_string(id) + " belongs to view '" +
                                           e.label + "'");

  if (listener_ && !in_listener_) {
    in_listener_ = true;
    try {
      listener_->before_delete_edge(e);
    } catch (...) {
      in_listener_ = false;
      throw;
    }
    in_listener_ = false;
  }

  remove_edge_physical(id);
  DeletionSummary summary;
  summary.base_edges_removed = 1;
  return summary;
}

void Graph::register_view_label(const std::string& name) { view_labels_.insert(name); }

void Graph::unregister_view_label(const std::string& name) { view_labels_.erase(name); }

EdgeId Graph::create_view_edge_internal(NodeId src, NodeId dst, const std::string& view_name) {
  if (!node_live(src)) throw Error(ErrorCode::NoSuchNode, "src node " + std::to_string(src));
  if (!node_live(dst)) throw Error(ErrorCode::NoSuchNode, "dst node " + std::to_string(dst));
  if (!is_view_label(view_name))
    throw Error(ErrorCode::UnknownLabel, "view '" + view_name + "' is not registered");
  return insert_edge(src, dst, view_name, {}, true);
}

void Graph::delete_view_edge_internal(EdgeId id) {
  if (!edge_live(id)) throw Error(ErrorCode::NoSuchEdge, "edge " + std::to_string(id));
  if (!edges_[id].is_view)
    throw Error(ErrorCode::IsViewEdge, "edge " + std::to_string(id) + " is a base edge");
  remove_edge_physical(id);
}

std::optional<NodeId> Graph::lookup_pk(const std::string& label,
                                       const PropertyValue& value) const {
  auto it = pk_index_.find(std::make_pair(label, value));
  if (it == pk_index_.end()) return std::nullopt;
  return it->second;
}

const Node& Graph::node(NodeId id) const {
  if (!node_live(id)) throw Error(ErrorCode::NoSuchNode, "node " + std::to_string(id));
  return nodes_[id];
}

const Edge& Graph::edge(EdgeId id) const {
  if (!edge_live(id)) throw Error(ErrorCode::NoSuchEdge, "edge " + std::to_string(id));
  return edges_[id];
}

const Edge& Graph::edge_any(EdgeId id) const {
  if (id >= edges_.size()) throw Error(ErrorCode::NoSuchEdge, "edge " + std::to_string(id));
  return edges_[id];
}

void Graph::for_each_live_node(const std::function<bool(const Node&)>& fn) const {
  for (const Node& n : nodes_) {
    if (!n.live) continue;
    if (!fn(n)) return;
  }
}

void Graph::for_each_incident(NodeId id, Direction dir, const std::string* label,
                              const std::function<bool(const Edge&)>& fn) const {
  if (!node_live(id)) throw Error(ErrorCode::NoSuchNode, "node " + std::to_string(id));
  auto accept = [&](const Edge& e) {
    if (label) return e.label == *label;
    return !e.is_view;  // untyped scans see base edges only
  };
  if (dir == Direction::Out || dir == Direction::In) {
    const auto& lst = (dir == Direction::Out) ? out_[id] : in_[id];
    for (EdgeId eid : lst) {
      const Edge& e = edges_[eid];
      if (!accept(e)) continue;
      if (!fn(e)) return;
    }
    return;
  }
  // Both: merge the two ascending lists; a self-loop is reported once.
  const auto& a = out_[id];
  const auto& b = in_[id];
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    EdgeId eid;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      eid = a[i];
      if (j < b.size() && b[j] == eid) ++j;  // self-loop in both lists
      ++i;
    } else {
      eid = b[j];
      ++j;
    }
    const Edge& e = edges_[eid];
    if (!accept(e)) continue;
    if (!fn(e)) return;
  }
}

const std::vector<NodeId>& Graph::nodes_with_label(const std::string& label) const {
  static const std::vector<NodeId> kEmpty;
  auto it = label_nodes_.find(label);
  return it == label_nodes_.end() ? kEmpty : it->second;
}

const std::vector<EdgeId>& Graph::edges_with_label(const std::string& label) const {
  static const std::vector<EdgeId> kEmpty;
  auto it = label_edges_.find(label);
  return it == label_edges_.end() ? kEmpty : it->second;
}

std::size_t Graph::node_count(const std::string& label) const {
  return nodes_with_label(label).size();
}

std::size_t Graph::edge_count(const std::string& label) const {
  return edges_with_label(label).size();
}

NodeRef Graph::node_ref(NodeId id) const {
  const Node& n = node(id);
  const std::string& pk = schema_.pk_property(n.label);
  return NodeRef{n.label, pk, n.props.at(pk)};
}

EdgeRef Graph::edge_ref(EdgeId id) const {
  const Edge& e = edge(id);
  return EdgeRef{node_ref(e.src), node_ref(e.dst), e.label, e.id};
}

void Graph::check_integrity() const {
  std::size_t nodes_seen = 0;
  for (const Node& n : nodes_) {
    if (!n.live) continue;
    ++nodes_seen;
    auto it = pk_index_.find(std::make_pair(n.label, n.props.at(schema_.pk_property(n.label))));
    if (it == pk_index_.end() || it->second != n.id)
      throw Error(ErrorCode::NoSuchNode, "pk index missing node " + std::to_string(n.id));
    const auto& ids = nodes_with_label(n.label);
    if (!std::binary_search(ids.begin(), ids.end(), n.id))
      throw Error(ErrorCode::NoSuchNode, "label index missing node " + std::to_string(n.id));
  }
  if (nodes_seen != live_nodes_)
    throw Error(ErrorCode::NoSuchNode, "live node count drifted");
  if (pk_index_.size() != live_nodes_)
    throw Error(ErrorCode::DuplicatePrimaryKey, "pk index size drifted");

  std::size_t edges_seen = 0;
  for (const Edge& e : edges_) {
    if (!e.live) continue;
    ++edges_seen;
    if (!node_live(e.src) || !node_live(e.dst))
      throw Error(ErrorCode::NoSuchEdge, "edge " + std::to_string(e.id) + " has dead endpoint");
    if (e.is_view != (view_labels_.count(e.label) > 0))
      throw Error(ErrorCode::IsViewEdge, "edge " + std::to_string(e.id) + " view flag drifted");
    const auto& o = out_[e.src];
    const auto& i = in_[e.dst];
    if (!std::binary_search(o.begin(), o.end(), e.id) ||
        !std::binary_search(i.begin(), i.end(), e.id))
      throw Error(ErrorCode::NoSuchEdge, "adjacency missing edge " + std::to_string(e.id));
    const auto& ids = edges_with_label(e.label);
    if (!std::binary_search(ids.begin(), ids.end(), e.id))
      throw Error(ErrorCode::NoSuchEdge, "label index missing edge " + std::to_string(e.id));
  }
  if (edges_seen != live_edges_)
    throw Error(ErrorCode::NoSuchEdge, "live edge count drifted");
  std::size_t label_total = 0;
  for (const auto& [label, ids] : label_edges_) label_total += ids.size();
  if (label_total != live_edges_)
    throw Error(ErrorCode::NoSuchEdge, "edge label counts drifted");
}

EdgeId Graph::insert_edge(NodeId src, NodeId dst, const std::string& label, PropertyMap props,
                          bool is_view) {
  EdgeId id = edges_.size();
  edges_.push_back(Edge{id, src, dst, label, std::move(props), is_view, true});
  out_[src].push_back(id);  // ids are monotone, so lists stay sorted
  in_[dst].push_back(id);
  label_edges_[label].push_back(id);
  ++live_edges_;
  return id;
}

void Graph::remove_edge_physical(EdgeId id) {
  Edge& e = edges_[id];
  erase_sorted(out_[e.src], id);
  erase_sorted(in_[e.dst], id);
  erase_sorted(label_edges_[e.label], id);
  e.live = false;
  --live_edges_;
}

void Graph::erase_sorted(std::vector<std::uint64_t>& v, std::uint64_t x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace pgview
