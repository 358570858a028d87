#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgview/errors.hpp"
#include "pgview/schema.hpp"
#include "pgview/value.hpp"

namespace pgview {

struct Node {
  NodeId id = 0;
  std::string label;
  PropertyMap props;
  bool live = false;
};

struct Edge {
  EdgeId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::string label;
  PropertyMap props;
  bool is_view = false;
  bool live = false;
};

enum class Direction { Out, In, Both };

struct DeletionSummary {
  std::size_t nodes_removed = 0;
  std::size_t base_edges_removed = 0;
  std::size_t view_edges_removed = 0;
};

/// Identifies a node by label and primary key, independent of internal ids.
struct NodeRef {
  std::string label;
  std::string pk_name;
  PropertyValue pk_value;
};

/// Identifies an edge by its endpoints' primary keys plus its own label/id.
struct EdgeRef {
  NodeRef src;
  NodeRef dst;
  std::string label;
  EdgeId edge_id = 0;
};

/// Receives mutation events before/after they land in the store. The view
/// manager installs one of these to run maintenance statements.
class MutationListener {
 public:
  virtual ~MutationListener() = default;
  virtual void before_delete_node(const Node& node) = 0;
  virtual void after_create_edge(const Edge& edge) = 0;
  virtual void before_delete_edge(const Edge& edge) = 0;
};

/// In-memory property graph with tombstoned element vectors, a per-label
/// primary-key index, and adjacency lists kept in ascending edge-id order.
/// Identifiers are never reused. Not thread-safe: single writer, no
/// concurrent readers during mutation.
class Graph {
 public:
  explicit Graph(GraphSchema schema);

  const GraphSchema& schema() const { return schema_; }

  // -- mutations (fire the listener) ------------------------------------

  NodeId create_node(const std::string& label, PropertyMap props);
  DeletionSummary delete_node(NodeId id);
  EdgeId create_edge(NodeId src, NodeId dst, const std::string& label, PropertyMap props);
  DeletionSummary delete_edge(EdgeId id);

  // -- view-manager paths (no listener, operate on view edges) ----------

  void register_view_label(const std::string& name);
  void unregister_view_label(const std::string& name);
  bool is_view_label(const std::string& name) const { return view_labels_.count(name) > 0; }
  EdgeId create_view_edge_internal(NodeId src, NodeId dst, const std::string& view_name);
  void delete_view_edge_internal(EdgeId id);

  void set_listener(MutationListener* listener) { listener_ = listener; }

  // -- reads -------------------------------------------------------------

  std::optional<NodeId> lookup_pk(const std::string& label, const PropertyValue& value) const;

  bool node_live(NodeId id) const { return id < nodes_.size() && nodes_[id].live; }
  bool edge_live(EdgeId id) const { return id < edges_.size() && edges_[id].live; }

  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;
  /// Tombstone-tolerant accessor: fields of a deleted edge stay readable.
  const Edge& edge_any(EdgeId id) const;

  /// All live nodes in ascending id order; stop early by returning false.
  void for_each_live_node(const std::function<bool(const Node&)>& fn) const;

  /// Incident edges in ascending edge-id order. A typed filter matches that
  /// label exactly (base or view); an untyped scan yields base edges only.
  /// Direction::Both visits a self-loop once.
  void for_each_incident(NodeId id, Direction dir, const std::string* label,
                         const std::function<bool(const Edge&)>& fn) const;

  /// Live node ids with the given label, ascending.
  const std::vector<NodeId>& nodes_with_label(const std::string& label) const;
  /// Live edge ids with the given label, ascending.
  const std::vector<EdgeId>& edges_with_label(const std::string& label) const;

  std::size_t node_count(const std::string& label) const;
  std::size_t edge_count(const std::string& label) const;
  std::size_t total_node_count() const { return live_nodes_; }
  std::size_t total_edge_count() const { return live_edges_; }

  NodeRef node_ref(NodeId id) const;
  EdgeRef edge_ref(EdgeId id) const;

  /// Label-count bookkeeping vs a full recount; index/back-pointer sanity.
  /// Throws on the first violation; used by tests and `:verify`.
  void check_integrity() const;

 private:
  EdgeId insert_edge(NodeId src, NodeId dst, const std::string& label, PropertyMap props,
                     bool is_view);
  void remove_edge_physical(EdgeId id);
  static void erase_sorted(std::vector<std::uint64_t>& v, std::uint64_t x);

  GraphSchema schema_;
  std::set<std::string> view_labels_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;  // per node, ascending
  std::vector<std::vector<EdgeId>> in_;   // per node, ascending
  std::map<std::pair<std::string, PropertyValue>, NodeId> pk_index_;
  std::map<std::string, std::vector<NodeId>> label_nodes_;
  std::map<std::string, std::vector<EdgeId>> label_edges_;
  std::size_t live_nodes_ = 0;
  std::size_t live_edges_ = 0;
  MutationListener* listener_ = nullptr;
  bool in_listener_ = false;
};

}  // namespace pgview
