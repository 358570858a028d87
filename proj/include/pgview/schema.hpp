#pragma once

#include <map>
#include <set>
#include <string>

#include "pgview/errors.hpp"

namespace pgview {

/// Declares node labels (each with a primary-key property) and edge labels.
/// Labels are fixed for the lifetime of a graph; view names are registered
/// later as a special kind of edge label.
class GraphSchema {
 public:
  void declare_node_label(const std::string& label, const std::string& pk_property) {
    node_pk_[label] = pk_property;
  }
  void declare_edge_label(const std::string& label) { edge_labels_.insert(label); }

  bool has_node_label(const std::string& label) const { return node_pk_.count(label) > 0; }
  bool has_edge_label(const std::string& label) const { return edge_labels_.count(label) > 0; }

  const std::string& pk_property(const std::string& label) const {
    auto it = node_pk_.find(label);
    if (it == node_pk_.end()) throw Error(ErrorCode::UnknownLabel, "node label '" + label + "'");
    return it->second;
  }

  const std::map<std::string, std::string>& node_labels() const { return node_pk_; }
  const std::set<std::string>& edge_labels() const { return edge_labels_; }

 private:
  std::map<std::string, std::string> node_pk_;  // label -> pk property name
  std::set<std::string> edge_labels_;
};

}  // namespace pgview
