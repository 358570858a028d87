#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pgview/executor.hpp"
#include "pgview/graph.hpp"
#include "pgview/templates.hpp"

namespace pgview {

/// Cost-model snapshot taken when the view is materialized. optRate is the
/// ratio between the view query's original cost and the cost of scanning the
/// materialized edges; it stays fixed until the view is dropped.
struct ViewStats {
  std::string start_label;
  std::uint64_t initial_db_hit = 0;
  std::uint64_t initial_denominator = 0;  // |N_startLabel| + 2|E_view| at creation
  double opt_rate = 0.0;
};

struct ViewCatalogEntry {
  ViewDefinition def;
  MaintenanceTemplateSet templates;
  ViewStats stats;
  bool construct_forward = true;  // construct src is the match path's first node
};

struct ConsistencyReport {
  std::string view;
  bool ok = true;
  std::vector<std::string> missing;  // instances the view lost
  std::vector<std::string> extra;    // edges no instance backs
  std::string to_text() const;
};

struct MaintenanceEventStats {
  std::uint64_t statements_run = 0;
  std::uint64_t db_hits = 0;
  std::uint64_t view_edges_created = 0;
  std::uint64_t view_edges_deleted = 0;
};

/// Owns all materialized views of one graph. Installs itself as the graph's
/// mutation listener; every base mutation triggers the instantiated
/// maintenance statements of every view, in view-name order, with one
/// instance-dedup set per (event, view).
class ViewCatalog : public MutationListener {
 public:
  explicit ViewCatalog(Graph& graph);
  ~ViewCatalog() override;

  ViewCatalog(const ViewCatalog&) = delete;
  ViewCatalog& operator=(const ViewCatalog&) = delete;

  /// Validates, registers, generates templates, and materializes.
  const ViewCatalogEntry& create_view(const ViewDefinition& def);
  void drop_view(const std::string& name);

  bool has_view(const std::string& name) const { return views_.count(name) > 0; }
  const ViewCatalogEntry& view(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Instance endpoints recomputed from base data alone, oriented per the
  /// view's construct clause. Independent of the maintenance machinery.
  std::vector<std::pair<NodeId, NodeId>> recompute_oracle(const std::string& name) const;
  ConsistencyReport check_consistency(const std::string& name) const;
  std::vector<ConsistencyReport> check_all() const;

  // MutationListener
  void before_delete_node(const Node& node) override;
  void after_create_edge(const Edge& edge) override;
  void before_delete_edge(const Edge& edge) override;

  const MaintenanceEventStats& last_event() const { return last_event_; }
  const MaintenanceEventStats& cumulative() const { return cumulative_; }
  void reset_counters() { cumulative_ = MaintenanceEventStats{}; }

 private:
  template <typename Info>
  void run_event(const std::vector<Statement> MaintenanceTemplateSet::* list, const Info& info);
  void validate_definition(const ViewDefinition& def) const;

  Graph& graph_;
  std::map<std::string, ViewCatalogEntry> views_;
  MaintenanceEventStats last_event_;
  MaintenanceEventStats cumulative_;
};

}  // namespace pgview
