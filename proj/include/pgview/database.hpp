#pragma once

#include <string>

#include "pgview/executor.hpp"
#include "pgview/graph.hpp"
#include "pgview/views.hpp"

namespace pgview {

struct RunOptions {
  bool optimize = false;
};

struct RunResult {
  QueryResult result;
  Statement executed;  // the statement that actually ran (post-rewrite)
  bool rewritten = false;
  std::string optimizer_log;
  MaintenanceEventStats maintenance;  // maintenance work this statement triggered
};

/// One graph, its schema, and its view catalog behind a single statement
/// entry point. Single writer; not safe for concurrent use.
class Database {
 public:
  explicit Database(GraphSchema schema) : graph_(std::move(schema)), views_(graph_) {}

  Graph& graph() { return graph_; }
  const Graph& graph() const { return graph_; }
  ViewCatalog& views() { return views_; }
  const ViewCatalog& views() const { return views_; }

  RunResult run(const std::string& text, const RunOptions& opts = {});
  RunResult run(const Statement& stmt, const RunOptions& opts = {});

  /// Operator pipeline of the statement as written plus, when views exist,
  /// the rewrite report and the pipeline of the rewritten form.
  std::string explain(const std::string& text) const;

 private:
  Graph graph_;
  ViewCatalog views_;
};

}  // namespace pgview
