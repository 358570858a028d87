#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pgview/database.hpp"
#include "pgview/graph.hpp"
#include "pgview/schema.hpp"

namespace pgview {

/// Paths of one on-disk dataset.
struct DatasetSource {
  std::string nodes_csv;
  std::string edges_csv;
  std::string schema_csv;
};

/// Schema file: one line per label. `label,pk` declares a node label with its
/// primary-key property; a line with an empty (or missing) second field
/// declares an edge label.
GraphSchema load_schema_csv(const std::string& path);

/// Node file header: `label,prop1,...`; every row must fill its label's
/// primary-key column. Edge file header:
/// `src_label,src_pk,edge_label,dst_label,dst_pk,prop1,...`.
/// Quoted cells are strings; unquoted cells parse as int, double, bool, or
/// fall back to string; an empty unquoted cell means "property absent".
void load_graph_csv(Graph& graph, const std::string& nodes_path, const std::string& edges_path);

std::unique_ptr<Database> make_database(const DatasetSource& src);

/// Writes base data back out (view edges are derived; they are not dumped).
void dump_graph_csv(const Graph& graph, const std::string& nodes_path,
                    const std::string& edges_path, const std::string& schema_path);

// Small CSV utilities shared with the report writers.
std::string csv_escape(const std::string& field);

struct CsvCell {
  std::string text;
  bool quoted = false;  // quoted cells always load as strings
};
std::vector<std::vector<CsvCell>> read_csv_rows(const std::string& path);

}  // namespace pgview
