#include "pgview/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace pgview {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t row, const std::string& what) {
  throw Error(ErrorCode::CsvParseError, path + ":" + std::to_string(row) + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::CsvParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Parses one cell's text into a property value. Quoted cells are strings as
/// written; unquoted cells try int, then double, then bool, then string.
PropertyValue cell_value(const CsvCell& c) {
  if (c.quoted) return PropertyValue(c.text);
  const char* b = c.text.data();
  const char* e = b + c.text.size();
  std::int64_t i = 0;
  auto ir = std::from_chars(b, e, i);
  if (ir.ec == std::errc() && ir.ptr == e) return PropertyValue(i);
  double d = 0;
  auto dr = std::from_chars(b, e, d);
  if (dr.ec == std::errc() && dr.ptr == e) return PropertyValue(d);
  if (c.text == "true") return PropertyValue(true);
  if (c.text == "false") return PropertyValue(false);
  return PropertyValue(c.text);
}

std::string value_cell(const PropertyValue& v) {
  if (v.is_string()) return csv_escape(v.as_string());
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  return v.to_text();  // int and double literal forms reparse to the same type
}

}  // namespace

// Always quotes, so that e.g. "42" survives as a string on reload.
std::string csv_escape(const std::string& field) {
  std::string out = "\"";
  out.reserve(field.size() + 2);
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::vector<CsvCell>> read_csv_rows(const std::string& path) {
  std::string text = read_file(path);
  std::vector<std::vector<CsvCell>> rows;
  std::vector<CsvCell> row;
  CsvCell cell;
  std::size_t line = 1;
  bool in_quotes = false;
  bool row_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else if (ch == '\n') {
        parse_fail(path, line, "newline inside quoted cell");
      } else {
        cell.text += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!cell.text.empty()) parse_fail(path, line, "stray quote inside cell");
        in_quotes = true;
        cell.quoted = true;
        row_started = true;
        break;
      case ',':
        row.push_back(std::move(cell));
        cell = CsvCell{};
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || !cell.text.empty() || cell.quoted) {
          row.push_back(std::move(cell));
          rows.push_back(std::move(row));
        }
        cell = CsvCell{};
        row = {};
        row_started = false;
        ++line;
        break;
      default:
        cell.text += ch;
        row_started = true;
        break;
    }
  }
  if (in_quotes) parse_fail(path, line, "unterminated quoted cell");
  if (row_started || !cell.text.empty() || cell.quoted) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

GraphSchema load_schema_csv(const std::string& path) {
  GraphSchema schema;
  auto rows = read_csv_rows(path);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.empty() || (row.size() == 1 && row[0].text.empty())) continue;
    const std::string& label = row[0].text;
    if (label.empty()) parse_fail(path, r + 1, "empty label");
    std::string pk = row.size() > 1 ? row[1].text : std::string{};
    try {
      if (pk.empty()) {
        schema.declare_edge_label(label);
      } else {
        schema.declare_node_label(label, pk);
      }
    } catch (const Error& e) {
      parse_fail(path, r + 1, e.what());
    }
  }
  return schema;
}

void load_graph_csv(Graph& graph, const std::string& nodes_path, const std::string& edges_path) {
  auto nrows = read_csv_rows(nodes_path);
  if (nrows.empty()) parse_fail(nodes_path, 1, "missing header");
  const auto& nheader = nrows[0];
  if (nheader.empty() || nheader[0].text != "label")
    parse_fail(nodes_path, 1, "node header must start with 'label'");
  for (std::size_t r = 1; r < nrows.size(); ++r) {
    const auto& row = nrows[r];
    if (row.size() > nheader.size()) parse_fail(nodes_path, r + 1, "more cells than headers");
    PropertyMap props;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c].text.empty() && !row[c].quoted) continue;
      props[nheader[c].text] = cell_value(row[c]);
    }
    try {
      graph.create_node(row.empty() ? std::string{} : row[0].text, std::move(props));
    } catch (const Error& e) {
      parse_fail(nodes_path, r + 1, e.what());
    }
  }

  auto erows = read_csv_rows(edges_path);
  if (erows.empty()) parse_fail(edges_path, 1, "missing header");
  const auto& eheader = erows[0];
  static const char* kFixed[5] = {"src_label", "src_pk", "edge_label", "dst_label", "dst_pk"};
  if (eheader.size() < 5) parse_fail(edges_path, 1, "edge header needs 5 fixed columns");
  for (int c = 0; c < 5; ++c) {
    if (eheader[static_cast<std::size_t>(c)].text != kFixed[c])
      parse_fail(edges_path, 1, std::string("edge header column must be '") + kFixed[c] + "'");
  }
  for (std::size_t r = 1; r < erows.size(); ++r) {
    const auto& row = erows[r];
    if (row.size() < 5) parse_fail(edges_path, r + 1, "edge row needs 5 fixed cells");
    if (row.size() > eheader.size()) parse_fail(edges_path, r + 1, "more cells than headers");
    auto endpoint = [&](std::size_t label_col, std::size_t pk_col) {
      const std::string& label = row[label_col].text;
      PropertyValue pk = cell_value(row[pk_col]);
      auto id = graph.lookup_pk(label, pk);
      if (!id) {
        parse_fail(edges_path, r + 1,
                   "no " + label + " node with primary key " + pk.to_text());
      }
      return *id;
    };
    PropertyMap props;
    for (std::size_t c = 5; c < row.size(); ++c) {
      if (row[c].text.empty() && !row[c].quoted) continue;
      props[eheader[c].text] = cell_value(row[c]);
    }
    try {
      NodeId src = endpoint(0, 1);
      NodeId dst = endpoint(3, 4);
      graph.create_edge(src, dst, row[2].text, std::move(props));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CsvParseError) throw;
      parse_fail(edges_path, r + 1, e.what());
    }
  }
}

std::unique_ptr<Database> make_database(const DatasetSource& src) {
  auto db = std::make_unique<Database>(load_schema_csv(src.schema_csv));
  load_graph_csv(db->graph(), src.nodes_csv, src.edges_csv);
  return db;
}

void dump_graph_csv(const Graph& graph, const std::string& nodes_path,
                    const std::string& edges_path, const std::string& schema_path) {
  const GraphSchema& schema = graph.schema();

  std::ofstream sf(schema_path, std::ios::binary);
  if (!sf) throw Error(ErrorCode::CsvParseError, schema_path + ": cannot open for writing");
  for (const auto& [label, pk] : schema.node_labels()) sf << label << "," << pk << "\n";
  for (const auto& label : schema.edge_labels()) sf << label << ",\n";

  std::set<std::string> node_props;
  graph.for_each_live_node([&](const Node& n) {
    for (const auto& [k, v] : n.props) node_props.insert(k);
    return true;
  });
  std::ofstream nf(nodes_path, std::ios::binary);
  if (!nf) throw Error(ErrorCode::CsvParseError, nodes_path + ": cannot open for writing");
  nf << "label";
  for (const auto& p : node_props) nf << "," << p;
  nf << "\n";
  graph.for_each_live_node([&](const Node& n) {
    nf << n.label;
    for (const auto& p : node_props) {
      nf << ",";
      auto it = n.props.find(p);
      if (it != n.props.end()) nf << value_cell(it->second);
    }
    nf << "\n";
    return true;
  });

  std::set<std::string> edge_props;
  std::vector<EdgeId> base_edges;
  for (const auto& label : schema.edge_labels()) {
    for (EdgeId id : graph.edges_with_label(label)) base_edges.push_back(id);
  }
  std::sort(base_edges.begin(), base_edges.end());
  for (EdgeId id : base_edges) {
    for (const auto& [k, v] : graph.edge(id).props) edge_props.insert(k);
  }
  std::ofstream ef(edges_path, std::ios::binary);
  if (!ef) throw Error(ErrorCode::CsvParseError, edges_path + ": cannot open for writing");
  ef << "src_label,src_pk,edge_label,dst_label,dst_pk";
  for (const auto& p : edge_props) ef << "," << p;
  ef << "\n";
  auto pk_cell = [&](NodeId id) {
    const Node& n = graph.node(id);
    return n.label + "," + value_cell(n.props.at(schema.pk_property(n.label)));
  };
  for (EdgeId id : base_edges) {
    const Edge& e = graph.edge(id);
    ef << pk_cell(e.src) << "," << e.label << "," << pk_cell(e.dst);
    for (const auto& p : edge_props) {
      ef << ",";
      auto it = e.props.find(p);
      if (it != e.props.end()) ef << value_cell(it->second);
    }
    ef << "\n";
  }
}

}  // namespace pgview
