#include "pgview/repl.hpp"

#include <istream>
#include <ostream>

#include "pgview/workload.hpp"
#include "pgview/parser.hpp"

namespace pgview {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_semi(std::string s) {
  s = trim(s);
  while (!s.empty() && s.back() == ';') {
    s.pop_back();
    s = trim(s);
  }
  return s;
}

void print_result(std::ostream& out, const RunResult& rr) {
  out << format_table(rr.result, 20);
  out << rr.result.rows.size() << " rows, " << rr.result.profile.total_db_hits() << " dbHits";
  const MutationSummary& m = rr.result.mutations;
  if (m.nodes_created || m.edges_created || m.nodes_deleted || m.base_edges_deleted ||
      m.view_edges_deleted || m.view_edges_created) {
    out << "; +" << m.nodes_created << " nodes, +" << m.edges_created << " edges, -"
        << m.nodes_deleted << " nodes, -" << m.base_edges_deleted << " edges";
    if (m.view_edges_created || m.view_edges_deleted) {
      out << ", view edges +" << m.view_edges_created << "/-" << m.view_edges_deleted;
    }
  }
  out << "\n";
  if (rr.maintenance.statements_run > 0) {
    out << "maintenance: " << rr.maintenance.statements_run << " statements, "
        << rr.maintenance.db_hits << " dbHits, view edges +"
        << rr.maintenance.view_edges_created << "/-" << rr.maintenance.view_edges_deleted << "\n";
  }
}

void meta_command(Database& db, std::ostream& out, const std::string& line) {
  std::size_t sp = line.find_first_of(" \t");
  std::string cmd = line.substr(0, sp);
  std::string rest = sp == std::string::npos ? std::string{} : trim(line.substr(sp + 1));

  if (cmd == ":views") {
    const auto& names = db.views().names();
    if (names.empty()) {
      out << "no views\n";
      return;
    }
    for (const auto& name : names) {
      const auto& entry = db.views().view(name);
      out << name << ", edges=" << db.graph().edge_count(name) << ", templates="
          << entry.templates.delete_node.size() << "/" << entry.templates.create_edge.size()
          << "/" << entry.templates.delete_edge.size() << "\n";
    }
  } else if (cmd == ":templates") {
    const auto& entry = db.views().view(strip_semi(rest));
    auto dump = [&](const char* title, const std::vector<Statement>& list) {
      out << title << ":\n";
      for (const auto& s : list) out << "  " << render(s) << "\n";
    };
    dump("on delete-node", entry.templates.delete_node);
    dump("on create-edge", entry.templates.create_edge);
    dump("on delete-edge", entry.templates.delete_edge);
  } else if (cmd == ":explain") {
    out << db.explain(strip_semi(rest));
  } else if (cmd == ":profile") {
    RunResult rr = db.run(strip_semi(rest));
    print_result(out, rr);
    out << rr.result.profile.to_text();
  } else if (cmd == ":verify") {
    db.graph().check_integrity();
    out << "store integrity ok\n";
    for (const auto& rep : db.views().check_all()) {
      out << rep.view << ": " << (rep.ok ? "ok" : "INCONSISTENT") << "\n";
      if (!rep.ok) out << rep.to_text();
    }
  } else {
    out << "unknown command " << cmd << " (try :views :templates :explain :profile :verify :quit)\n";
  }
}

}  // namespace

int repl(Database& db, std::istream& in, std::ostream& out) {
  std::string buffer;
  std::string line;
  out << "pgview> " << std::flush;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (buffer.empty() && !t.empty() && t[0] == ':') {
      if (t == ":quit" || t == ":q") return 0;
      try {
        meta_command(db, out, t);
      } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
      }
      out << "pgview> " << std::flush;
      continue;
    }
    buffer += line;
    buffer += '\n';
    if (line.find(';') == std::string::npos) continue;
    std::string stmt = strip_semi(buffer);
    buffer.clear();
    if (!stmt.empty()) {
      try {
        print_result(out, db.run(stmt));
      } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
      }
    }
    out << "pgview> " << std::flush;
  }
  return 0;
}

}  // namespace pgview
