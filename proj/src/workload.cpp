#include "pgview/workload.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "pgview/optimizer.hpp"
#include "pgview/parser.hpp"

namespace pgview {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

WorkloadScript parse_workload(const std::string& text, const std::string& origin) {
  WorkloadScript script;
  std::istringstream in(text);
  std::string line;
  std::string pending_tag;
  std::string body;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::SyntaxError, origin + ":" + std::to_string(line_no) + ": " + what);
  };

  auto finish = [&]() {
    std::string stmt = trim(body);
    body.clear();
    if (pending_tag == "RECOVER") {
      if (script.items.empty() || script.items.back().tag != WorkloadTag::Write)
        fail("RECOVER must follow a WRITE item");
      if (stmt == "RELOAD") {
        script.items.back().recover_reload = true;
      } else {
        script.items.back().recover.push_back(stmt);
      }
    } else {
      WorkloadItem item;
      item.tag = pending_tag == "VIEW"    ? WorkloadTag::View
                 : pending_tag == "READ"  ? WorkloadTag::Read
                                          : WorkloadTag::Write;
      item.text = stmt;
      script.items.push_back(std::move(item));
    }
    pending_tag.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (pending_tag.empty()) {
      if (t.empty() || t[0] == '#') continue;
      std::size_t sp = t.find_first_of(" \t");
      std::string tag = t.substr(0, sp);
      if (tag != "VIEW" && tag != "READ" && tag != "WRITE" && tag != "RECOVER")
        fail("unknown tag '" + tag + "'");
      pending_tag = tag;
      line = sp == std::string::npos ? std::string{} : t.substr(sp + 1);
    }
    std::size_t semi = line.find(';');
    if (semi == std::string::npos) {
      body += line;
      body += ' ';
      continue;
    }
    body += line.substr(0, semi);
    std::string rest = trim(line.substr(semi + 1));
    if (!rest.empty()) fail("text after ';' on the same line");
    finish();
  }
  if (!pending_tag.empty()) fail("missing ';' at end of item");
  return script;
}

WorkloadScript load_workload(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::CsvParseError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workload(buf.str(), path);
}

std::string format_table(const QueryResult& result, std::size_t max_rows) {
  std::vector<std::vector<std::string>> all;
  all.push_back(result.columns);
  std::size_t shown = std::min(result.rows.size(), max_rows);
  for (std::size_t i = 0; i < shown; ++i) all.push_back(result.rows[i]);

  std::vector<std::size_t> width;
  for (const auto& row : all) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < all.size(); ++r) {
    for (std::size_t c = 0; c < all[r].size(); ++c) {
      if (c) out << "  ";
      out << all[r][c];
      if (c + 1 < all[r].size()) out << std::string(width[c] - all[r][c].size(), ' ');
    }
    out << "\n";
    if (r == 0 && !result.columns.empty()) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
      out << std::string(total, '-') << "\n";
    }
  }
  if (result.rows.size() > shown) {
    out << "... (" << result.rows.size() << " rows total)\n";
  }
  return out.str();
}

namespace {

void reload_database(std::unique_ptr<Database>& db, const RunScriptOptions& opts,
                     const std::vector<std::string>& view_texts) {
  if (!opts.reload_source)
    throw Error(ErrorCode::CsvParseError, "RECOVER RELOAD needs the dataset file paths");
  db = make_database(*opts.reload_source);
  for (const auto& v : view_texts) db->run(v);
}

}  // namespace

RunScriptResult run_script(std::unique_ptr<Database>& db, const WorkloadScript& script,
                           const RunScriptOptions& opts) {
  RunScriptResult res;
  std::ostringstream out;
  std::vector<std::string> view_texts;

  for (std::size_t i = 0; i < script.items.size(); ++i) {
    const WorkloadItem& item = script.items[i];
    const char* tag = item.tag == WorkloadTag::View    ? "VIEW"
                      : item.tag == WorkloadTag::Read  ? "READ"
                                                       : "WRITE";
    out << "[" << (i + 1) << "] " << tag << " " << item.text << "\n";
    try {
      QueryResult qr;
      MaintenanceEventStats maint{};
      if (item.tag == WorkloadTag::Read && opts.optimize) {
        Statement stmt = parse(item.text);
        auto t0 = std::chrono::steady_clock::now();
        OptimizeResult opt = optimize(db->graph(), db->views(), stmt);
        double vpg = ms_since(t0);
        if (!opt.steps.empty()) {
          out << "  rewritten (" << vpg << " ms): " << render(opt.stmt) << "\n";
        }
        auto t1 = std::chrono::steady_clock::now();
        qr = execute(db->graph(), opt.stmt);
        out << "  execMs=" << ms_since(t1) << "\n";
      } else {
        auto t0 = std::chrono::steady_clock::now();
        RunResult rr = db->run(item.text);
        out << "  execMs=" << ms_since(t0) << "\n";
        qr = std::move(rr.result);
        maint = rr.maintenance;
        if (item.tag == WorkloadTag::View) view_texts.push_back(item.text);
      }
      out << format_table(qr, 10);
      out << "  rows=" << qr.rows.size() << " dbHits=" << qr.profile.total_db_hits() << "\n";
      if (maint.statements_run > 0) {
        out << "  maintenance: statements=" << maint.statements_run << " dbHits=" << maint.db_hits
            << " +" << maint.view_edges_created << "/-" << maint.view_edges_deleted
            << " view edges\n";
      }
      if (opts.profile) out << qr.profile.to_text();

      if (item.tag == WorkloadTag::Write) {
        for (const auto& rec : item.recover) {
          out << "  recover: " << rec << "\n";
          db->run(rec);
        }
        if (item.recover_reload) {
          out << "  recover: RELOAD\n";
          reload_database(db, opts, view_texts);
        }
        if (opts.verify_views) {
          for (const auto& rep : db->views().check_all()) {
            out << "  verify " << rep.view << ": " << (rep.ok ? "ok" : "INCONSISTENT") << "\n";
            if (!rep.ok) {
              out << rep.to_text();
              res.ok = false;
            }
          }
        }
      }
    } catch (const Error& e) {
      out << "  error: " << e.what() << "\n";
      res.ok = false;
      break;
    }
  }
  res.transcript = out.str();
  return res;
}

}  // namespace pgview
