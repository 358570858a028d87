#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pgview/csv.hpp"
#include "pgview/database.hpp"

namespace pgview {

/// Workload file format: `#` comment lines; items are
///   VIEW <statement> ;
///   READ <statement> ;
///   WRITE <statement> ;
///   RECOVER <statement or RELOAD> ;
/// Statements may span lines up to the terminating `;`. RECOVER lines attach
/// to the preceding WRITE (several allowed, run in order); `RECOVER RELOAD;`
/// restores by reloading the dataset and re-creating the views made so far.
enum class WorkloadTag { View, Read, Write };

struct WorkloadItem {
  WorkloadTag tag = WorkloadTag::Read;
  std::string text;
  std::vector<std::string> recover;
  bool recover_reload = false;
};

struct WorkloadScript {
  std::vector<WorkloadItem> items;
};

WorkloadScript parse_workload(const std::string& text, const std::string& origin = "workload");
WorkloadScript load_workload(const std::string& path);

struct RunScriptOptions {
  bool optimize = false;
  bool profile = false;
  bool verify_views = false;
  const DatasetSource* reload_source = nullptr;  // required for RECOVER RELOAD
};

struct RunScriptResult {
  bool ok = true;
  std::string transcript;
};

/// Executes the script in order. Reads are rewritten first when optimize is
/// set (rewrite time reported separately); writes run their RECOVER
/// statements right after; verify_views re-checks every view after each
/// write. The database handle may be replaced by a RELOAD recover.
RunScriptResult run_script(std::unique_ptr<Database>& db, const WorkloadScript& script,
                           const RunScriptOptions& opts);

/// Aligned table of a query result, truncated to max_rows data rows.
std::string format_table(const QueryResult& result, std::size_t max_rows = 20);

}  // namespace pgview
