#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgview/bench.hpp"
#include "pgview/csv.hpp"
#include "pgview/dataset.hpp"
#include "pgview/repl.hpp"
#include "pgview/workload.hpp"

namespace {

struct DatasetFlags {
  std::string nodes;
  std::string edges;
  std::string schema;

  void attach(CLI::App* app, bool required) {
    auto* n = app->add_option("--nodes", nodes, "node CSV file");
    auto* e = app->add_option("--edges", edges, "edge CSV file");
    auto* s = app->add_option("--schema", schema, "schema CSV file (label,pk per line)");
    if (required) {
      n->required();
      e->required();
      s->required();
    }
  }
  pgview::DatasetSource source() const { return {nodes, edges, schema}; }
};

void write_or_print(const std::string& path, const std::string& csv, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pgview::Error(pgview::ErrorCode::CsvParseError, path + ": cannot open for writing");
  out << csv;
  std::cout << text;
  std::cout << "report written to " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"embedded property-graph engine with materialized path views"};
  app.require_subcommand(1);

  DatasetFlags load_ds, run_ds, bench_ds, scale_ds, repl_ds;

  auto* cmd_load = app.add_subcommand("load", "load a CSV dataset and report label counts");
  load_ds.attach(cmd_load, true);
  std::string dump_dir;
  cmd_load->add_option("--dump", dump_dir, "write the loaded graph back out to this directory");

  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic dataset");
  std::string kind = "commentTree";
  std::string out_dir = "dataset";
  std::uint64_t seed = 1;
  pgview::CommentTreeParams ct;
  pgview::KnowsGraphParams kg;
  cmd_gen->add_option("--kind", kind, "commentTree | knowsGraph")->required();
  cmd_gen->add_option("--out", out_dir, "output directory")->required();
  cmd_gen->add_option("--seed", seed, "RNG seed");
  cmd_gen->add_option("--posts", ct.posts, "commentTree: number of posts");
  cmd_gen->add_option("--fanout", ct.fanout, "commentTree: replies per comment");
  cmd_gen->add_option("--depth", ct.depth, "commentTree: reply tree depth");
  cmd_gen->add_option("--persons", ct.persons, "commentTree: number of persons");
  cmd_gen->add_option("--likes", ct.likes, "commentTree: number of likes edges");
  cmd_gen->add_option("--nodes-count", kg.nodes, "knowsGraph: number of persons");
  cmd_gen->add_option("--chain-len", kg.chain_len, "knowsGraph: chain length");
  cmd_gen->add_option("--extra", kg.extra, "knowsGraph: extra random edges");

  auto* cmd_run = app.add_subcommand("run", "execute a workload script");
  run_ds.attach(cmd_run, true);
  std::string script_path;
  bool opt_optimize = false, opt_profile = false, opt_verify = false;
  cmd_run->add_option("--script", script_path, "workload script")->required();
  cmd_run->add_flag("--optimize", opt_optimize, "rewrite reads through the views");
  cmd_run->add_flag("--profile", opt_profile, "print Rows/DBHit profiles");
  cmd_run->add_flag("--verify-views", opt_verify, "re-check views after every write");

  auto* cmd_bench = app.add_subcommand("bench", "time a workload with and without views");
  bench_ds.attach(cmd_bench, true);
  std::string workload_path, report_path;
  int reps = 5, warmup = 1;
  cmd_bench->add_option("--workload", workload_path, "workload script")->required();
  cmd_bench->add_option("--reps", reps, "measured repetitions per statement");
  cmd_bench->add_option("--warmup", warmup, "unmeasured repetitions per statement");
  cmd_bench->add_option("--out", report_path, "write the CSV report here");

  auto* cmd_scale = app.add_subcommand("scale", "measure maintenance cost vs delete batch size");
  scale_ds.attach(cmd_scale, true);
  std::string view_stmt;
  std::vector<std::size_t> counts = {1, 10, 100, 1000};
  std::string scale_out;
  std::uint64_t scale_seed = 1;
  cmd_scale->add_option("--view", view_stmt, "CREATE VIEW statement to maintain")->required();
  cmd_scale->add_option("--counts", counts, "delete batch sizes")->delimiter(',');
  cmd_scale->add_option("--seed", scale_seed, "RNG seed for edge choice");
  cmd_scale->add_option("--out", scale_out, "write the CSV report here");

  auto* cmd_repl = app.add_subcommand("repl", "interactive statement loop");
  repl_ds.attach(cmd_repl, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_load->parsed()) {
      auto db = pgview::make_database(load_ds.source());
      const auto& g = db->graph();
      std::cout << "nodes: " << g.total_node_count() << ", edges: " << g.total_edge_count() << "\n";
      for (const auto& [label, pk] : g.schema().node_labels()) {
        std::cout << "  (" << label << " pk " << pk << "): " << g.node_count(label) << "\n";
      }
      for (const auto& label : g.schema().edge_labels()) {
        std::cout << "  [" << label << "]: " << g.edge_count(label) << "\n";
      }
      g.check_integrity();
      std::cout << "integrity ok\n";
      if (!dump_dir.empty()) {
        auto src = pgview::write_dataset(g, dump_dir);
        std::cout << "dumped to " << src.nodes_csv << ", " << src.edges_csv << ", "
                  << src.schema_csv << "\n";
      }
    } else if (cmd_gen->parsed()) {
      ct.seed = seed;
      kg.seed = seed;
      std::unique_ptr<pgview::Graph> g;
      if (kind == "commentTree") {
        g = std::make_unique<pgview::Graph>(pgview::comment_tree_schema());
        pgview::gen_comment_tree(*g, ct);
      } else if (kind == "knowsGraph") {
        g = std::make_unique<pgview::Graph>(pgview::knows_graph_schema());
        pgview::gen_knows_graph(*g, kg);
      } else {
        std::cerr << "unknown --kind " << kind << " (use commentTree or knowsGraph)\n";
        return 2;
      }
      auto src = pgview::write_dataset(*g, out_dir);
      std::cout << "wrote " << src.nodes_csv << " (" << g->total_node_count() << " nodes), "
                << src.edges_csv << " (" << g->total_edge_count() << " edges)\n";
    } else if (cmd_run->parsed()) {
      auto source = run_ds.source();
      auto db = pgview::make_database(source);
      auto script = pgview::load_workload(script_path);
      pgview::RunScriptOptions opts;
      opts.optimize = opt_optimize;
      opts.profile = opt_profile;
      opts.verify_views = opt_verify;
      opts.reload_source = &source;
      auto result = pgview::run_script(db, script, opts);
      std::cout << result.transcript;
      if (!result.ok) return 1;
    } else if (cmd_bench->parsed()) {
      auto report =
          pgview::bench(bench_ds.source(), pgview::load_workload(workload_path), reps, warmup);
      write_or_print(report_path, report.to_csv(), report.to_text());
    } else if (cmd_scale->parsed()) {
      auto rows = pgview::maintenance_scaling(scale_ds.source(), view_stmt, counts, scale_seed);
      write_or_print(scale_out, pgview::scaling_to_csv(rows), pgview::scaling_to_text(rows));
    } else if (cmd_repl->parsed()) {
      std::unique_ptr<pgview::Database> db;
      if (!repl_ds.schema.empty()) {
        if (!repl_ds.nodes.empty()) {
          db = pgview::make_database(repl_ds.source());
        } else {
          db = std::make_unique<pgview::Database>(pgview::load_schema_csv(repl_ds.schema));
        }
      } else {
        db = std::make_unique<pgview::Database>(pgview::GraphSchema{});
      }
      return pgview::repl(*db, std::cin, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
