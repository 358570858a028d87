#include "pgview/bench.hpp"

#include <chrono>
#include <iomanip>
#include <random>
#include <sstream>

#include "pgview/optimizer.hpp"
#include "pgview/parser.hpp"

namespace pgview {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Route {
  std::unique_ptr<Database> db;
  std::vector<std::string> view_texts;  // re-created after a RELOAD recover
};

void recover_after_write(Route& route, const WorkloadItem& item, const DatasetSource& src,
                         bool with_views) {
  for (const auto& rec : item.recover) route.db->run(rec);
  if (item.recover_reload) {
    route.db = make_database(src);
    if (with_views) {
      for (const auto& v : route.view_texts) route.db->run(v);
    }
  }
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\t') c = ' ';
  }
  return s;
}

}  // namespace

BenchReport bench(const DatasetSource& src, const WorkloadScript& workload, int repetitions,
                  int warmup) {
  if (repetitions < 1) repetitions = 1;
  if (warmup < 0) warmup = 0;
  BenchReport report;
  Route ori{make_database(src), {}};
  Route opt{make_database(src), {}};

  for (std::size_t i = 0; i < workload.items.size(); ++i) {
    const WorkloadItem& item = workload.items[i];
    BenchRow row;
    row.index = static_cast<int>(i + 1);
    row.text = one_line(item.text);

    switch (item.tag) {
      case WorkloadTag::View: {
        row.tag = "VIEW";
        auto t0 = Clock::now();
        opt.db->run(item.text);
        row.opt_ms = ms_since(t0);
        report.mv_ms += row.opt_ms;
        opt.view_texts.push_back(item.text);
        break;
      }
      case WorkloadTag::Read: {
        row.tag = "READ";
        Statement stmt = parse(item.text);
        for (int r = 0; r < warmup + repetitions; ++r) {
          bool measured = r >= warmup;
          auto t0 = Clock::now();
          QueryResult qr = execute(ori.db->graph(), stmt);
          double ms = ms_since(t0);
          if (measured) {
            row.ori_ms += ms;
            row.ori_db_hit = qr.profile.total_db_hits();
          }
        }
        for (int r = 0; r < warmup + repetitions; ++r) {
          bool measured = r >= warmup;
          auto t0 = Clock::now();
          OptimizeResult o = optimize(opt.db->graph(), opt.db->views(), stmt);
          double vpg = ms_since(t0);
          auto t1 = Clock::now();
          QueryResult qr = execute(opt.db->graph(), o.stmt);
          double ms = ms_since(t1);
          if (measured) {
            row.opt_vpg_ms += vpg;
            row.opt_ms += ms;
            row.opt_db_hit = qr.profile.total_db_hits();
          }
        }
        break;
      }
      case WorkloadTag::Write: {
        row.tag = "WRITE";
        Statement stmt = parse(item.text);
        for (int r = 0; r < warmup + repetitions; ++r) {
          bool measured = r >= warmup;
          auto t0 = Clock::now();
          QueryResult qr = execute(ori.db->graph(), stmt);
          double ms = ms_since(t0);
          if (measured) {
            row.ori_ms += ms;
            row.ori_db_hit = qr.profile.total_db_hits();
          }
          recover_after_write(ori, item, src, false);
        }
        for (int r = 0; r < warmup + repetitions; ++r) {
          bool measured = r >= warmup;
          std::uint64_t maint_before = opt.db->views().cumulative().db_hits;
          auto t0 = Clock::now();
          QueryResult qr = execute(opt.db->graph(), stmt);
          double ms = ms_since(t0);
          if (measured) {
            row.opt_ms += ms;
            row.opt_db_hit =
                qr.profile.total_db_hits() + (opt.db->views().cumulative().db_hits - maint_before);
          }
          recover_after_write(opt, item, src, true);
        }
        break;
      }
    }

    if (item.tag != WorkloadTag::View) {
      row.ori_ms /= repetitions;
      row.opt_ms /= repetitions;
      row.opt_vpg_ms /= repetitions;
      double denom = row.opt_vpg_ms + row.opt_ms;
      row.speedup = denom > 0 ? row.ori_ms / denom : 0;
      report.wori_ms += row.ori_ms;
      report.wopt_ms += row.opt_vpg_ms + row.opt_ms;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << "index,tag,statement,oriTimeMs,optVpgTimeMs,optTimeMs,speedup,oriDbHit,optDbHit\n";
  for (const auto& r : rows) {
    out << r.index << "," << r.tag << "," << csv_escape(r.text) << "," << r.ori_ms << ","
        << r.opt_vpg_ms << "," << r.opt_ms << "," << r.speedup << "," << r.ori_db_hit << ","
        << r.opt_db_hit << "\n";
  }
  out << "aggregate,Wori," << wori_ms << "\n";
  out << "aggregate,Wopt," << wopt_ms << "\n";
  out << "aggregate,MV," << mv_ms << "\n";
  out << "aggregate,Wori/Wopt," << ratio() << "\n";
  out << "aggregate,Wori/(MV+Wopt)," << ratio_with_mv() << "\n";
  return out.str();
}

std::string BenchReport::to_text() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    out << "[" << r.index << "] " << r.tag << " " << r.text << "\n";
    if (r.tag == "VIEW") {
      out << "    materialized in " << r.opt_ms << " ms\n";
      continue;
    }
    out << "    ori: " << r.ori_ms << " ms, " << r.ori_db_hit << " dbHits\n";
    out << "    opt: " << r.opt_ms << " ms (+" << r.opt_vpg_ms << " ms rewrite), " << r.opt_db_hit
        << " dbHits, speedup " << r.speedup << "x\n";
  }
  out << "Wori=" << wori_ms << " ms  Wopt=" << wopt_ms << " ms  MV=" << mv_ms << " ms\n";
  out << "Wori/Wopt=" << ratio() << "  Wori/(MV+Wopt)=" << ratio_with_mv() << "\n";
  return out.str();
}

std::vector<ScaleRow> maintenance_scaling(const DatasetSource& src, const std::string& view_stmt,
                                          const std::vector<std::size_t>& counts,
                                          std::uint64_t seed) {
  std::vector<ScaleRow> rows;
  for (std::size_t count : counts) {
    auto db = make_database(src);
    db->run(view_stmt);

    std::vector<EdgeId> base;
    for (const auto& label : db->graph().schema().edge_labels()) {
      const auto& ids = db->graph().edges_with_label(label);
      base.insert(base.end(), ids.begin(), ids.end());
    }
    if (count > base.size()) {
      throw Error(ErrorCode::InsufficientEdges,
                  "need " + std::to_string(count) + " base edges, dataset has " +
                      std::to_string(base.size()));
    }
    std::mt19937_64 rng(seed + count);
    for (std::size_t i = 0; i < count; ++i) {  // partial Fisher-Yates
      std::size_t j = i + rng() % (base.size() - i);
      std::swap(base[i], base[j]);
    }

    db->views().reset_counters();
    auto t0 = Clock::now();
    for (std::size_t i = 0; i < count; ++i) db->graph().delete_edge(base[i]);
    ScaleRow row;
    row.count = count;
    row.wall_ms = ms_since(t0);
    row.maintenance_db_hits = db->views().cumulative().db_hits;
    rows.push_back(row);
  }
  return rows;
}

std::string scaling_to_csv(const std::vector<ScaleRow>& rows) {
  std::ostringstream out;
  out << "count,maintenanceDbHit,wallMs\n";
  for (const auto& r : rows) {
    out << r.count << "," << r.maintenance_db_hits << "," << r.wall_ms << "\n";
  }
  return out.str();
}

std::string scaling_to_text(const std::vector<ScaleRow>& rows) {
  std::ostringstream out;
  out << std::setw(10) << "count" << std::setw(20) << "maintenanceDbHit" << std::setw(14)
      << "wallMs" << "\n";
  for (const auto& r : rows) {
    out << std::setw(10) << r.count << std::setw(20) << r.maintenance_db_hits << std::setw(14)
        << std::fixed << std::setprecision(3) << r.wall_ms << "\n";
  }
  return out.str();
}

}  // namespace pgview
