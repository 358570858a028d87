#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgview/csv.hpp"
#include "pgview/workload.hpp"

namespace pgview {

/// One workload item measured on both routes. The unoptimized route skips
/// VIEW items; the optimized route creates them (timed into mv_ms) and
/// rewrites reads before executing. Write timings include maintenance work;
/// their recover statements run untimed after every repetition.
struct BenchRow {
  int index = 0;
  std::string tag;
  std::string text;
  double ori_ms = 0;
  double opt_ms = 0;
  double opt_vpg_ms = 0;  // rewrite time, reads only
  std::uint64_t ori_db_hit = 0;
  std::uint64_t opt_db_hit = 0;  // includes maintenance hits for writes
  double speedup = 0;            // ori_ms / (opt_vpg_ms + opt_ms)
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double wori_ms = 0;  // sum of read+write ori times
  double wopt_ms = 0;  // sum of read+write (rewrite + exec) times
  double mv_ms = 0;    // total view materialization time

  double ratio() const { return wopt_ms > 0 ? wori_ms / wopt_ms : 0; }
  double ratio_with_mv() const {
    return (mv_ms + wopt_ms) > 0 ? wori_ms / (mv_ms + wopt_ms) : 0;
  }

  std::string to_text() const;
  std::string to_csv() const;
};

/// Runs the workload on two fresh databases loaded from src. Every read and
/// write is executed warmup + repetitions times; recorded values are the
/// averages of the measured repetitions.
BenchReport bench(const DatasetSource& src, const WorkloadScript& workload, int repetitions,
                  int warmup);

struct ScaleRow {
  std::size_t count = 0;
  std::uint64_t maintenance_db_hits = 0;
  double wall_ms = 0;
};

/// For each count: reload the dataset, create the view, then delete that many
/// randomly chosen base edges, measuring the maintenance work they trigger.
std::vector<ScaleRow> maintenance_scaling(const DatasetSource& src, const std::string& view_stmt,
                                          const std::vector<std::size_t>& counts,
                                          std::uint64_t seed);

std::string scaling_to_csv(const std::vector<ScaleRow>& rows);
std::string scaling_to_text(const std::vector<ScaleRow>& rows);

}  // namespace pgview
