#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eonsim/config.hpp"
#include "eonsim/engine.hpp"
#include "eonsim/metrics.hpp"

namespace eonsim {

// Per-(policy, load) aggregate backing one CSV row.
struct AggregateRow {
  double load_erlang = 0.0;
  std::array<double, kPriorityClasses> bb{};   // mean restoration BBP
  std::array<double, kPriorityClasses> rr{};   // mean restoration ratio
  std::array<double, kPriorityClasses> ht{};   // mean RHT ratio
  double arrival_bp = 0.0;
  int replications = 0;
  std::array<int, kPriorityClasses> zero_disruption_reps{};
};

// Executes the configured sweep with paired replications. `log`, when
// given, receives progress and zero-disruption notes (never part of the
// result files).
std::vector<ReplicationRow> run_sweep(const RunConfig& config,
                                      const Topology& topo,
                                      std::ostream* log = nullptr);

std::vector<AggregateRow> aggregate_rows(const RunConfig& config,
                                         const std::vector<ReplicationRow>& rows,
                                         Policy policy);

// Renders one result file: header
// load,bb_p1,bb_p2,bb_p3,rr_p1,rr_p2,rr_p3,ht_p1,ht_p2,ht_p3,arrival_bp,reps
// with one row per sweep load, LF endings, '.' decimal point.
std::string render_blocking_csv(const std::vector<AggregateRow>& rows);

// Writes `<policy>_<failures>_blocking.csv` per configured policy into
// config.output_dir (created if needed). Files are written atomically;
// nothing is left behind on error. Returns the written paths in policy
// order.
std::vector<std::string> write_result_csvs(const RunConfig& config,
                                           const std::vector<ReplicationRow>& rows,
                                           std::ostream* log = nullptr);

// Builds the FDSP-vs-FDFS comparison from two result files produced by
// write_result_csvs. Loads must match row for row. Columns:
// load,bbp_reduction_p1..p3,rht_change_p1..p3 (percent, empty cell when
// the baseline denominator is zero).
std::string summarize_csvs(const std::string& fdsp_path,
                           const std::string& fdfs_path);

}  // namespace eonsim
