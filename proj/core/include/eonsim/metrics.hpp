#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "eonsim/engine.hpp"

namespace eonsim {

// Restoration bit-rate blocking probability for one priority class:
// blocked restoration bit rate over disrupted bit rate, 0 when nothing
// was disrupted.
double restoration_bbp(const RunMetrics& m, int priority);

// Complement view: restored over disrupted bit rate, 0 when nothing was
// disrupted.
double restoration_ratio(const RunMetrics& m, int priority);

// Remaining-holding-time recovery: recovered remaining seconds over
// disrupted remaining seconds, 0 when nothing was disrupted.
double rht_ratio(const RunMetrics& m, int priority);

// Bit-rate-weighted arrival blocking over the whole run.
double arrival_blocking_ratio(const RunMetrics& m);

// Per-replication snapshot used for paired policy comparisons.
struct PolicyRow {
  double load_erlang = 0.0;
  int replication = 0;
  std::array<double, kPriorityClasses> bbp{};
  std::array<double, kPriorityClasses> rht{};
  std::array<bool, kPriorityClasses> disrupted{};
};

PolicyRow make_policy_row(double load, int replication, const RunMetrics& m);

// Paired FDSP-vs-FDFS summary for one (load, priority) cell.
struct ComparisonCell {
  double load_erlang = 0.0;
  int priority = 1;
  int replications = 0;

  double bbp_fdsp = 0.0, bbp_fdfs = 0.0;
  double rht_fdsp = 0.0, rht_fdfs = 0.0;
  double bbp_fdsp_se = 0.0, bbp_fdfs_se = 0.0;
  double rht_fdsp_se = 0.0, rht_fdfs_se = 0.0;

  // Exact paired mean differences; these negate when the inputs swap.
  double diff_bbp = 0.0;  // fdfs - fdsp
  double diff_rht = 0.0;  // fdsp - fdfs

  // Percentage changes against the FDFS baseline, absent when the
  // baseline denominator is zero.
  std::optional<double> delta_bbp_percent;  // 100 * (fdfs - fdsp) / fdfs
  std::optional<double> delta_rht_percent;  // 100 * (fdsp - fdfs) / fdfs
};

// Rows must pair up by (load, replication); throws ValidationError when
// they do not.
std::vector<ComparisonCell> compare_policies(std::span<const PolicyRow> fdsp,
                                             std::span<const PolicyRow> fdfs);

// Mean and standard error of the mean (0 for a single sample).
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(std::span<const double> values);

}  // namespace eonsim
