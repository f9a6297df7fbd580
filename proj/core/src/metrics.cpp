#include "eonsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "eonsim/errors.hpp"

namespace eonsim {

namespace {

double ratio_or_zero(double numerator, double denominator) {
  return denominator > 0.0 ? numerator / denominator : 0.0;
}

}  // namespace

double restoration_bbp(const RunMetrics& m, int priority) {
  const int c = RunMetrics::class_index(priority);
  return ratio_or_zero(m.blocked_restoration_bitrate[c], m.disrupted_bitrate[c]);
}

double restoration_ratio(const RunMetrics& m, int priority) {
  const int c = RunMetrics::class_index(priority);
  return ratio_or_zero(m.restored_bitrate[c], m.disrupted_bitrate[c]);
}

double rht_ratio(const RunMetrics& m, int priority) {
  const int c = RunMetrics::class_index(priority);
  return ratio_or_zero(m.recovered_remaining_s[c], m.disrupted_remaining_s[c]);
}

double arrival_blocking_ratio(const RunMetrics& m) {
  double offered = 0.0;
  double blocked = 0.0;
  for (int c = 0; c < kPriorityClasses; ++c) {
    offered += m.offered_bitrate[c];
    blocked += m.blocked_bitrate[c];
  }
  return ratio_or_zero(blocked, offered);
}

PolicyRow make_policy_row(double load, int replication, const RunMetrics& m) {
  PolicyRow row;
  row.load_erlang = load;
  row.replication = replication;
  for (int p = 1; p <= kPriorityClasses; ++p) {
    const int c = RunMetrics::class_index(p);
    row.bbp[c] = restoration_bbp(m, p);
    row.rht[c] = rht_ratio(m, p);
    row.disrupted[c] = m.disrupted_bitrate[c] > 0.0;
  }
  return row;
}

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  out.se = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

std::vector<ComparisonCell> compare_policies(std::span<const PolicyRow> fdsp,
                                             std::span<const PolicyRow> fdfs) {
  if (fdsp.size() != fdfs.size()) {
    throw ValidationError("compare_policies: row counts differ");
  }

  using Key = std::pair<double, int>;  // load, replication
  std::map<Key, const PolicyRow*> baseline;
  for (const PolicyRow& row : fdfs) {
    if (!baseline.emplace(Key{row.load_erlang, row.replication}, &row).second) {
      throw ValidationError("compare_policies: duplicate fdfs row");
    }
  }

  std::map<double, std::vector<std::pair<const PolicyRow*, const PolicyRow*>>>
      by_load;
  for (const PolicyRow& row : fdsp) {
    const auto it = baseline.find(Key{row.load_erlang, row.replication});
    if (it == baseline.end()) {
      throw ValidationError("compare_policies: unpaired fdsp row at load " +
                            std::to_string(row.load_erlang));
    }
    by_load[row.load_erlang].push_back({&row, it->second});
  }

  std::vector<ComparisonCell> cells;
  for (const auto& [load, pairs] : by_load) {
    for (int p = 1; p <= kPriorityClasses; ++p) {
      const int c = RunMetrics::class_index(p);
      std::vector<double> bbp_a, bbp_b, rht_a, rht_b;
      for (const auto& [a, b] : pairs) {
        bbp_a.push_back(a->bbp[c]);
        bbp_b.push_back(b->bbp[c]);
        rht_a.push_back(a->rht[c]);
        rht_b.push_back(b->rht[c]);
      }
      ComparisonCell cell;
      cell.load_erlang = load;
      cell.priority = p;
      cell.replications = static_cast<int>(pairs.size());
      const auto ma = mean_se(bbp_a), mb = mean_se(bbp_b);
      const auto ra = mean_se(rht_a), rb = mean_se(rht_b);
      cell.bbp_fdsp = ma.mean;
      cell.bbp_fdsp_se = ma.se;
      cell.bbp_fdfs = mb.mean;
      cell.bbp_fdfs_se = mb.se;
      cell.rht_fdsp = ra.mean;
      cell.rht_fdsp_se = ra.se;
      cell.rht_fdfs = rb.mean;
      cell.rht_fdfs_se = rb.se;
      cell.diff_bbp = mb.mean - ma.mean;
      cell.diff_rht = ra.mean - rb.mean;
      if (mb.mean != 0.0) {
        cell.delta_bbp_percent = 100.0 * (mb.mean - ma.mean) / mb.mean;
      }
      if (rb.mean != 0.0) {
        cell.delta_rht_percent = 100.0 * (ra.mean - rb.mean) / rb.mean;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace eonsim
