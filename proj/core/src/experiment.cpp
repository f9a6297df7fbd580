#include "eonsim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "eonsim/errors.hpp"

namespace eonsim {

namespace fs = std::filesystem;

namespace {

// Locale-independent, deterministic number rendering.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<ReplicationRow> run_sweep(const RunConfig& config,
                                      const Topology& topo,
                                      std::ostream* log) {
  KspCache pristine(topo, config.k);
  pristine.prebuild_all_pairs(topo);
  if (log) {
    *log << "prebuilt k-shortest paths for " << topo.node_count()
         << " nodes, k=" << config.k << "\n";
  }

  ReplicationPlan plan;
  plan.base_topology = &topo;
  plan.params = config.sim_params();
  plan.traffic = config.traffic_config();
  plan.loads = config.loads;
  plan.replications = config.replications;
  plan.policies = config.policies;
  plan.failure = config.failure_spec();
  plan.base_seed = config.seed;
  plan.threads = config.threads;
  plan.pristine_cache = &pristine;
  return run_replications(plan);
}

std::vector<AggregateRow> aggregate_rows(const RunConfig& config,
                                         const std::vector<ReplicationRow>& rows,
                                         Policy policy) {
  std::vector<AggregateRow> out;
  for (double load : config.loads) {
    AggregateRow agg;
    agg.load_erlang = load;
    std::array<double, kPriorityClasses> bb{}, rr{}, ht{};
    double arrival = 0.0;
    int n = 0;
    for (const ReplicationRow& row : rows) {
      if (row.policy != policy || row.load_erlang != load) continue;
      for (int p = 1; p <= kPriorityClasses; ++p) {
        const int c = RunMetrics::class_index(p);
        bb[c] += restoration_bbp(row.metrics, p);
        rr[c] += restoration_ratio(row.metrics, p);
        ht[c] += rht_ratio(row.metrics, p);
        if (row.metrics.disrupted_bitrate[c] <= 0.0) {
          ++agg.zero_disruption_reps[c];
        }
      }
      arrival += arrival_blocking_ratio(row.metrics);
      ++n;
    }
    if (n == 0) continue;
    for (int c = 0; c < kPriorityClasses; ++c) {
      agg.bb[c] = bb[c] / n;
      agg.rr[c] = rr[c] / n;
      agg.ht[c] = ht[c] / n;
    }
    agg.arrival_bp = arrival / n;
    agg.replications = n;
    out.push_back(agg);
  }
  return out;
}

std::string render_blocking_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "load,bb_p1,bb_p2,bb_p3,rr_p1,rr_p2,rr_p3,ht_p1,ht_p2,ht_p3,arrival_bp,"
      "reps\n";
  for (const AggregateRow& r : rows) {
    out += fmt(r.load_erlang);
    for (int c = 0; c < kPriorityClasses; ++c) out += "," + fmt(r.bb[c]);
    for (int c = 0; c < kPriorityClasses; ++c) out += "," + fmt(r.rr[c]);
    for (int c = 0; c < kPriorityClasses; ++c) out += "," + fmt(r.ht[c]);
    out += "," + fmt(r.arrival_bp);
    out += "," + std::to_string(r.replications);
    out += "\n";
  }
  return out;
}

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) {
      out.close();
      fs::remove(tmp);
      throw ValidationError("short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move result into place: " + path.string());
  }
}

}  // namespace

std::vector<std::string> write_result_csvs(const RunConfig& config,
                                           const std::vector<ReplicationRow>& rows,
                                           std::ostream* log) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw ValidationError("cannot create output directory: " + config.output_dir);
  }

  std::vector<std::string> written;
  try {
    for (Policy policy : config.policies) {
      const auto aggregates = aggregate_rows(config, rows, policy);
      const fs::path path =
          fs::path(config.output_dir) /
          (policy_name(policy) + "_" + std::to_string(config.failure_count) +
           "_blocking.csv");
      write_atomic(path, render_blocking_csv(aggregates));
      written.push_back(path.string());
      if (log) {
        for (const AggregateRow& r : aggregates) {
          for (int c = 0; c < kPriorityClasses; ++c) {
            if (r.zero_disruption_reps[c] > 0) {
              *log << "note: " << policy_name(policy) << " load "
                   << fmt(r.load_erlang) << " priority " << (c + 1) << ": "
                   << r.zero_disruption_reps[c] << "/" << r.replications
                   << " replications had no disruption (0-by-convention)\n";
            }
          }
        }
      }
    }
  } catch (...) {
    // Never leave a partial result set behind.
    for (const std::string& path : written) {
      std::error_code ignore;
      fs::remove(path, ignore);
    }
    throw;
  }
  return written;
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open result file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = cells;
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const std::string& c : cells) {
      try {
        row.push_back(std::stod(c));
      } catch (const std::exception&) {
        throw ParseError("bad numeric cell '" + c + "' in " + path);
      }
    }
    if (row.size() != table.header.size()) {
      throw ParseError("ragged row in " + path);
    }
    table.rows.push_back(std::move(row));
  }
  if (first) throw ParseError("empty result file: " + path);
  return table;
}

int column(const CsvTable& t, const std::string& name, const std::string& path) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) {
    throw ParseError("missing column '" + name + "' in " + path);
  }
  return static_cast<int>(it - t.header.begin());
}

}  // namespace

std::string summarize_csvs(const std::string& fdsp_path,
                           const std::string& fdfs_path) {
  const CsvTable a = read_csv(fdsp_path);
  const CsvTable b = read_csv(fdfs_path);
  if (a.rows.size() != b.rows.size()) {
    throw ValidationError("summarize: row counts differ between files");
  }
  const int load_a = column(a, "load", fdsp_path);
  const int load_b = column(b, "load", fdfs_path);

  std::string out =
      "load,bbp_reduction_p1,bbp_reduction_p2,bbp_reduction_p3,"
      "rht_change_p1,rht_change_p2,rht_change_p3\n";
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i][load_a] != b.rows[i][load_b]) {
      throw ValidationError("summarize: load mismatch at row " +
                            std::to_string(i + 1));
    }
    out += fmt(a.rows[i][load_a]);
    for (int p = 1; p <= kPriorityClasses; ++p) {
      const std::string col = "bb_p" + std::to_string(p);
      const double sp = a.rows[i][column(a, col, fdsp_path)];
      const double fs = b.rows[i][column(b, col, fdfs_path)];
      out += ",";
      if (fs != 0.0) out += fmt(100.0 * (fs - sp) / fs);
    }
    for (int p = 1; p <= kPriorityClasses; ++p) {
      const std::string col = "ht_p" + std::to_string(p);
      const double sp = a.rows[i][column(a, col, fdsp_path)];
      const double fs = b.rows[i][column(b, col, fdfs_path)];
      out += ",";
      if (fs != 0.0) out += fmt(100.0 * (sp - fs) / fs);
    }
    out += "\n";
  }
  return out;
}

}  // namespace eonsim
