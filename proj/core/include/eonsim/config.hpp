#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eonsim/engine.hpp"

namespace eonsim {

// One experiment sweep: physical-layer constants, traffic model, failure
// scenario, and replication bookkeeping. Loaded from a JSON file and
// overridable from the command line.
struct RunConfig {
  std::string topology_path = "data/germany50.topo";

  int slot_count = 256;
  double slot_width_ghz = 12.5;
  int guard_slots = 1;
  int k = 5;
  std::vector<ModulationFormat> modulations = default_formats();
  std::map<int, std::vector<double>> reach_km = ReachTable::defaults().rows();

  std::vector<double> loads{50,  100, 150, 200, 250, 300, 350, 400, 450, 500,
                            550, 600, 650, 700, 750, 800, 850, 900, 950, 1000};
  double mean_holding_s = 3600.0;
  std::vector<double> priority_weights{25.0, 40.0, 35.0};
  std::vector<int> bit_rates_gbps{100, 200, 400};

  std::int64_t requests_per_run = 5000;
  std::int64_t failure_at = 3000;
  int failure_count = 4;
  int replications = 50;
  std::uint64_t seed = 1;
  std::vector<Policy> policies{Policy::Fdsp, Policy::Fdfs};
  std::string output_dir = "results";
  int threads = 0;  // 0: all hardware threads

  double norm_bitrate_divisor = 400.0;
  double norm_priority_divisor = 3.0;

  // Throws ValidationError on out-of-range or inconsistent values.
  void validate() const;

  ReachTable reach_table() const;
  SimParams sim_params() const;
  TrafficConfig traffic_config() const;
  FailureSpec failure_spec() const;

  // Canonical JSON rendering of the effective configuration.
  std::string normalized_json() const;
};

// Parses a config file; unknown keys are rejected. Missing keys keep
// their defaults. Validates before returning.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

}  // namespace eonsim
