#pragma once

#include <cstdint>
#include <vector>

#include "eonsim/rng.hpp"
#include "eonsim/spectrum.hpp"
#include "eonsim/topology.hpp"

namespace eonsim {

// 5G slice classes mapped onto restoration priorities.
inline constexpr int kPriorityMmtc = 1;
inline constexpr int kPriorityEmbb = 2;
inline constexpr int kPriorityUrllc = 3;
inline constexpr int kPriorityClasses = 3;

struct ServiceRequest {
  ServiceId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  int bit_rate_gbps = 0;
  int priority = kPriorityMmtc;  // 1..3
  double arrival_s = 0.0;
  double holding_s = 0.0;

  double departure_s() const { return arrival_s + holding_s; }
};

struct TrafficConfig {
  double load_erlang = 100.0;
  double mean_holding_s = 3600.0;
  std::vector<double> priority_weights{25.0, 40.0, 35.0};  // classes 1,2,3
  std::vector<int> bit_rates_gbps{100, 200, 400};
  std::int64_t request_count = 5000;
  std::uint64_t seed = 1;
};

// Poisson arrivals at rate load/mean_holding, exponential holding times,
// endpoints uniform over ordered distinct pairs, bit rates uniform,
// priorities drawn with the configured weights. Fully deterministic per
// seed; ids increase with arrival time.
class TrafficGenerator {
 public:
  TrafficGenerator(const TrafficConfig& cfg, int node_count);

  ServiceRequest next();

  std::vector<ServiceRequest> generate_all();

 private:
  TrafficConfig cfg_;
  int node_count_;
  Rng rng_;
  ServiceId next_id_ = 0;
  double clock_s_ = 0.0;
};

std::vector<ServiceRequest> generate_traffic(const TrafficConfig& cfg,
                                             int node_count);

}  // namespace eonsim
