#include "eonsim/traffic.hpp"

#include "eonsim/errors.hpp"

namespace eonsim {

TrafficGenerator::TrafficGenerator(const TrafficConfig& cfg, int node_count)
    : cfg_(cfg), node_count_(node_count), rng_(cfg.seed) {
  if (node_count < 2) {
    throw ValidationError("traffic: need at least 2 nodes");
  }
  if (cfg.load_erlang <= 0.0 || cfg.mean_holding_s <= 0.0) {
    throw ValidationError("traffic: load and mean holding time must be positive");
  }
  if (cfg.priority_weights.size() != kPriorityClasses) {
    throw ValidationError("traffic: expected one weight per priority class");
  }
  for (double w : cfg.priority_weights) {
    if (w <= 0.0) throw ValidationError("traffic: priority weights must be positive");
  }
  if (cfg.bit_rates_gbps.empty()) {
    throw ValidationError("traffic: bit rate list is empty");
  }
}

ServiceRequest TrafficGenerator::next() {
  // Fixed draw order per request; tests freeze streams against it.
  const double mean_interarrival = cfg_.mean_holding_s / cfg_.load_erlang;
  clock_s_ += rng_.exponential(mean_interarrival);

  ServiceRequest req;
  req.id = next_id_++;
  req.arrival_s = clock_s_;
  req.holding_s = rng_.exponential(cfg_.mean_holding_s);
  req.src = static_cast<NodeId>(rng_.bounded(node_count_));
  NodeId dst = static_cast<NodeId>(rng_.bounded(node_count_ - 1));
  if (dst >= req.src) ++dst;
  req.dst = dst;
  req.bit_rate_gbps =
      cfg_.bit_rates_gbps[rng_.bounded(cfg_.bit_rates_gbps.size())];
  req.priority = 1 + static_cast<int>(rng_.weighted(cfg_.priority_weights));
  return req;
}

std::vector<ServiceRequest> TrafficGenerator::generate_all() {
  std::vector<ServiceRequest> out;
  out.reserve(cfg_.request_count);
  for (std::int64_t i = 0; i < cfg_.request_count; ++i) {
    out.push_back(next());
  }
  return out;
}

std::vector<ServiceRequest> generate_traffic(const TrafficConfig& cfg,
                                             int node_count) {
  return TrafficGenerator(cfg, node_count).generate_all();
}

}  // namespace eonsim
