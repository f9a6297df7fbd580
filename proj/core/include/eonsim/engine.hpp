#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eonsim/prioritizer.hpp"
#include "eonsim/rng.hpp"
#include "eonsim/rsa.hpp"
#include "eonsim/topology.hpp"
#include "eonsim/traffic.hpp"

namespace eonsim {

enum class Policy { Fdsp, Fdfs };

std::string policy_name(Policy policy);
std::optional<Policy> parse_policy(const std::string& name);

struct Event {
  enum class Kind { Departure = 0, Arrival = 1, FailureInjection = 2 };
  double time_s = 0.0;
  Kind kind = Kind::Arrival;
  std::int64_t payload = 0;  // request index (arrival) or service id (departure)
};

// Dequeue order: time, then departures before arrivals before failure
// injections, then payload.
bool event_after(const Event& a, const Event& b);

struct ActiveService {
  ServiceRequest request;
  Allocation allocation;
  double departure_s = 0.0;
};

struct PrioritizationTiming {
  Policy policy = Policy::Fdsp;
  int batch_size = 0;
  double elapsed_ms = 0.0;  // wall clock, excluded from fingerprints
};

struct RunMetrics {
  // Indexed by priority class - 1.
  std::array<double, kPriorityClasses> disrupted_bitrate{};
  std::array<double, kPriorityClasses> restored_bitrate{};
  std::array<double, kPriorityClasses> blocked_restoration_bitrate{};
  std::array<double, kPriorityClasses> disrupted_remaining_s{};
  std::array<double, kPriorityClasses> recovered_remaining_s{};

  std::array<std::int64_t, kPriorityClasses> offered_requests{};
  std::array<std::int64_t, kPriorityClasses> blocked_requests{};
  std::array<double, kPriorityClasses> offered_bitrate{};
  std::array<double, kPriorityClasses> blocked_bitrate{};

  std::int64_t requests_processed = 0;
  double failure_time_s = -1.0;  // < 0 when no failure was injected
  int disrupted_count = 0;
  std::uint64_t prefailure_grid_hash = 0;

  std::vector<PrioritizationTiming> prioritization;

  static int class_index(int priority) { return priority - 1; }

  // Checks bit-rate conservation per class and accumulator signs; throws
  // ContractViolation on breach.
  void validate() const;

  // Hash over all deterministic fields (timings excluded).
  std::uint64_t fingerprint() const;
};

struct FailureSpec {
  std::int64_t after_request = 3000;  // 1-based arrival count triggering failure
  int count = 4;                      // links drawn when `links` is empty
  std::vector<LinkId> links;          // explicit failure set, optional
};

struct SimParams {
  int slot_count = 256;
  RsaConfig rsa;
  NormalizationConfig norm;
};

struct RunOptions {
  bool check_invariants = false;
  std::ostream* debug = nullptr;
  // All-pairs cache over the intact topology, shared read-only.
  const KspCache* pristine_cache = nullptr;
  // Optional cache reused for the post-failure phase (paired runs share it).
  KspCache* post_failure_cache = nullptr;
};

// Single-threaded discrete-event run over one traffic realization. The
// topology is taken over for the run: grids are resized, failed links stay
// failed. Arrivals are provisioned (blocked ones dropped without retry),
// departures release spectrum, and after `after_request` arrivals the
// failure set is injected and handled under the given policy.
RunMetrics run(Topology& topo, std::span<const ServiceRequest> traffic,
               Policy policy, const FailureSpec& failure, Rng& failure_rng,
               const SimParams& params, const RunOptions& opts = {});

struct ReplicationRow {
  double load_erlang = 0.0;
  int replication = 0;
  Policy policy = Policy::Fdsp;
  RunMetrics metrics;
};

struct ReplicationPlan {
  const Topology* base_topology = nullptr;
  SimParams params;
  TrafficConfig traffic;  // load_erlang and seed filled per replication
  std::vector<double> loads;
  int replications = 1;
  std::vector<Policy> policies{Policy::Fdsp, Policy::Fdfs};
  FailureSpec failure;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0: hardware concurrency
  const KspCache* pristine_cache = nullptr;
  bool check_invariants = false;
};

// Paired independent replications: every policy sees the same traffic and
// failure draw per (load, replication). Rows come back in deterministic
// (load, replication, policy) order regardless of thread count.
std::vector<ReplicationRow> run_replications(const ReplicationPlan& plan);

}  // namespace eonsim
