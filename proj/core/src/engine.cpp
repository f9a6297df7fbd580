#include "eonsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>
#include <ostream>
#include <queue>
#include <set>
#include <thread>
#include <unordered_map>

#include "eonsim/errors.hpp"

namespace eonsim {

std::string policy_name(Policy policy) {
  return policy == Policy::Fdsp ? "fdsp" : "fdfs";
}

std::optional<Policy> parse_policy(const std::string& name) {
  if (name == "fdsp") return Policy::Fdsp;
  if (name == "fdfs") return Policy::Fdfs;
  return std::nullopt;
}

bool event_after(const Event& a, const Event& b) {
  if (a.time_s != b.time_s) return a.time_s > b.time_s;
  if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
  return a.payload > b.payload;
}

void RunMetrics::validate() const {
  for (int c = 0; c < kPriorityClasses; ++c) {
    const double lhs = disrupted_bitrate[c];
    const double rhs = restored_bitrate[c] + blocked_restoration_bitrate[c];
    if (lhs != rhs) {
      throw ContractViolation(
          "metrics: disrupted != restored + blocked for class " +
          std::to_string(c + 1) + " (" + std::to_string(lhs) + " vs " +
          std::to_string(rhs) + ")");
    }
    for (double v : {disrupted_bitrate[c], restored_bitrate[c],
                     blocked_restoration_bitrate[c], disrupted_remaining_s[c],
                     recovered_remaining_s[c], offered_bitrate[c],
                     blocked_bitrate[c]}) {
      if (v < 0.0 || !std::isfinite(v)) {
        throw ContractViolation("metrics: negative or non-finite accumulator");
      }
    }
    if (blocked_requests[c] > offered_requests[c]) {
      throw ContractViolation("metrics: more blocked than offered requests");
    }
  }
}

std::uint64_t RunMetrics::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  const auto mix_double = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(bits);
  };
  for (int c = 0; c < kPriorityClasses; ++c) {
    mix_double(disrupted_bitrate[c]);
    mix_double(restored_bitrate[c]);
    mix_double(blocked_restoration_bitrate[c]);
    mix_double(disrupted_remaining_s[c]);
    mix_double(recovered_remaining_s[c]);
    mix(static_cast<std::uint64_t>(offered_requests[c]));
    mix(static_cast<std::uint64_t>(blocked_requests[c]));
    mix_double(offered_bitrate[c]);
    mix_double(blocked_bitrate[c]);
  }
  mix(static_cast<std::uint64_t>(requests_processed));
  mix_double(failure_time_s);
  mix(static_cast<std::uint64_t>(disrupted_count));
  mix(prefailure_grid_hash);
  return h;
}

namespace {

std::uint64_t hash_grids(const Topology& topo) {
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const LinkState& l : topo.links()) {
    mix(static_cast<std::uint64_t>(l.id));
    for (int s = 0; s < l.grid.slot_count(); ++s) {
      mix(static_cast<std::uint64_t>(l.grid.owner(s)) + 2);
    }
  }
  return h;
}

// Resolves candidate paths for the current topology phase: the shared
// all-pairs cache while the topology is intact, a rebindable cache after
// the failure.
class PathProvider {
 public:
  PathProvider(Topology& topo, const SimParams& params, const RunOptions& opts)
      : topo_(topo),
        params_(params),
        pristine_(opts.pristine_cache),
        shared_post_(opts.post_failure_cache) {
    if (pristine_ != nullptr &&
        (!pristine_->matches(topo) || pristine_->k() != params.rsa.k)) {
      throw ContractViolation("run: pristine cache does not match topology");
    }
    own_.rebind(topo_, params_.rsa.k);
  }

  // Must be called after the operational set changes.
  void on_topology_changed() {
    if (shared_post_ != nullptr) {
      if (!shared_post_->matches(topo_) || shared_post_->k() != params_.rsa.k) {
        shared_post_->rebind(topo_, params_.rsa.k);
      }
      active_post_ = shared_post_;
    } else {
      own_.rebind(topo_, params_.rsa.k);
      active_post_ = &own_;
    }
  }

  const std::vector<CandidatePath>& paths(NodeId src, NodeId dst) {
    if (active_post_ != nullptr) return active_post_->paths(topo_, src, dst);
    if (pristine_ != nullptr) {
      if (const auto* hit = pristine_->try_paths(src, dst)) return *hit;
    }
    return own_.paths(topo_, src, dst);
  }

 private:
  Topology& topo_;
  const SimParams& params_;
  const KspCache* pristine_;
  KspCache* shared_post_;
  KspCache* active_post_ = nullptr;
  KspCache own_;
};

using ActiveMap = std::unordered_map<ServiceId, ActiveService>;

void release_allocation(Topology& topo, const Allocation& alloc) {
  std::vector<LinkState*> links;
  links.reserve(alloc.links.size());
  for (LinkId id : alloc.links) links.push_back(&topo.link(id));
  const std::size_t freed = spectrum::release(links, alloc.service_id);
  const std::size_t expected =
      static_cast<std::size_t>(alloc.block.width) * alloc.links.size();
  if (freed != expected) {
    throw ContractViolation("release: freed " + std::to_string(freed) +
                            " slots, expected " + std::to_string(expected) +
                            " for service " + std::to_string(alloc.service_id));
  }
}

// Full cross-check between the active-service table and the grids:
// exclusivity, continuity, contiguity, reach, and no occupancy outside
// active allocations.
void verify_state(const Topology& topo, const ActiveMap& active,
                  const SimParams& params) {
  std::size_t expected_owned = 0;
  for (const auto& [id, svc] : active) {
    const Allocation& alloc = svc.allocation;
    if (alloc.block.width <= 0) {
      throw ContractViolation("invariant: empty allocation block");
    }
    const double reach = params.rsa.reach.reach_km(svc.request.bit_rate_gbps,
                                                   alloc.format_index);
    if (reach < alloc.path_length_km) {
      throw ContractViolation("invariant: allocation exceeds modulation reach");
    }
    for (LinkId l : alloc.links) {
      const LinkState& link = topo.link(l);
      if (!link.operational) {
        throw ContractViolation("invariant: active service on failed link");
      }
      for (int s = alloc.block.start; s < alloc.block.end(); ++s) {
        if (link.grid.owner(s) != id) {
          throw ContractViolation("invariant: slot not owned by its service");
        }
      }
    }
    expected_owned += static_cast<std::size_t>(alloc.block.width) *
                      alloc.links.size();
  }
  std::size_t actual_owned = 0;
  for (const LinkState& l : topo.links()) {
    actual_owned += static_cast<std::size_t>(l.grid.occupied_count());
  }
  if (actual_owned != expected_owned) {
    throw ContractViolation("invariant: grid occupancy does not match "
                            "active allocations");
  }
}

struct FailureContext {
  std::vector<LinkId> links;
  bool armed = false;
};

void handle_failure(Topology& topo, ActiveMap& active,
                    const std::vector<LinkId>& failed_links, Policy policy,
                    double now_s, const SimParams& params, PathProvider& provider,
                    RunMetrics& metrics, const RunOptions& opts) {
  metrics.prefailure_grid_hash = hash_grids(topo);
  metrics.failure_time_s = now_s;

  topo.fail_links(failed_links);
  provider.on_topology_changed();

  // Detection sweep: failed links in the given order, services per link by
  // ascending arrival time, first encounter wins.
  std::vector<DisruptedService> batch;
  std::set<ServiceId> seen;
  for (LinkId failed : failed_links) {
    std::vector<const ActiveService*> on_link;
    for (const auto& [id, svc] : active) {
      const auto& links = svc.allocation.links;
      if (std::find(links.begin(), links.end(), failed) != links.end()) {
        on_link.push_back(&svc);
      }
    }
    std::sort(on_link.begin(), on_link.end(),
              [](const ActiveService* x, const ActiveService* y) {
                if (x->request.arrival_s != y->request.arrival_s) {
                  return x->request.arrival_s < y->request.arrival_s;
                }
                return x->request.id < y->request.id;
              });
    for (const ActiveService* svc : on_link) {
      if (!seen.insert(svc->request.id).second) continue;
      DisruptedService d;
      d.id = svc->request.id;
      d.bit_rate_gbps = svc->request.bit_rate_gbps;
      d.priority = svc->request.priority;
      d.remaining_s = svc->departure_s - now_s;
      d.detection_rank = static_cast<int>(batch.size());
      batch.push_back(d);
    }
  }
  metrics.disrupted_count = static_cast<int>(batch.size());

  // Old allocations are torn down in full before anything is re-placed.
  for (const DisruptedService& d : batch) {
    release_allocation(topo, active.at(d.id).allocation);
    const int c = RunMetrics::class_index(d.priority);
    metrics.disrupted_bitrate[c] += d.bit_rate_gbps;
    metrics.disrupted_remaining_s[c] += d.remaining_s;
  }
  if (batch.empty()) return;

  PrioritizerDebug debug;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ServiceId> ranked =
      policy == Policy::Fdsp
          ? rank_fdsp(batch, params.norm, opts.debug ? &debug : nullptr)
          : rank_fdfs(batch);
  const auto t1 = std::chrono::steady_clock::now();
  metrics.prioritization.push_back(
      {policy, static_cast<int>(batch.size()),
       std::chrono::duration<double, std::milli>(t1 - t0).count()});

  if (opts.debug != nullptr) {
    *opts.debug << "failure t=" << now_s << " links=" << failed_links.size()
                << " batch=" << batch.size() << " policy=" << policy_name(policy);
    if (policy == Policy::Fdsp) {
      *opts.debug << " B=" << debug.sum_b << " T=" << debug.sum_t
                  << " P=" << debug.sum_p << " vertex=" << debug.chosen_vertex
                  << " w=(" << debug.weights.w_b << "," << debug.weights.w_t
                  << "," << debug.weights.w_p << ") scores=[";
      for (std::size_t i = 0; i < debug.scores.size(); ++i) {
        *opts.debug << (i ? " " : "") << debug.scores[i];
      }
      *opts.debug << "]";
    }
    *opts.debug << '\n';
  }

  std::unordered_map<ServiceId, double> remaining;
  for (const DisruptedService& d : batch) remaining[d.id] = d.remaining_s;

  // Restoration in rank order on the surviving topology; departure times
  // are untouched. Losers are dropped for good.
  for (ServiceId id : ranked) {
    ActiveService& svc = active.at(id);
    const int c = RunMetrics::class_index(svc.request.priority);
    const auto alloc = provision_on_paths(
        topo, svc.request, params.rsa,
        provider.paths(svc.request.src, svc.request.dst));
    if (alloc) {
      svc.allocation = *alloc;
      metrics.restored_bitrate[c] += svc.request.bit_rate_gbps;
      metrics.recovered_remaining_s[c] += remaining.at(id);
    } else {
      metrics.blocked_restoration_bitrate[c] += svc.request.bit_rate_gbps;
      active.erase(id);
    }
  }

  if (opts.debug != nullptr) {
    for (const LinkState& l : topo.links()) {
      *opts.debug << "grid link " << l.id << (l.operational ? "  " : " x")
                  << " " << to_bit_string(l.grid) << '\n';
    }
  }
}

}  // namespace

RunMetrics run(Topology& topo, std::span<const ServiceRequest> traffic,
               Policy policy, const FailureSpec& failure, Rng& failure_rng,
               const SimParams& params, const RunOptions& opts) {
  topo.reset_grids(params.slot_count);
  RunMetrics metrics;
  PathProvider provider(topo, params, opts);

  const bool failure_enabled = failure.count > 0 || !failure.links.empty();
  if (failure_enabled) {
    if (failure.after_request < 1 ||
        failure.after_request > static_cast<std::int64_t>(traffic.size())) {
      throw ValidationError("run: failure trigger index outside the stream");
    }
  }
  // Drawn up front so paired runs with equal rng state fail the same links.
  FailureContext fctx;
  if (failure_enabled) {
    fctx.links = failure.links.empty()
                     ? topo.sample_failures(failure.count, failure_rng)
                     : failure.links;
    fctx.armed = true;
  }

  std::priority_queue<Event, std::vector<Event>,
                      decltype(&event_after)> queue(&event_after);
  for (std::size_t i = 0; i < traffic.size(); ++i) {
    if (i > 0 && (traffic[i].arrival_s <= traffic[i - 1].arrival_s ||
                  traffic[i].id <= traffic[i - 1].id)) {
      throw ContractViolation("run: arrivals and ids must strictly increase");
    }
    queue.push({traffic[i].arrival_s, Event::Kind::Arrival,
                static_cast<std::int64_t>(i)});
  }

  ActiveMap active;
  std::int64_t arrivals_processed = 0;

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    switch (ev.kind) {
      case Event::Kind::Arrival: {
        const ServiceRequest& req = traffic[ev.payload];
        const int c = RunMetrics::class_index(req.priority);
        ++metrics.offered_requests[c];
        metrics.offered_bitrate[c] += req.bit_rate_gbps;
        const auto alloc = provision_on_paths(topo, req, params.rsa,
                                              provider.paths(req.src, req.dst));
        if (alloc) {
          active.emplace(req.id,
                         ActiveService{req, *alloc, req.departure_s()});
          queue.push({req.departure_s(), Event::Kind::Departure, req.id});
        } else {
          ++metrics.blocked_requests[c];
          metrics.blocked_bitrate[c] += req.bit_rate_gbps;
        }
        ++metrics.requests_processed;
        ++arrivals_processed;
        if (fctx.armed && arrivals_processed == failure.after_request) {
          queue.push({ev.time_s, Event::Kind::FailureInjection, -1});
          fctx.armed = false;
        }
        break;
      }
      case Event::Kind::Departure: {
        const auto it = active.find(ev.payload);
        // Restoration-blocked services were already torn down; their
        // departure events are stale.
        if (it != active.end()) {
          release_allocation(topo, it->second.allocation);
          active.erase(it);
        }
        break;
      }
      case Event::Kind::FailureInjection: {
        handle_failure(topo, active, fctx.links, policy, ev.time_s, params,
                       provider, metrics, opts);
        break;
      }
    }
    if (opts.check_invariants) verify_state(topo, active, params);
  }

  if (opts.check_invariants) {
    if (!active.empty()) {
      throw ContractViolation("run: services still active after last event");
    }
    for (const LinkState& l : topo.links()) {
      if (!l.grid.empty()) {
        throw ContractViolation("run: leaked slots on link " +
                                std::to_string(l.id));
      }
    }
  }
  metrics.validate();
  return metrics;
}

std::vector<ReplicationRow> run_replications(const ReplicationPlan& plan) {
  if (plan.base_topology == nullptr) {
    throw ValidationError("run_replications: no topology");
  }
  if (plan.replications < 1) {
    throw ValidationError("run_replications: replication count must be >= 1");
  }
  if (plan.loads.empty() || plan.policies.empty()) {
    throw ValidationError("run_replications: empty load or policy list");
  }

  struct Job {
    int load_index;
    int replication;
  };
  std::vector<Job> jobs;
  for (int li = 0; li < static_cast<int>(plan.loads.size()); ++li) {
    for (int r = 0; r < plan.replications; ++r) jobs.push_back({li, r});
  }

  const std::size_t policies = plan.policies.size();
  std::vector<ReplicationRow> rows(jobs.size() * policies);

  constexpr std::uint64_t kTagRun = 0x52554e5f54414731ull;
  constexpr std::uint64_t kTagTraffic = 0x5452414646494331ull;
  constexpr std::uint64_t kTagFailure = 0x4641494c55524531ull;

  const auto run_job = [&](const Job& job) {
    const double load = plan.loads[job.load_index];
    const std::uint64_t job_seed = Rng::derive(
        plan.base_seed, kTagRun,
        (static_cast<std::uint64_t>(job.load_index) << 32) |
            static_cast<std::uint64_t>(job.replication));

    TrafficConfig tcfg = plan.traffic;
    tcfg.load_erlang = load;
    tcfg.seed = Rng::derive(job_seed, kTagTraffic);
    const auto traffic =
        generate_traffic(tcfg, plan.base_topology->node_count());

    // One post-failure path cache per replication: the paired policies
    // fail the same links, so the KSP work is shared.
    KspCache post_failure;
    const std::size_t row_base =
        (static_cast<std::size_t>(job.load_index) * plan.replications +
         job.replication) * policies;
    for (std::size_t pi = 0; pi < policies; ++pi) {
      Topology topo = *plan.base_topology;
      Rng failure_rng(Rng::derive(job_seed, kTagFailure));
      RunOptions opts;
      opts.check_invariants = plan.check_invariants;
      opts.pristine_cache = plan.pristine_cache;
      opts.post_failure_cache = &post_failure;
      RunMetrics m = run(topo, traffic, plan.policies[pi], plan.failure,
                         failure_rng, plan.params, opts);
      rows[row_base + pi] =
          ReplicationRow{load, job.replication, plan.policies[pi], std::move(m)};
    }
  };

  int threads = plan.threads > 0
                    ? plan.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));

  if (threads == 1) {
    for (const Job& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          try {
            run_job(jobs[i]);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return rows;
}

}  // namespace eonsim
