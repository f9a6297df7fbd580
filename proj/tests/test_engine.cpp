#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eonsim/engine.hpp"
#include "eonsim/errors.hpp"
#include "eonsim/metrics.hpp"
#include "oracles.hpp"

using namespace eonsim;

namespace {

ServiceRequest request(ServiceId id, NodeId src, NodeId dst, int rate,
                       int priority, double arrival, double holding) {
  return {id, src, dst, rate, priority, arrival, holding};
}

// Bottleneck fixture: a direct 500 km link 0-1 plus a 1000 km detour
// 0-2-1. At 100 Gbps the direct route needs 2 slots (PM-64QAM), the
// detour 3 (PM-16QAM): with 4 slots per link both services fit the direct
// link but only one fits the detour.
Topology bottleneck() {
  return oracles::make_topology(3,
                                {{0, 1, 500.0}, {0, 2, 500.0}, {2, 1, 500.0}});
}

SimParams small_params(int slots) {
  SimParams p;
  p.slot_count = slots;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("engine");

TEST_CASE("event queue ordering: departures, arrivals, then failures") {
  CHECK(event_after({2.0, Event::Kind::Arrival, 0},
                    {1.0, Event::Kind::Arrival, 1}));
  CHECK(event_after({1.0, Event::Kind::Arrival, 0},
                    {1.0, Event::Kind::Departure, 1}));
  CHECK(event_after({1.0, Event::Kind::FailureInjection, 0},
                    {1.0, Event::Kind::Arrival, 1}));
  CHECK(event_after({1.0, Event::Kind::Arrival, 5},
                    {1.0, Event::Kind::Arrival, 2}));
}

TEST_CASE("zero-load corner: one request, no failure") {
  Topology topo = bottleneck();
  const std::vector traffic{request(0, 0, 1, 100, 3, 1.0, 10.0)};
  FailureSpec none;
  none.count = 0;
  Rng rng(1);
  RunOptions opts;
  opts.check_invariants = true;
  const RunMetrics m =
      run(topo, traffic, Policy::Fdsp, none, rng, small_params(8), opts);
  CHECK(m.requests_processed == 1);
  CHECK(m.blocked_requests == std::array<std::int64_t, 3>{0, 0, 0});
  CHECK(m.disrupted_count == 0);
  CHECK(m.failure_time_s < 0);
}

TEST_CASE("failing an idle link disrupts nothing") {
  Topology topo = bottleneck();
  // Both services ride the direct link 0; links 1 and 2 stay idle.
  const std::vector traffic{request(0, 0, 1, 100, 1, 1.0, 100.0),
                            request(1, 0, 1, 100, 3, 2.0, 100.0)};
  FailureSpec spec;
  spec.after_request = 2;
  spec.links = {1, 2};
  Rng rng(1);
  RunOptions opts;
  opts.check_invariants = true;
  const RunMetrics m =
      run(topo, traffic, Policy::Fdfs, spec, rng, small_params(8), opts);
  CHECK(m.disrupted_count == 0);
  CHECK(m.disrupted_bitrate == std::array<double, 3>{0, 0, 0});
  CHECK(m.failure_time_s == 2.0);
}

TEST_CASE("restoration bottleneck separates the policies") {
  // Priority-1 service arrives (and is detected) first; priority-3
  // second. Only one of them fits the surviving detour.
  const std::vector traffic{request(0, 0, 1, 100, 1, 1.0, 10000.0),
                            request(1, 0, 1, 100, 3, 2.0, 9999.0)};
  FailureSpec spec;
  spec.after_request = 2;
  spec.links = {0};

  const auto run_policy = [&](Policy policy) {
    Topology topo = bottleneck();
    Rng rng(1);
    RunOptions opts;
    opts.check_invariants = true;
    return run(topo, traffic, policy, spec, rng, small_params(4), opts);
  };

  const RunMetrics fdsp = run_policy(Policy::Fdsp);
  const RunMetrics fdfs = run_policy(Policy::Fdfs);

  // Identical pre-failure worlds.
  CHECK(fdsp.prefailure_grid_hash == fdfs.prefailure_grid_hash);
  CHECK(fdsp.disrupted_bitrate == fdfs.disrupted_bitrate);

  // FDSP restores the priority-3 service, FDFS the first-detected one.
  CHECK(fdsp.restored_bitrate[2] == 100);
  CHECK(fdsp.blocked_restoration_bitrate[0] == 100);
  CHECK(fdsp.restored_bitrate[0] == 0);
  CHECK(fdfs.restored_bitrate[0] == 100);
  CHECK(fdfs.blocked_restoration_bitrate[2] == 100);

  // Remaining holding time carried through restoration exactly: the
  // priority-3 service was restored with departure 2 + 9999 at t=2.
  CHECK(fdsp.recovered_remaining_s[2] == 9999.0);
  CHECK(fdsp.recovered_remaining_s[0] == 0.0);
  CHECK(fdfs.recovered_remaining_s[0] == 9999.0);

  // Conservation per class.
  for (const RunMetrics* m : {&fdsp, &fdfs}) {
    for (int c = 0; c < 3; ++c) {
      CHECK(m->disrupted_bitrate[c] ==
            m->restored_bitrate[c] + m->blocked_restoration_bitrate[c]);
    }
  }
}

TEST_CASE("abundant spectrum restores every service under both policies") {
  const std::vector traffic{request(0, 0, 1, 100, 1, 1.0, 10000.0),
                            request(1, 0, 1, 100, 3, 2.0, 9999.0)};
  FailureSpec spec;
  spec.after_request = 2;
  spec.links = {0};
  for (Policy policy : {Policy::Fdsp, Policy::Fdfs}) {
    Topology topo = bottleneck();
    Rng rng(1);
    RunOptions opts;
    opts.check_invariants = true;
    const RunMetrics m =
        run(topo, traffic, policy, spec, rng, small_params(16), opts);
    CHECK(m.restored_bitrate[0] == 100);
    CHECK(m.restored_bitrate[2] == 100);
    CHECK(m.blocked_restoration_bitrate == std::array<double, 3>{0, 0, 0});
  }
}

TEST_CASE("a service crossing two failed links is disrupted once") {
  Topology topo = bottleneck();
  topo.fail_links({0});  // force the request onto the 0-2-1 detour
  const std::vector traffic{request(0, 0, 1, 100, 2, 1.0, 1000.0)};
  FailureSpec spec;
  spec.after_request = 1;
  spec.links = {1, 2};
  Rng rng(1);
  RunOptions opts;
  opts.check_invariants = true;
  const RunMetrics m =
      run(topo, traffic, Policy::Fdsp, spec, rng, small_params(8), opts);
  CHECK(m.disrupted_count == 1);
  CHECK(m.disrupted_bitrate[1] == 100);
  CHECK(m.blocked_restoration_bitrate[1] == 100);  // nothing survives
}

TEST_CASE("same seed and policy replay to identical metrics") {
  const Topology base = load_topology_file(std::string(EONSIM_DATA_DIR) +
                                           "/germany50.topo");
  TrafficConfig tcfg;
  tcfg.load_erlang = 700;
  tcfg.request_count = 600;
  tcfg.seed = 77;
  const auto traffic = generate_traffic(tcfg, base.node_count());
  FailureSpec spec;
  spec.after_request = 300;
  spec.count = 4;
  SimParams params;  // full 256-slot grid

  const auto once = [&](Policy policy) {
    Topology topo = base;
    Rng rng(42);
    RunOptions opts;
    opts.check_invariants = true;
    return run(topo, traffic, policy, spec, rng, params, opts);
  };
  const RunMetrics a = once(Policy::Fdsp);
  const RunMetrics b = once(Policy::Fdsp);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.disrupted_count == b.disrupted_count);

  // Policy isolation: pre-failure state identical across policies.
  const RunMetrics c = once(Policy::Fdfs);
  CHECK(a.prefailure_grid_hash == c.prefailure_grid_hash);
  CHECK(a.disrupted_bitrate == c.disrupted_bitrate);
  CHECK(a.disrupted_remaining_s == c.disrupted_remaining_s);
}

TEST_CASE("blocked arrivals are counted per class and never retried") {
  // One 2-slot link: the first width-2 service fills it, the second is
  // blocked on arrival and the third fits after the first departs.
  Topology topo = oracles::make_topology(2, {{0, 1, 100.0}});
  const std::vector traffic{request(0, 0, 1, 100, 2, 1.0, 5.0),
                            request(1, 1, 0, 100, 3, 2.0, 5.0),
                            request(2, 0, 1, 100, 1, 7.0, 5.0)};
  FailureSpec none;
  none.count = 0;
  Rng rng(1);
  RunOptions opts;
  opts.check_invariants = true;
  const RunMetrics m =
      run(topo, traffic, Policy::Fdsp, none, rng, small_params(2), opts);
  CHECK(m.offered_requests == std::array<std::int64_t, 3>{1, 1, 1});
  CHECK(m.blocked_requests == std::array<std::int64_t, 3>{0, 0, 1});
  CHECK(m.blocked_bitrate[2] == 100);
  CHECK(m.offered_bitrate[1] == 100);
}

TEST_CASE("debug stream reports the weight optimization and grids") {
  const std::vector traffic{request(0, 0, 1, 100, 1, 1.0, 10000.0),
                            request(1, 0, 1, 100, 3, 2.0, 9999.0)};
  FailureSpec spec;
  spec.after_request = 2;
  spec.links = {0};
  Topology topo = bottleneck();
  Rng rng(1);
  std::ostringstream dump;
  RunOptions opts;
  opts.debug = &dump;
  run(topo, traffic, Policy::Fdsp, spec, rng, small_params(4), opts);
  const std::string text = dump.str();
  CHECK(text.find("failure t=2") != std::string::npos);
  CHECK(text.find("vertex=") != std::string::npos);
  CHECK(text.find("scores=[") != std::string::npos);
  CHECK(text.find("grid link 0 x") != std::string::npos);  // failed link
}

TEST_CASE("failure trigger outside the stream is rejected") {
  Topology topo = bottleneck();
  const std::vector traffic{request(0, 0, 1, 100, 1, 1.0, 10.0)};
  FailureSpec spec;
  spec.after_request = 5;
  spec.count = 1;
  Rng rng(1);
  CHECK_THROWS_AS(
      run(topo, traffic, Policy::Fdsp, spec, rng, small_params(8), {}),
      ValidationError);
}

TEST_CASE("run_replications pairs policies on identical realizations") {
  const Topology base = load_topology_file(std::string(EONSIM_DATA_DIR) +
                                           "/germany50.topo");
  KspCache pristine(base, 5);

  ReplicationPlan plan;
  plan.base_topology = &base;
  plan.traffic.request_count = 400;
  plan.loads = {500, 900};
  plan.replications = 2;
  plan.failure.after_request = 200;
  plan.failure.count = 4;
  plan.base_seed = 9;
  plan.threads = 2;
  plan.pristine_cache = &pristine;
  plan.check_invariants = true;

  const auto rows = run_replications(plan);
  REQUIRE(rows.size() == 2 * 2 * 2);

  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].policy == Policy::Fdsp);
    CHECK(rows[i + 1].policy == Policy::Fdfs);
    CHECK(rows[i].load_erlang == rows[i + 1].load_erlang);
    CHECK(rows[i].replication == rows[i + 1].replication);
    // Paired: both policies saw the same disruption.
    CHECK(rows[i].metrics.disrupted_bitrate ==
          rows[i + 1].metrics.disrupted_bitrate);
    CHECK(rows[i].metrics.prefailure_grid_hash ==
          rows[i + 1].metrics.prefailure_grid_hash);
  }

  SUBCASE("single replication equals a direct run") {
    ReplicationPlan one = plan;
    one.loads = {500};
    one.replications = 1;
    one.policies = {Policy::Fdsp};
    const auto single = run_replications(one);
    REQUIRE(single.size() == 1);
    // Same seed derivation as the sweep row for (load index 0, rep 0).
    CHECK(single[0].metrics.fingerprint() == rows[0].metrics.fingerprint());
  }

  SUBCASE("thread count does not change the outcome") {
    ReplicationPlan serial = plan;
    serial.threads = 1;
    const auto rows1 = run_replications(serial);
    REQUIRE(rows1.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows1[i].metrics.fingerprint() == rows[i].metrics.fingerprint());
    }
  }
}

TEST_CASE("standard error shrinks roughly like one over root replications") {
  const Topology base = load_topology_file(std::string(EONSIM_DATA_DIR) +
                                           "/germany50.topo");
  KspCache pristine(base, 5);

  ReplicationPlan plan;
  plan.base_topology = &base;
  plan.traffic.request_count = 500;
  plan.loads = {800};
  plan.replications = 32;
  plan.policies = {Policy::Fdfs};
  plan.failure.after_request = 250;
  plan.failure.count = 4;
  plan.base_seed = 4;
  plan.pristine_cache = &pristine;

  const auto rows = run_replications(plan);
  std::vector<double> bbp;
  for (const ReplicationRow& r : rows) {
    bbp.push_back(restoration_bbp(r.metrics, 3));
  }
  const auto half = mean_se(std::span(bbp).subspan(0, 16));
  const auto full = mean_se(bbp);
  REQUIRE(half.se > 0);
  const double ratio = full.se / half.se;
  CHECK(ratio > 0.4);
  CHECK(ratio < 1.1);  // ~1/sqrt(2) with sampling noise
}

TEST_SUITE_END();
