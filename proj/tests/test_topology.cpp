#include <doctest.h>

#include <sstream>

#include "eonsim/errors.hpp"
#include "eonsim/rsa.hpp"
#include "eonsim/topology.hpp"
#include "oracles.hpp"

using namespace eonsim;

namespace {

Topology parse(const std::string& doc) {
  std::istringstream in(doc);
  return load_topology(in);
}

const std::string kTriangle =
    "# a triangle\n"
    "nodes:\n"
    "0 a 0 0\n"
    "1 b 0 1\n"
    "2 c 1 0\n"
    "links:\n"
    "0 0 1 100\n"
    "1 1 2 200\n"
    "2 0 2 300\n";

}  // namespace

TEST_SUITE_BEGIN("topology");

TEST_CASE("triangle with explicit lengths parses verbatim") {
  const Topology topo = parse(kTriangle);
  CHECK(topo.node_count() == 3);
  CHECK(topo.link_count() == 3);
  CHECK(topo.link(0).length_km == 100);
  CHECK(topo.link(1).length_km == 200);
  CHECK(topo.link(2).length_km == 300);
  for (const LinkState& l : topo.links()) {
    CHECK(l.operational);
    CHECK(l.grid.slot_count() == 0);  // grids sized at run setup
  }
  CHECK(topo.node(1).name == "b");
}

TEST_CASE("missing length falls back to great-circle distance") {
  const Topology topo = parse(
      "nodes:\n"
      "0 south 0 10\n"
      "1 north 1 10\n"
      "links:\n"
      "0 0 1\n");
  CHECK(topo.link(0).length_km == doctest::Approx(111.19).epsilon(0.001));
}

TEST_CASE("an explicit length wins over the coordinate distance") {
  const Topology topo = parse(
      "nodes:\n"
      "0 south 0 10\n"
      "1 north 1 10\n"
      "links:\n"
      "0 0 1 42.5\n");
  CHECK(topo.link(0).length_km == 42.5);
}

TEST_CASE("great-circle helper: one degree of latitude") {
  CHECK(great_circle_km(0, 0, 1, 0) == doctest::Approx(111.19).epsilon(0.001));
  CHECK(great_circle_km(52.52, 13.405, 52.52, 13.405) == 0.0);
}

TEST_CASE("dangling node reference is rejected") {
  CHECK_THROWS_AS(parse("nodes:\n0 a 0 0\n1 b 0 1\nlinks:\n0 0 99\n"),
                  ValidationError);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse("garbage before any section\n"), ParseError);
  CHECK_THROWS_AS(parse("nodes:\n0 a 0\nlinks:\n"), ParseError);
  CHECK_THROWS_AS(parse("nodes:\n0 a 0 0\n1 b 0 1\nlinks:\n0 0 x\n"), ParseError);
}

TEST_CASE("semantic validation") {
  // fewer than two nodes
  CHECK_THROWS_AS(parse("nodes:\n0 a 0 0\nlinks:\n"), ValidationError);
  // duplicate unordered pair
  CHECK_THROWS_AS(
      parse("nodes:\n0 a 0 0\n1 b 0 1\nlinks:\n0 0 1 5\n1 1 0 7\n"),
      ValidationError);
  // self loop
  CHECK_THROWS_AS(parse("nodes:\n0 a 0 0\n1 b 0 1\nlinks:\n0 0 0 5\n"),
                  ValidationError);
  // non-positive length
  CHECK_THROWS_AS(parse("nodes:\n0 a 0 0\n1 b 0 1\nlinks:\n0 0 1 0\n"),
                  ValidationError);
  // non-dense node ids
  CHECK_THROWS_AS(parse("nodes:\n0 a 0 0\n5 b 0 1\nlinks:\n0 0 5 3\n"),
                  ValidationError);
  // disconnected graph
  CHECK_THROWS_AS(
      parse("nodes:\n0 a 0 0\n1 b 0 1\n2 c 1 0\n3 d 1 1\nlinks:\n0 0 1 5\n"
            "1 2 3 5\n"),
      ValidationError);
}

TEST_CASE("loading is a pure function of the document") {
  const Topology a = parse(kTriangle);
  const Topology b = parse(kTriangle);
  REQUIRE(a.node_count() == b.node_count());
  REQUIRE(a.link_count() == b.link_count());
  for (int i = 0; i < a.link_count(); ++i) {
    CHECK(a.link(i).a == b.link(i).a);
    CHECK(a.link(i).b == b.link(i).b);
    CHECK(a.link(i).length_km == b.link(i).length_km);
  }
  for (int n = 0; n < a.node_count(); ++n) {
    CHECK(a.node(n).name == b.node(n).name);
    CHECK(a.adjacent(n).size() == b.adjacent(n).size());
  }
}

TEST_CASE("fail_links semantics") {
  Topology topo = parse(kTriangle);

  SUBCASE("empty set is a no-op") {
    const auto before = topo.operational_links();
    CHECK(topo.fail_links({}).empty());
    CHECK(topo.operational_links() == before);
    CHECK(topo.version() == 0);
  }

  SUBCASE("failing the direct link reroutes via the detour") {
    // 0-2 direct costs 300; after failing it the best path is 0-1-2.
    topo.fail_links({2});
    const auto paths = k_shortest_paths(topo, 0, 2, 1);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].links == std::vector<LinkId>{0, 1});
    CHECK(paths[0].length_km == 300);
  }

  SUBCASE("operational set shrinks by exactly the failed set") {
    topo.fail_links({0, 2});
    CHECK(topo.operational_links() == std::vector<LinkId>{1});
    CHECK(topo.link(0).length_km == 100);  // rest of the state untouched
  }

  SUBCASE("double failure and unknown ids are rejected") {
    topo.fail_links({2});
    CHECK_THROWS_AS(topo.fail_links({2}), ValidationError);
    CHECK_THROWS_AS(topo.fail_links({17}), ValidationError);
    CHECK_THROWS_AS(topo.fail_links({0, 0}), ValidationError);
    // failed atomically: link 0 is still up after the duplicate-id error
    CHECK(topo.link(0).operational);
  }
}

TEST_CASE("sample_failures") {
  Topology topo = parse(kTriangle);
  Rng rng(42);

  SUBCASE("zero draws") { CHECK(topo.sample_failures(0, rng).empty()); }

  SUBCASE("exhaustive draw hits every link once") {
    auto ids = topo.sample_failures(3, rng);
    std::sort(ids.begin(), ids.end());
    CHECK(ids == std::vector<LinkId>{0, 1, 2});
  }

  SUBCASE("deterministic per seed") {
    Rng r1(7), r2(7);
    CHECK(topo.sample_failures(2, r1) == topo.sample_failures(2, r2));
  }

  SUBCASE("cannot draw more than the operational set") {
    CHECK_THROWS_AS(topo.sample_failures(4, rng), ValidationError);
    topo.fail_links({0});
    CHECK_THROWS_AS(topo.sample_failures(3, rng), ValidationError);
  }
}

TEST_CASE("bundled germany50 file") {
  const Topology topo = load_topology_file(std::string(EONSIM_DATA_DIR) +
                                           "/germany50.topo");
  CHECK(topo.node_count() == 50);
  CHECK(topo.link_count() == 88);
  CHECK(topo.connected_over_operational());
  for (const LinkState& l : topo.links()) {
    CHECK(l.length_km > 0);
    CHECK(l.length_km < 400);  // neighboring-city spans
  }
  // determinism across repeated sampling on the big instance
  Rng r1(123), r2(123);
  CHECK(topo.sample_failures(4, r1) == topo.sample_failures(4, r2));
}

TEST_CASE("path search never crosses failed links") {
  Rng rng(999);
  for (int trial = 0; trial < 50; ++trial) {
    Topology topo = oracles::random_connected_graph(rng, 8, false);
    const int kills = static_cast<int>(rng.bounded(topo.link_count() + 1));
    Rng sampler(rng.next());
    const auto dead = topo.sample_failures(kills, sampler);
    topo.fail_links(dead);
    for (NodeId s = 0; s < topo.node_count(); ++s) {
      for (NodeId d = 0; d < topo.node_count(); ++d) {
        if (s == d) continue;
        for (const CandidatePath& p : k_shortest_paths(topo, s, d, 3)) {
          for (LinkId l : p.links) {
            CHECK(topo.link(l).operational);
          }
        }
      }
    }
  }
}

TEST_SUITE_END();
