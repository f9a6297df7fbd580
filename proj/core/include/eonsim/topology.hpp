#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eonsim/rng.hpp"
#include "eonsim/spectrum.hpp"

namespace eonsim {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

struct NodeInfo {
  NodeId id = 0;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
};

// An undirected fiber link with one shared spectrum grid.
struct LinkState {
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  double length_km = 0.0;
  bool operational = true;
  SpectrumGrid grid;

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

struct Adjacency {
  NodeId neighbor;
  LinkId link;
};

class Topology {
 public:
  Topology() = default;
  Topology(std::vector<NodeInfo> nodes, std::vector<LinkState> links);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }

  const NodeInfo& node(NodeId n) const { return nodes_[n]; }
  const LinkState& link(LinkId l) const { return links_[l]; }
  LinkState& link(LinkId l) { return links_[l]; }
  const std::vector<LinkState>& links() const { return links_; }
  std::vector<LinkState>& links() { return links_; }

  // Neighbors of n, ordered by link id.
  const std::vector<Adjacency>& adjacent(NodeId n) const { return adj_[n]; }

  int operational_link_count() const;
  std::vector<LinkId> operational_links() const;

  // Bumped whenever the set of operational links changes; path caches key
  // off this.
  std::uint64_t version() const { return version_; }

  // Marks the listed links failed. All ids must name currently
  // operational links; on error no link is touched. Returns the ids
  // actually failed.
  std::vector<LinkId> fail_links(const std::vector<LinkId>& link_ids);

  // Draws `count` distinct operational link ids uniformly without
  // replacement. Deterministic given the rng state.
  std::vector<LinkId> sample_failures(int count, Rng& rng) const;

  bool connected_over_operational() const;

  // Sizes every link grid; used once at run setup.
  void reset_grids(int slot_count);

 private:
  std::vector<NodeInfo> nodes_;
  std::vector<LinkState> links_;
  std::vector<std::vector<Adjacency>> adj_;
  std::uint64_t version_ = 0;
};

// Great-circle distance (haversine, Earth radius 6371 km).
double great_circle_km(double lat1, double lon1, double lat2, double lon2);

// Parses the topology text format:
//
//   # comment
//   nodes:
//   <id> <name> <latitude> <longitude>
//   links:
//   <id> <nodeA> <nodeB> [length_km]
//
// Node ids must be dense 0..N-1, link ids dense 0..L-1. A link without an
// explicit length gets the great-circle distance between its endpoints.
// All links start operational with empty grids.
Topology load_topology(std::istream& in);
Topology load_topology_file(const std::string& path);

}  // namespace eonsim
