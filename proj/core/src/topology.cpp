#include "eonsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <set>
#include <sstream>

#include "eonsim/errors.hpp"

namespace eonsim {

Topology::Topology(std::vector<NodeInfo> nodes, std::vector<LinkState> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  adj_.assign(nodes_.size(), {});
  for (const LinkState& l : links_) {
    adj_[l.a].push_back({l.b, l.id});
    adj_[l.b].push_back({l.a, l.id});
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(),
              [](const Adjacency& x, const Adjacency& y) { return x.link < y.link; });
  }
}

int Topology::operational_link_count() const {
  int n = 0;
  for (const LinkState& l : links_) n += l.operational;
  return n;
}

std::vector<LinkId> Topology::operational_links() const {
  std::vector<LinkId> ids;
  ids.reserve(links_.size());
  for (const LinkState& l : links_) {
    if (l.operational) ids.push_back(l.id);
  }
  return ids;
}

std::vector<LinkId> Topology::fail_links(const std::vector<LinkId>& link_ids) {
  std::set<LinkId> seen;
  for (LinkId id : link_ids) {
    if (id < 0 || id >= link_count()) {
      throw ValidationError("fail_links: unknown link id " + std::to_string(id));
    }
    if (!links_[id].operational) {
      throw ValidationError("fail_links: link " + std::to_string(id) +
                            " is already failed");
    }
    if (!seen.insert(id).second) {
      throw ValidationError("fail_links: duplicate link id " + std::to_string(id));
    }
  }
  for (LinkId id : link_ids) links_[id].operational = false;
  if (!link_ids.empty()) ++version_;
  return link_ids;
}

std::vector<LinkId> Topology::sample_failures(int count, Rng& rng) const {
  std::vector<LinkId> pool = operational_links();
  if (count < 0 || count > static_cast<int>(pool.size())) {
    throw ValidationError("sample_failures: requested " + std::to_string(count) +
                          " of " + std::to_string(pool.size()) +
                          " operational links");
  }
  // Partial Fisher-Yates; the sampled order is kept (it defines the order
  // failed links are examined during disruption detection).
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.bounded(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

bool Topology::connected_over_operational() const {
  if (nodes_.empty()) return true;
  std::vector<char> visited(nodes_.size(), 0);
  std::vector<NodeId> stack{0};
  visited[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const Adjacency& adj : adj_[u]) {
      if (!links_[adj.link].operational || visited[adj.neighbor]) continue;
      visited[adj.neighbor] = 1;
      ++reached;
      stack.push_back(adj.neighbor);
    }
  }
  return reached == node_count();
}

void Topology::reset_grids(int slot_count) {
  for (LinkState& l : links_) l.grid = SpectrumGrid(slot_count);
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * kDeg;
  const double dlon = (lon2 - lon1) * kDeg;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kDeg) * std::cos(lat2 * kDeg) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

namespace {

// Strips a trailing '#' comment and splits into whitespace tokens.
std::vector<std::string> tokenize(const std::string& raw) {
  std::string line = raw;
  if (const auto pos = line.find('#'); pos != std::string::npos) {
    line.erase(pos);
  }
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

int parse_int(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("topology line " + std::to_string(line_no) +
                     ": expected integer, got '" + tok + "'");
  }
}

double parse_double(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("topology line " + std::to_string(line_no) +
                     ": expected number, got '" + tok + "'");
  }
}

}  // namespace

Topology load_topology(std::istream& in) {
  enum class Section { None, Nodes, Links };
  Section section = Section::None;
  std::vector<NodeInfo> nodes;
  struct RawLink {
    LinkId id;
    NodeId a, b;
    double length_km;  // <= 0 means "compute from coordinates"
    int line_no;
  };
  std::vector<RawLink> raw_links;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "nodes:") {
      section = Section::Nodes;
      continue;
    }
    if (tokens[0] == "links:") {
      section = Section::Links;
      continue;
    }
    switch (section) {
      case Section::None:
        throw ParseError("topology line " + std::to_string(line_no) +
                         ": content before a 'nodes:' or 'links:' section");
      case Section::Nodes: {
        if (tokens.size() != 4) {
          throw ParseError("topology line " + std::to_string(line_no) +
                           ": node lines are '<id> <name> <lat> <lon>'");
        }
        NodeInfo n;
        n.id = parse_int(tokens[0], line_no);
        n.name = tokens[1];
        n.latitude = parse_double(tokens[2], line_no);
        n.longitude = parse_double(tokens[3], line_no);
        nodes.push_back(std::move(n));
        break;
      }
      case Section::Links: {
        if (tokens.size() != 3 && tokens.size() != 4) {
          throw ParseError("topology line " + std::to_string(line_no) +
                           ": link lines are '<id> <nodeA> <nodeB> [length_km]'");
        }
        RawLink l;
        l.id = parse_int(tokens[0], line_no);
        l.a = parse_int(tokens[1], line_no);
        l.b = parse_int(tokens[2], line_no);
        l.length_km = tokens.size() == 4 ? parse_double(tokens[3], line_no) : 0.0;
        l.line_no = line_no;
        if (tokens.size() == 4 && l.length_km <= 0.0) {
          throw ValidationError("topology line " + std::to_string(line_no) +
                                ": link length must be positive");
        }
        raw_links.push_back(l);
        break;
      }
    }
  }

  if (nodes.size() < 2) {
    throw ValidationError("topology: need at least 2 nodes, got " +
                          std::to_string(nodes.size()));
  }
  std::vector<char> node_seen(nodes.size(), 0);
  for (const NodeInfo& n : nodes) {
    if (n.id < 0 || n.id >= static_cast<NodeId>(nodes.size()) || node_seen[n.id]) {
      throw ValidationError("topology: node ids must be dense 0.." +
                            std::to_string(nodes.size() - 1) +
                            ", offending id " + std::to_string(n.id));
    }
    node_seen[n.id] = 1;
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeInfo& x, const NodeInfo& y) { return x.id < y.id; });

  std::vector<LinkState> links(raw_links.size());
  std::vector<char> link_seen(raw_links.size(), 0);
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const RawLink& r : raw_links) {
    if (r.id < 0 || r.id >= static_cast<LinkId>(raw_links.size()) || link_seen[r.id]) {
      throw ValidationError("topology line " + std::to_string(r.line_no) +
                            ": link ids must be dense 0.." +
                            std::to_string(raw_links.size() - 1));
    }
    link_seen[r.id] = 1;
    for (NodeId end : {r.a, r.b}) {
      if (end < 0 || end >= static_cast<NodeId>(nodes.size())) {
        throw ValidationError("topology line " + std::to_string(r.line_no) +
                              ": link references unknown node " +
                              std::to_string(end));
      }
    }
    if (r.a == r.b) {
      throw ValidationError("topology line " + std::to_string(r.line_no) +
                            ": link endpoints must be distinct");
    }
    const auto pair = std::minmax(r.a, r.b);
    if (!pairs.insert({pair.first, pair.second}).second) {
      throw ValidationError("topology line " + std::to_string(r.line_no) +
                            ": duplicate link between nodes " +
                            std::to_string(r.a) + " and " + std::to_string(r.b));
    }
    LinkState l;
    l.id = r.id;
    l.a = r.a;
    l.b = r.b;
    l.length_km = r.length_km > 0.0
                      ? r.length_km
                      : great_circle_km(nodes[r.a].latitude, nodes[r.a].longitude,
                                        nodes[r.b].latitude, nodes[r.b].longitude);
    if (l.length_km <= 0.0) {
      throw ValidationError("topology line " + std::to_string(r.line_no) +
                            ": computed link length is not positive");
    }
    links[r.id] = std::move(l);
  }

  Topology topo(std::move(nodes), std::move(links));
  if (!topo.connected_over_operational()) {
    throw ValidationError("topology: graph is not connected");
  }
  return topo;
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open topology file: " + path);
  }
  return load_topology(in);
}

}  // namespace eonsim
