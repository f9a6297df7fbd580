#include "eonsim/rsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "eonsim/errors.hpp"

namespace eonsim {

const std::vector<ModulationFormat>& default_formats() {
  static const std::vector<ModulationFormat> formats = {
      {"PM-QPSK", 2}, {"PM-16QAM", 3}, {"PM-64QAM", 6}};
  return formats;
}

ReachTable::ReachTable(std::vector<ModulationFormat> formats,
                       std::map<int, std::vector<double>> reach_km)
    : formats_(std::move(formats)), reach_km_(std::move(reach_km)) {
  if (formats_.empty()) {
    throw ValidationError("reach table: no modulation formats");
  }
  for (std::size_t i = 1; i < formats_.size(); ++i) {
    if (formats_[i].se_per_pol <= formats_[i - 1].se_per_pol) {
      throw ValidationError(
          "reach table: formats must be ordered by increasing spectral "
          "efficiency");
    }
  }
  const std::vector<double>* prev_row = nullptr;
  for (const auto& [rate, row] : reach_km_) {
    if (rate <= 0) throw ValidationError("reach table: non-positive bit rate");
    if (row.size() != formats_.size()) {
      throw ValidationError("reach table: row size does not match format list");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] <= 0.0) {
        throw ValidationError("reach table: non-positive reach");
      }
      if (i > 0 && row[i] >= row[i - 1]) {
        throw ValidationError(
            "reach table: reach must decrease with format order");
      }
      if (prev_row && row[i] >= (*prev_row)[i]) {
        throw ValidationError(
            "reach table: reach must decrease with bit rate");
      }
    }
    prev_row = &row;
  }
}

ReachTable ReachTable::defaults() {
  return ReachTable(default_formats(), {{100, {5190.0, 2324.0, 876.0}},
                                        {200, {2595.0, 1162.0, 438.0}},
                                        {400, {1298.0, 581.0, 219.0}}});
}

bool ReachTable::has_bit_rate(int bit_rate_gbps) const {
  return reach_km_.contains(bit_rate_gbps);
}

double ReachTable::reach_km(int bit_rate_gbps, int format_index) const {
  const auto it = reach_km_.find(bit_rate_gbps);
  if (it == reach_km_.end()) {
    throw ValidationError("reach table: unknown bit rate " +
                          std::to_string(bit_rate_gbps));
  }
  return it->second.at(format_index);
}

bool path_key_less(const CandidatePath& a, const CandidatePath& b) {
  if (a.length_km != b.length_km) return a.length_km < b.length_km;
  if (a.links.size() != b.links.size()) return a.links.size() < b.links.size();
  return std::lexicographical_compare(a.links.begin(), a.links.end(),
                                      b.links.begin(), b.links.end());
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DijkstraState {
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<NodeId> pred_node;
  std::vector<LinkId> pred_link;
  std::vector<char> settled;
};

std::vector<LinkId> chain_links(const DijkstraState& st, NodeId src, NodeId v) {
  std::vector<LinkId> links;
  while (v != src) {
    links.push_back(st.pred_link[v]);
    v = st.pred_node[v];
  }
  std::reverse(links.begin(), links.end());
  return links;
}

// Dijkstra over operational, non-banned links minimizing
// (length, hops, link-id sequence). The lexicographic component only
// matters on exact (length, hops) ties, where both competing sequences
// have equal length, so comparing reconstructed chains is well defined.
std::optional<CandidatePath> shortest_path(const Topology& topo, NodeId src,
                                           NodeId dst,
                                           const std::vector<char>& banned_node,
                                           const std::vector<char>& banned_link) {
  const int n = topo.node_count();
  DijkstraState st;
  st.dist.assign(n, kInf);
  st.hops.assign(n, 0);
  st.pred_node.assign(n, -1);
  st.pred_link.assign(n, -1);
  st.settled.assign(n, 0);

  using Entry = std::tuple<double, int, NodeId>;  // dist, hops, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  st.dist[src] = 0.0;
  pq.push({0.0, 0, src});

  while (!pq.empty()) {
    const auto [d, h, u] = pq.top();
    pq.pop();
    if (st.settled[u]) continue;
    st.settled[u] = 1;
    if (u == dst) break;
    for (const Adjacency& adj : topo.adjacent(u)) {
      const LinkState& link = topo.link(adj.link);
      const NodeId v = adj.neighbor;
      if (!link.operational || banned_link[adj.link] || banned_node[v] ||
          st.settled[v]) {
        continue;
      }
      const double nd = st.dist[u] + link.length_km;
      const int nh = st.hops[u] + 1;
      bool better;
      if (nd != st.dist[v]) {
        better = nd < st.dist[v];
      } else if (nh != st.hops[v]) {
        better = nh < st.hops[v];
      } else {
        auto cand = chain_links(st, src, u);
        cand.push_back(adj.link);
        const auto incumbent = chain_links(st, src, v);
        better = std::lexicographical_compare(cand.begin(), cand.end(),
                                              incumbent.begin(), incumbent.end());
      }
      if (better) {
        const bool push = nd < st.dist[v] || nh < st.hops[v];
        st.dist[v] = nd;
        st.hops[v] = nh;
        st.pred_node[v] = u;
        st.pred_link[v] = adj.link;
        // A pure tie-break improvement reuses the queued entry; the queue
        // key (dist, hops) is unchanged.
        if (push) pq.push({nd, nh, v});
      }
    }
  }

  if (!st.settled[dst] || st.dist[dst] == kInf) return std::nullopt;

  CandidatePath path;
  path.links = chain_links(st, src, dst);
  path.nodes.push_back(src);
  NodeId cur = src;
  for (LinkId l : path.links) {
    cur = topo.link(l).other(cur);
    path.nodes.push_back(cur);
  }
  // Canonical length: left-to-right sum over member links, so candidates
  // from different spur splits compare identically.
  path.length_km = 0.0;
  for (LinkId l : path.links) path.length_km += topo.link(l).length_km;
  return path;
}

}  // namespace

std::vector<CandidatePath> k_shortest_paths(const Topology& topo, NodeId src,
                                            NodeId dst, int k) {
  if (src == dst) throw ContractViolation("k_shortest_paths: src == dst");
  if (src < 0 || src >= topo.node_count() || dst < 0 || dst >= topo.node_count()) {
    throw ContractViolation("k_shortest_paths: endpoint out of range");
  }
  if (k <= 0) throw ContractViolation("k_shortest_paths: k must be positive");

  std::vector<char> banned_node(topo.node_count(), 0);
  std::vector<char> banned_link(topo.link_count(), 0);

  std::vector<CandidatePath> found;
  auto first = shortest_path(topo, src, dst, banned_node, banned_link);
  if (!first) return found;
  found.push_back(std::move(*first));

  const auto by_key = [](const CandidatePath& a, const CandidatePath& b) {
    return path_key_less(a, b);
  };
  std::set<CandidatePath, decltype(by_key)> candidates(by_key);

  // Yen's algorithm: spur off every prefix of the last accepted path.
  while (static_cast<int>(found.size()) < k) {
    const CandidatePath prev = found.back();
    for (std::size_t j = 0; j < prev.links.size(); ++j) {
      const NodeId spur_node = prev.nodes[j];

      std::fill(banned_node.begin(), banned_node.end(), 0);
      std::fill(banned_link.begin(), banned_link.end(), 0);
      for (const CandidatePath& p : found) {
        if (p.links.size() > j &&
            std::equal(p.links.begin(), p.links.begin() + j, prev.links.begin())) {
          banned_link[p.links[j]] = 1;
        }
      }
      for (std::size_t i = 0; i < j; ++i) banned_node[prev.nodes[i]] = 1;

      auto spur = shortest_path(topo, spur_node, dst, banned_node, banned_link);
      if (!spur) continue;

      CandidatePath total;
      total.links.assign(prev.links.begin(), prev.links.begin() + j);
      total.links.insert(total.links.end(), spur->links.begin(), spur->links.end());
      total.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + j);
      total.nodes.insert(total.nodes.end(), spur->nodes.begin(), spur->nodes.end());
      total.length_km = 0.0;
      for (LinkId l : total.links) total.length_km += topo.link(l).length_km;

      const bool already_accepted =
          std::any_of(found.begin(), found.end(), [&](const CandidatePath& p) {
            return p.links == total.links;
          });
      if (!already_accepted) candidates.insert(std::move(total));
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return found;
}

std::optional<int> select_modulation(const ReachTable& table, int bit_rate_gbps,
                                     double length_km) {
  if (!table.has_bit_rate(bit_rate_gbps)) {
    throw ValidationError("select_modulation: unknown bit rate " +
                          std::to_string(bit_rate_gbps));
  }
  for (int i = static_cast<int>(table.formats().size()) - 1; i >= 0; --i) {
    if (table.reach_km(bit_rate_gbps, i) >= length_km) return i;
  }
  return std::nullopt;
}

int slots_required(int bit_rate_gbps, const ModulationFormat& format,
                   double slot_width_ghz, int guard_slots) {
  if (bit_rate_gbps <= 0 || slot_width_ghz <= 0.0 || format.se_per_pol <= 0 ||
      guard_slots < 0) {
    throw ValidationError("slots_required: non-positive input");
  }
  const double capacity_per_slot =
      slot_width_ghz * ModulationFormat::kPolarizations * format.se_per_pol;
  const int data_slots = std::max(
      1, static_cast<int>(std::ceil(bit_rate_gbps / capacity_per_slot - 1e-9)));
  return data_slots + guard_slots;
}

void KspCache::rebind(const Topology& topo, int k) {
  memo_.clear();
  version_ = topo.version();
  fingerprint_ = operational_fingerprint(topo);
  k_ = k;
  node_count_ = topo.node_count();
}

bool KspCache::matches(const Topology& topo) const {
  return k_ > 0 && version_ == topo.version() &&
         fingerprint_ == operational_fingerprint(topo) &&
         node_count_ == topo.node_count();
}

std::uint64_t KspCache::operational_fingerprint(const Topology& topo) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (const LinkState& l : topo.links()) {
    h ^= static_cast<std::uint64_t>(l.operational ? l.id + 1 : 0);
    h *= 1099511628211ull;
  }
  return h;
}

const std::vector<CandidatePath>& KspCache::paths(const Topology& topo,
                                                  NodeId src, NodeId dst) {
  if (topo.version() != version_) {
    throw ContractViolation("KspCache: topology changed since cache was bound");
  }
  auto it = memo_.find(key(src, dst));
  if (it == memo_.end()) {
    it = memo_.emplace(key(src, dst), k_shortest_paths(topo, src, dst, k_)).first;
  }
  return it->second;
}

const std::vector<CandidatePath>* KspCache::try_paths(NodeId src, NodeId dst) const {
  const auto it = memo_.find(key(src, dst));
  return it == memo_.end() ? nullptr : &it->second;
}

void KspCache::prebuild_all_pairs(const Topology& topo) {
  for (NodeId s = 0; s < topo.node_count(); ++s) {
    for (NodeId d = 0; d < topo.node_count(); ++d) {
      if (s != d) paths(topo, s, d);
    }
  }
}

std::optional<Allocation> provision_on_paths(Topology& topo,
                                             const ServiceRequest& request,
                                             const RsaConfig& cfg,
                                             const std::vector<CandidatePath>& paths) {
  std::vector<LinkState*> links;
  for (const CandidatePath& path : paths) {
    const auto format = select_modulation(cfg.reach, request.bit_rate_gbps,
                                          path.length_km);
    if (!format) continue;
    const int width =
        slots_required(request.bit_rate_gbps, cfg.reach.formats()[*format],
                       cfg.slot_width_ghz, cfg.guard_slots);
    links.clear();
    for (LinkId id : path.links) links.push_back(&topo.link(id));
    if (width > links.front()->grid.slot_count()) continue;
    if (const auto block = spectrum::first_fit(links, width)) {
      spectrum::allocate(links, *block, request.id);
      return Allocation{request.id, path.links, *format, *block, path.length_km};
    }
  }
  return std::nullopt;
}

std::optional<Allocation> provision(Topology& topo, const ServiceRequest& request,
                                    const RsaConfig& cfg, KspCache* cache) {
  if (cache != nullptr) {
    return provision_on_paths(topo, request, cfg,
                              cache->paths(topo, request.src, request.dst));
  }
  return provision_on_paths(
      topo, request, cfg, k_shortest_paths(topo, request.src, request.dst, cfg.k));
}

}  // namespace eonsim
