#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eonsim/spectrum.hpp"
#include "eonsim/topology.hpp"
#include "eonsim/traffic.hpp"

namespace eonsim {

struct ModulationFormat {
  std::string name;
  int se_per_pol = 0;  // bits/s/Hz per polarization
  static constexpr int kPolarizations = 2;

  bool operator==(const ModulationFormat&) const = default;
};

// The three dual-polarization formats used throughout, ordered by
// increasing spectral efficiency.
const std::vector<ModulationFormat>& default_formats();

// Maximum optical transmission reach in km per (bit rate, format).
// Reach shrinks as either the bit rate or the format order grows.
class ReachTable {
 public:
  ReachTable() = default;
  ReachTable(std::vector<ModulationFormat> formats,
             std::map<int, std::vector<double>> reach_km);

  // Built-in reach values for 100/200/400 Gbps over the default formats.
  static ReachTable defaults();

  const std::vector<ModulationFormat>& formats() const { return formats_; }
  const std::map<int, std::vector<double>>& rows() const { return reach_km_; }
  bool has_bit_rate(int bit_rate_gbps) const;
  double reach_km(int bit_rate_gbps, int format_index) const;

 private:
  std::vector<ModulationFormat> formats_;
  std::map<int, std::vector<double>> reach_km_;  // bit rate -> per-format reach
};

struct CandidatePath {
  std::vector<LinkId> links;  // ordered along the path
  std::vector<NodeId> nodes;  // nodes.size() == links.size() + 1
  double length_km = 0.0;

  int hop_count() const { return static_cast<int>(links.size()); }
};

// Total order used to rank paths: length, then hop count, then the link-id
// sequence. Returns true when a precedes b.
bool path_key_less(const CandidatePath& a, const CandidatePath& b);

// Up to k loop-free paths from src to dst over operational links, sorted
// by path_key_less. Returns an empty list when no path exists.
std::vector<CandidatePath> k_shortest_paths(const Topology& topo, NodeId src,
                                            NodeId dst, int k);

// Highest-spectral-efficiency format whose reach covers length_km, or
// nullopt when even the most robust format falls short. The bit rate must
// be a row of the table.
std::optional<int> select_modulation(const ReachTable& table, int bit_rate_gbps,
                                     double length_km);

// Slots needed to carry bit_rate_gbps with the given format:
// ceil(rate / (slot_width * polarizations * se)) data slots plus the guard.
int slots_required(int bit_rate_gbps, const ModulationFormat& format,
                   double slot_width_ghz = 12.5, int guard_slots = 1);

// A provisioned lightpath.
struct Allocation {
  ServiceId service_id = kNoService;
  std::vector<LinkId> links;
  int format_index = -1;
  SlotBlock block;
  double path_length_km = 0.0;
};

struct RsaConfig {
  int k = 5;
  double slot_width_ghz = 12.5;
  int guard_slots = 1;
  ReachTable reach = ReachTable::defaults();
};

// Memo of k-shortest-path queries against one operational-link set. When
// the topology's operational set changes the cache refuses to answer and
// must be rebound by its owner.
class KspCache {
 public:
  KspCache() = default;
  KspCache(const Topology& topo, int k) { rebind(topo, k); }

  // Clears the memo and adopts the topology's current operational set.
  void rebind(const Topology& topo, int k);

  // True when the cache was bound against the same operational-link set.
  bool matches(const Topology& topo) const;

  const std::vector<CandidatePath>& paths(const Topology& topo, NodeId src,
                                          NodeId dst);

  // Read-only lookup; nullptr when the pair has not been computed.
  const std::vector<CandidatePath>* try_paths(NodeId src, NodeId dst) const;

  // Computes every ordered pair up front; afterwards lookups can go
  // through try_paths with no mutation (safe to share across threads).
  void prebuild_all_pairs(const Topology& topo);

  std::uint64_t version() const { return version_; }
  int k() const { return k_; }

  static std::uint64_t operational_fingerprint(const Topology& topo);

 private:
  std::uint64_t key(NodeId src, NodeId dst) const {
    return static_cast<std::uint64_t>(src) * node_count_ +
           static_cast<std::uint64_t>(dst);
  }

  std::uint64_t version_ = 0;
  std::uint64_t fingerprint_ = 0;
  int k_ = 0;
  int node_count_ = 0;
  std::unordered_map<std::uint64_t, std::vector<CandidatePath>> memo_;
};

// KSP -> modulation selection -> first-fit, in strict path order; the
// first spectrally feasible candidate wins. nullopt means blocked. When a
// cache is supplied it must match the topology version.
std::optional<Allocation> provision(Topology& topo, const ServiceRequest& request,
                                    const RsaConfig& cfg,
                                    KspCache* cache = nullptr);

// Same walk over an externally supplied candidate list.
std::optional<Allocation> provision_on_paths(Topology& topo,
                                             const ServiceRequest& request,
                                             const RsaConfig& cfg,
                                             const std::vector<CandidatePath>& paths);

}  // namespace eonsim
