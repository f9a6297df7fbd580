#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eonsim {

using ServiceId = std::int64_t;
inline constexpr ServiceId kNoService = -1;

// A contiguous run of frequency slots. width counts data slots plus the
// guard band, so a valid block always has width >= 1.
struct SlotBlock {
  int start = 0;
  int width = 0;

  int end() const { return start + width; }
  bool operator==(const SlotBlock&) const = default;
};

// Per-link slot occupancy. A slot is occupied iff it has an owner, so the
// occupied/owner consistency invariant holds by construction.
class SpectrumGrid {
 public:
  SpectrumGrid() = default;
  explicit SpectrumGrid(int slot_count) : owner_(slot_count, kNoService) {}

  int slot_count() const { return static_cast<int>(owner_.size()); }
  bool occupied(int slot) const { return owner_[slot] != kNoService; }
  ServiceId owner(int slot) const { return owner_[slot]; }
  void set_owner(int slot, ServiceId id) { owner_[slot] = id; }

  bool block_free(const SlotBlock& block) const {
    if (block.start < 0 || block.end() > slot_count()) return false;
    for (int s = block.start; s < block.end(); ++s) {
      if (occupied(s)) return false;
    }
    return true;
  }

  int occupied_count() const {
    int n = 0;
    for (ServiceId id : owner_) n += (id != kNoService);
    return n;
  }

  bool empty() const { return occupied_count() == 0; }

  bool operator==(const SpectrumGrid&) const = default;

 private:
  std::vector<ServiceId> owner_;
};

// Occupancy snapshot for the debug log, '.' free / '#' occupied.
std::string to_bit_string(const SpectrumGrid& grid);

struct LinkState;  // defined in topology.hpp
class Topology;

namespace spectrum {

// Smallest start index such that [start, start+width) is free on every
// link of the path; nullopt when no such block exists. Pure query.
// Every link must be operational and width must fit the grid.
std::optional<SlotBlock> first_fit(std::span<LinkState* const> path_links,
                                   int width);

// Marks the block occupied for service_id on every path link. Verifies
// feasibility up front so a conflicting request leaves all grids
// untouched.
void allocate(std::span<LinkState* const> path_links, const SlotBlock& block,
              ServiceId service_id);

// Frees every slot owned by service_id across the given links. Returns
// the number of slots freed; unknown ids free nothing.
std::size_t release(std::span<LinkState* const> links, ServiceId service_id);

// Same, sweeping every link of the topology.
std::size_t release(Topology& topo, ServiceId service_id);

}  // namespace spectrum
}  // namespace eonsim
