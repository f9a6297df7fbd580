#include "eonsim/spectrum.hpp"

#include <string>

#include "eonsim/errors.hpp"
#include "eonsim/topology.hpp"

namespace eonsim {

std::string to_bit_string(const SpectrumGrid& grid) {
  std::string s(grid.slot_count(), '.');
  for (int i = 0; i < grid.slot_count(); ++i) {
    if (grid.occupied(i)) s[i] = '#';
  }
  return s;
}

namespace spectrum {

std::optional<SlotBlock> first_fit(std::span<LinkState* const> path_links,
                                   int width) {
  if (path_links.empty() || width <= 0) {
    throw ContractViolation("first_fit: empty path or non-positive width");
  }
  const int slot_count = path_links.front()->grid.slot_count();
  for (const LinkState* link : path_links) {
    if (!link->operational) {
      throw ContractViolation("first_fit: path contains failed link " +
                              std::to_string(link->id));
    }
    if (link->grid.slot_count() != slot_count) {
      throw ContractViolation("first_fit: mixed grid sizes on path");
    }
  }
  if (width > slot_count) {
    throw ContractViolation("first_fit: width exceeds grid size");
  }

  // Scan the combined occupancy once, tracking the current free run.
  int run = 0;
  for (int s = 0; s < slot_count; ++s) {
    bool busy = false;
    for (const LinkState* link : path_links) {
      if (link->grid.occupied(s)) {
        busy = true;
        break;
      }
    }
    run = busy ? 0 : run + 1;
    if (run == width) {
      return SlotBlock{s - width + 1, width};
    }
  }
  return std::nullopt;
}

void allocate(std::span<LinkState* const> path_links, const SlotBlock& block,
              ServiceId service_id) {
  if (block.width <= 0) {
    throw ContractViolation("allocate: non-positive block width");
  }
  for (const LinkState* link : path_links) {
    if (block.start < 0 || block.end() > link->grid.slot_count()) {
      throw ContractViolation("allocate: block outside grid on link " +
                              std::to_string(link->id));
    }
    if (!link->grid.block_free(block)) {
      // Checked before any marking, so a conflict never leaves a
      // half-written allocation behind.
      throw ContractViolation("allocate: slot overlap on link " +
                              std::to_string(link->id));
    }
  }
  for (LinkState* link : path_links) {
    for (int s = block.start; s < block.end(); ++s) {
      link->grid.set_owner(s, service_id);
    }
  }
}

std::size_t release(std::span<LinkState* const> links, ServiceId service_id) {
  std::size_t freed = 0;
  for (LinkState* link : links) {
    for (int s = 0; s < link->grid.slot_count(); ++s) {
      if (link->grid.owner(s) == service_id) {
        link->grid.set_owner(s, kNoService);
        ++freed;
      }
    }
  }
  return freed;
}

std::size_t release(Topology& topo, ServiceId service_id) {
  std::vector<LinkState*> all;
  all.reserve(topo.links().size());
  for (LinkState& l : topo.links()) all.push_back(&l);
  return release(all, service_id);
}

}  // namespace spectrum
}  // namespace eonsim
