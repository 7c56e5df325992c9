#ifndef MDVEC_NEIGHBORS_HPP
#define MDVEC_NEIGHBORS_HPP

#include <utility>
#include <vector>

#include "mdvec/system.hpp"

namespace mdvec {

struct CellGrid {
  int ncx = 0, ncy = 0, ncz = 0;
  double edge_x = 0, edge_y = 0, edge_z = 0;
  std::vector<std::int32_t> cell_of_site;
  std::vector<std::vector<std::int32_t>> sites_in_cell;

  std::size_t n_cells() const {
    return static_cast<std::size_t>(ncx) * ncy * ncz;
  }
};

// Half neighbor lists: pair (i, j) is stored once, on the lower-index site.
// Each site's segment is padded to its integer loop count; padded slots
// duplicate the last neighbor and carry scale 0.
struct NeighborTable {
  double cutoff = 0;
  std::size_t n_sites = 0;
  std::vector<std::uint32_t> nnvlst;    // real neighbor counts
  std::vector<std::uint32_t> nvloop8;   // real-lane loop counts
  std::vector<std::uint32_t> nvloop16;  // integer-lane loop counts
  std::vector<std::size_t> offset;      // segment starts, multiples of 16
  PaddedIndexArray indices;
  PaddedRealArray scale;                // 1.0 for real slots, 0.0 for padding

  const std::int32_t* site_indices(std::size_t i) const {
    return indices.data() + offset[i];
  }
  const double* site_scale(std::size_t i) const {
    return scale.data() + offset[i];
  }
};

CellGrid build_cell_grid(const ParticleSystem& system, double list_cutoff);

// Masked-selection construction (the vectorized list-cell path).
// extra_pad_slots (a multiple of 16) lengthens every segment's padded tail;
// kernel results must be invariant under it.
NeighborTable build_neighbor_table(const ParticleSystem& system,
                                   const CellGrid& grid, double list_cutoff,
                                   std::size_t extra_pad_slots = 0);

// Branchy per-pair construction, the scalar counterpart used for boost
// measurements. Produces a table identical to build_neighbor_table.
NeighborTable build_neighbor_table_reference(const ParticleSystem& system,
                                             const CellGrid& grid,
                                             double list_cutoff);

// O(N^2) all-pairs oracle; canonical (i < j), lexicographically sorted.
std::vector<std::pair<std::int32_t, std::int32_t>> brute_force_pairs(
    const ParticleSystem& system, double cutoff);

// Pair set of a table in the oracle's canonical form.
std::vector<std::pair<std::int32_t, std::int32_t>> table_pairs(
    const NeighborTable& table);

}  // namespace mdvec

#endif
