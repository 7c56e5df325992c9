#ifndef MDVEC_NEIGHBORS_IMPL_HPP
#define MDVEC_NEIGHBORS_IMPL_HPP

#include <algorithm>
#include <array>

#include "mdvec/neighbors.hpp"

namespace mdvec::detail {

// Deduped 27-cell stencil with periodic wrapping; small grids would
// otherwise visit the same cell several times.
inline int stencil_cells(const CellGrid& grid, std::int32_t cell,
                         std::array<std::int32_t, 27>& out) {
  const int ncx = grid.ncx, ncy = grid.ncy, ncz = grid.ncz;
  const int cz = cell % ncz;
  const int cy = (cell / ncz) % ncy;
  const int cx = cell / (ncz * ncy);
  int n = 0;
  for (int ox = -1; ox <= 1; ++ox) {
    for (int oy = -1; oy <= 1; ++oy) {
      for (int oz = -1; oz <= 1; ++oz) {
        int wx = (cx + ox + ncx) % ncx;
        int wy = (cy + oy + ncy) % ncy;
        int wz = (cz + oz + ncz) % ncz;
        out[n++] = (wx * ncy + wy) * ncz + wz;
      }
    }
  }
  std::sort(out.begin(), out.begin() + n);
  return static_cast<int>(std::unique(out.begin(), out.begin() + n) - out.begin());
}

void validate_table_inputs(const ParticleSystem& system, const CellGrid& grid,
                           double list_cutoff);

// Copies the per-site packed segments into the aligned table storage and
// derives the scale factors.
NeighborTable finalize_table(std::size_t n_sites, double cutoff,
                             const std::vector<std::int32_t>& packed,
                             std::vector<std::uint32_t>&& counts,
                             std::vector<std::size_t>&& offsets,
                             std::vector<std::uint32_t>&& nv8,
                             std::vector<std::uint32_t>&& nv16);

}  // namespace mdvec::detail

#endif
