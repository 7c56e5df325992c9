#include <array>
#include <string>

#include "neighbors_impl.hpp"

namespace mdvec {

NeighborTable build_neighbor_table_reference(const ParticleSystem& system,
                                             const CellGrid& grid,
                                             double list_cutoff) {
  detail::validate_table_inputs(system, grid, list_cutoff);
  const double cutoff2 = list_cutoff * list_cutoff;
  const std::size_t n = system.n_sites;
  const OrthorhombicBox& box = system.box;
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;

  std::vector<std::int32_t> packed;
  std::vector<std::uint32_t> counts(n), nv8(n), nv16(n);
  std::vector<std::size_t> offsets(n);
  std::array<std::int32_t, 27> cells{};
  std::vector<std::int32_t> found;
  found.reserve(kMaxNeighbors);

  for (std::size_t i = 0; i < n; ++i) {
    found.clear();
    const double xi = system.x[i], yi = system.y[i], zi = system.z[i];
    int nc = detail::stencil_cells(grid, grid.cell_of_site[i], cells);
    for (int c = 0; c < nc; ++c) {
      for (std::int32_t j : grid.sites_in_cell[cells[c]]) {
        if (j <= static_cast<std::int32_t>(i)) continue;
        double dx = pbc::wrap1(xi - system.x[j], box.lx, ix, hx);
        double dy = pbc::wrap1(yi - system.y[j], box.ly, iy, hy);
        double dz = pbc::wrap1(zi - system.z[j], box.lz, iz, hz);
        if (pbc::dist2(dx, dy, dz) <= cutoff2) found.push_back(j);
      }
    }
    if (found.size() > kMaxNeighbors) {
      throw CapacityError("neighbor table: site " + std::to_string(i) +
                          " exceeds the per-site neighbor capacity");
    }
    counts[i] = static_cast<std::uint32_t>(found.size());
    nv8[i] = static_cast<std::uint32_t>(pad_count(found.size(), 8));
    nv16[i] = static_cast<std::uint32_t>(pad_count(found.size(), 16));
    offsets[i] = packed.size();
    std::int32_t sentinel = found.empty() ? 0 : found.back();
    packed.insert(packed.end(), found.begin(), found.end());
    packed.resize(offsets[i] + nv16[i], sentinel);
  }
  return detail::finalize_table(n, list_cutoff, packed, std::move(counts),
                                std::move(offsets), std::move(nv8), std::move(nv16));
}

}  // namespace mdvec
