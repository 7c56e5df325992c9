#include "mdvec/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "neighbors_impl.hpp"

namespace mdvec {

CellGrid build_cell_grid(const ParticleSystem& system, double list_cutoff) {
  system.validate();
  if (!(list_cutoff > 0) || !std::isfinite(list_cutoff)) {
    throw ContractViolation("build_cell_grid: cutoff must be positive");
  }
  if (list_cutoff > 0.5 * system.box.min_edge()) {
    throw ContractViolation("build_cell_grid: cutoff exceeds half the smallest box edge");
  }
  CellGrid g;
  g.ncx = std::max(1, static_cast<int>(system.box.lx / list_cutoff));
  g.ncy = std::max(1, static_cast<int>(system.box.ly / list_cutoff));
  g.ncz = std::max(1, static_cast<int>(system.box.lz / list_cutoff));
  g.edge_x = system.box.lx / g.ncx;
  g.edge_y = system.box.ly / g.ncy;
  g.edge_z = system.box.lz / g.ncz;
  g.cell_of_site.resize(system.n_sites);
  g.sites_in_cell.assign(g.n_cells(), {});
  for (std::size_t i = 0; i < system.n_sites; ++i) {
    int cx = std::min(g.ncx - 1, static_cast<int>(system.x[i] / g.edge_x));
    int cy = std::min(g.ncy - 1, static_cast<int>(system.y[i] / g.edge_y));
    int cz = std::min(g.ncz - 1, static_cast<int>(system.z[i] / g.edge_z));
    std::int32_t c = (cx * g.ncy + cy) * g.ncz + cz;
    g.cell_of_site[i] = c;
    g.sites_in_cell[c].push_back(static_cast<std::int32_t>(i));
  }
  return g;
}

std::vector<std::pair<std::int32_t, std::int32_t>> brute_force_pairs(
    const ParticleSystem& system, double cutoff) {
  system.validate();
  if (!(cutoff > 0) || cutoff > 0.5 * system.box.min_edge()) {
    throw ContractViolation("brute_force_pairs: invalid cutoff");
  }
  const double cutoff2 = cutoff * cutoff;
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  const auto n = static_cast<std::int32_t>(system.n_sites);
  for (std::int32_t i = 0; i < n; ++i) {
    for (std::int32_t j = i + 1; j < n; ++j) {
      double dx = system.x[i] - system.x[j];
      double dy = system.y[i] - system.y[j];
      double dz = system.z[i] - system.z[j];
      minimum_image_scalar(dx, dy, dz, system.box);
      if (pbc::dist2(dx, dy, dz) <= cutoff2) pairs.emplace_back(i, j);
    }
  }
  return pairs;  // already lexicographically sorted by construction
}

std::vector<std::pair<std::int32_t, std::int32_t>> table_pairs(
    const NeighborTable& table) {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::size_t i = 0; i < table.n_sites; ++i) {
    const std::int32_t* idx = table.site_indices(i);
    for (std::uint32_t k = 0; k < table.nnvlst[i]; ++k) {
      auto a = static_cast<std::int32_t>(i);
      auto b = idx[k];
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

namespace detail {

void validate_table_inputs(const ParticleSystem& system, const CellGrid& grid,
                           double list_cutoff) {
  if (grid.cell_of_site.size() != system.n_sites) {
    throw ContractViolation("neighbor table: grid does not match the system");
  }
  if (!(list_cutoff > 0) || list_cutoff > 0.5 * system.box.min_edge()) {
    throw ContractViolation("neighbor table: invalid list cutoff");
  }
  if (list_cutoff > std::min(grid.edge_x, std::min(grid.edge_y, grid.edge_z)) +
                        1e-12) {
    throw ContractViolation("neighbor table: cell edge smaller than the list cutoff");
  }
}

NeighborTable finalize_table(std::size_t n_sites, double cutoff,
                             const std::vector<std::int32_t>& packed,
                             std::vector<std::uint32_t>&& counts,
                             std::vector<std::size_t>&& offsets,
                             std::vector<std::uint32_t>&& nv8,
                             std::vector<std::uint32_t>&& nv16) {
  NeighborTable t;
  t.cutoff = cutoff;
  t.n_sites = n_sites;
  t.nnvlst = std::move(counts);
  t.nvloop8 = std::move(nv8);
  t.nvloop16 = std::move(nv16);
  t.offset = std::move(offsets);
  t.indices = PaddedIndexArray(packed.size());
  t.scale = PaddedRealArray(packed.size());
  std::copy(packed.begin(), packed.end(), t.indices.data());
  for (std::size_t i = 0; i < n_sites; ++i) {
    double* s = t.scale.data() + t.offset[i];
    for (std::uint32_t k = 0; k < t.nvloop16[i]; ++k) {
      s[k] = k < t.nnvlst[i] ? 1.0 : 0.0;
    }
  }
  return t;
}

}  // namespace detail

}  // namespace mdvec
