#include <array>
#include <string>

#include "neighbors_impl.hpp"

namespace mdvec {

NeighborTable build_neighbor_table(const ParticleSystem& system,
                                   const CellGrid& grid, double list_cutoff,
                                   std::size_t extra_pad_slots) {
  detail::validate_table_inputs(system, grid, list_cutoff);
  if (extra_pad_slots % 16 != 0) {
    throw ContractViolation("build_neighbor_table: extra padding must be a multiple of 16");
  }
  const double cutoff2 = list_cutoff * list_cutoff;
  const std::size_t n = system.n_sites;

  std::size_t max_bucket = 0;
  for (const auto& b : grid.sites_in_cell) max_bucket = std::max(max_bucket, b.size());
  const std::size_t cap = pad_count(std::max<std::size_t>(27 * max_bucket, 16), 16);

  // Per-site working buffers, allocated once. Real buffers use the integer
  // lane so all parallel arrays share one padded length with the mask.
  PaddedIndexArray cand = PaddedIndexArray::with_capacity(cap);
  PaddedIndexArray kept_idx = PaddedIndexArray::with_capacity(cap);
  PaddedRealArray dxs = PaddedRealArray::with_capacity(cap, 16);
  PaddedRealArray dys = PaddedRealArray::with_capacity(cap, 16);
  PaddedRealArray dzs = PaddedRealArray::with_capacity(cap, 16);
  PaddedRealArray r2 = PaddedRealArray::with_capacity(cap, 16);
  Mask mask(cap);

  std::vector<std::int32_t> packed;
  std::vector<std::uint32_t> counts(n), nv8(n), nv16(n);
  std::vector<std::size_t> offsets(n);
  std::array<std::int32_t, 27> cells{};

  const double* X = system.x.data();
  const double* Y = system.y.data();
  const double* Z = system.z.data();

  for (std::size_t i = 0; i < n; ++i) {
    // selection: collect half-list candidates from the 27-cell sweep
    std::size_t ncand = 0;
    int nc = detail::stencil_cells(grid, grid.cell_of_site[i], cells);
    std::int32_t* cd = cand.data();
    for (int c = 0; c < nc; ++c) {
      for (std::int32_t j : grid.sites_in_cell[cells[c]]) {
        if (j > static_cast<std::int32_t>(i)) cd[ncand++] = j;
      }
    }
    cand.set_logical_len(ncand);
    cand.fill_tail_with_last();
    const std::size_t nloop = cand.padded_len();

    dxs.set_logical_len(ncand);
    dys.set_logical_len(ncand);
    dzs.set_logical_len(ncand);
    r2.set_logical_len(ncand);

    const double xi = X[i], yi = Y[i], zi = Z[i];
    double* dx = dxs.data();
    double* dy = dys.data();
    double* dz = dzs.data();
    double* rr = r2.data();
#pragma omp simd
    for (std::size_t k = 0; k < nloop; ++k) {
      const std::int32_t j = cd[k];
      dx[k] = xi - X[j];
      dy[k] = yi - Y[j];
      dz[k] = zi - Z[j];
    }
    minimum_image_batch(dxs, dys, dzs, system.box);
#pragma omp simd
    for (std::size_t k = 0; k < nloop; ++k) {
      rr[k] = pbc::dist2(dx[k], dy[k], dz[k]);
    }
    build_mask(r2, cutoff2, nloop, mask);
    const std::size_t kept = compress_select_into(cand, mask, kept_idx);

    if (kept > kMaxNeighbors) {
      throw CapacityError("neighbor table: site " + std::to_string(i) +
                          " exceeds the per-site neighbor capacity");
    }
    counts[i] = static_cast<std::uint32_t>(kept);
    nv8[i] = static_cast<std::uint32_t>(pad_count(kept, 8) + extra_pad_slots);
    nv16[i] = static_cast<std::uint32_t>(pad_count(kept, 16) + extra_pad_slots);
    offsets[i] = packed.size();
    std::int32_t sentinel = kept > 0 ? kept_idx[kept - 1] : 0;
    packed.insert(packed.end(), kept_idx.data(), kept_idx.data() + kept);
    packed.resize(offsets[i] + nv16[i], sentinel);
  }
  return detail::finalize_table(n, list_cutoff, packed, std::move(counts),
                                std::move(offsets), std::move(nv8), std::move(nv16));
}

}  // namespace mdvec
