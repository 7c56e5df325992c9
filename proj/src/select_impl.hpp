#ifndef MDVEC_SELECT_IMPL_HPP
#define MDVEC_SELECT_IMPL_HPP

#include <array>

#include "mdvec/kernels.hpp"
#include "mdvec/pbc.hpp"

namespace mdvec::detail {

struct Selection {
  std::size_t kept = 0;   // pairs within the kernel cutoff
  std::size_t nloop = 0;  // packed real-lane loop count
};

// Per-site gather / mask / compress chain shared by the vectorized kernels.
// Gathers the minimum-image displacements plus nparams per-neighbor
// parameter arrays, selects r2 <= cutoff2 and packs everything in one pass.
// After the call: ws.pidx / pdx / pdy / pdz / pa..pd hold packed values and
// ws.scale is 1.0 on real lanes, 0.0 on the padded tail.
inline Selection select_site_pairs(const ParticleSystem& system,
                                   const NeighborTable& table, std::size_t i,
                                   double cutoff2,
                                   const std::array<const double*, 4>& params,
                                   int nparams, std::size_t real_lane,
                                   PairWorkspace& ws) {
  const std::uint32_t nn = table.nnvlst[i];
  const std::uint32_t nl16 = table.nvloop16[i];
  if (nl16 == 0) return {};

  const std::int32_t* seg = table.site_indices(i);
  ws.idx.set_logical_len(nn);
  ws.gdx.set_logical_len(nn);
  ws.gdy.set_logical_len(nn);
  ws.gdz.set_logical_len(nn);
  ws.r2.set_logical_len(nn);

  std::int32_t* id = ws.idx.data();
  double* dx = ws.gdx.data();
  double* dy = ws.gdy.data();
  double* dz = ws.gdz.data();
  double* rr = ws.r2.data();
  const double* X = system.x.data();
  const double* Y = system.y.data();
  const double* Z = system.z.data();
  const double xi = X[i], yi = Y[i], zi = Z[i];

  // The irregular gather stays in its own scalar loop (hardware gathers are
  // slow on this tuning target); the wrap + distance pass below then runs
  // over contiguous arrays and vectorizes cleanly.
  const OrthorhombicBox& box = system.box;
  const double ilx = 1.0 / box.lx, ily = 1.0 / box.ly, ilz = 1.0 / box.lz;
  const double hlx = 0.5 * box.lx, hly = 0.5 * box.ly, hlz = 0.5 * box.lz;
  for (std::uint32_t k = 0; k < nl16; ++k) {
    const std::int32_t j = seg[k];
    id[k] = j;
    dx[k] = xi - X[j];
    dy[k] = yi - Y[j];
    dz[k] = zi - Z[j];
  }
#pragma omp simd
  for (std::uint32_t k = 0; k < nl16; ++k) {
    const double wx = pbc::wrap1(dx[k], box.lx, ilx, hlx);
    const double wy = pbc::wrap1(dy[k], box.ly, ily, hly);
    const double wz = pbc::wrap1(dz[k], box.lz, ilz, hlz);
    dx[k] = wx;
    dy[k] = wy;
    dz[k] = wz;
    rr[k] = pbc::dist2(wx, wy, wz);
  }

  build_mask(ws.r2, cutoff2, nl16, ws.mask);

  std::array<const PaddedIndexArray*, 1> isrc{&ws.idx};
  std::array<PaddedIndexArray*, 1> idst{&ws.pidx};
  std::array<const PaddedRealArray*, 3> rsrc{&ws.gdx, &ws.gdy, &ws.gdz};
  std::array<PaddedRealArray*, 3> rdst{&ws.pdx, &ws.pdy, &ws.pdz};
  const std::size_t kept = compress_select_multi(
      std::span<const PaddedIndexArray* const>(isrc.data(), 1),
      std::span<const PaddedRealArray* const>(rsrc.data(), 3), ws.mask,
      std::span<PaddedIndexArray* const>(idst.data(), 1),
      std::span<PaddedRealArray* const>(rdst.data(), 3));

  const std::size_t nloop = pad_count(kept, real_lane);

  // Parameters are gathered through the packed indices instead of being
  // packed themselves; the sentinel tail of pidx keeps the loads in range.
  PaddedRealArray* pp[4] = {&ws.pa, &ws.pb, &ws.pc, &ws.pd};
  const std::int32_t* cid = ws.pidx.data();
  for (int p = 0; p < nparams; ++p) {
    pp[p]->set_logical_len(kept);
    double* g = pp[p]->data();
    const double* src = params[p];
#pragma omp simd
    for (std::size_t k = 0; k < nloop; ++k) g[k] = src[cid[k]];
  }
  ws.scale.set_logical_len(kept);
  double* sc = ws.scale.data();
#pragma omp simd
  for (std::size_t k = 0; k < nloop; ++k) {
    sc[k] = k < kept ? 1.0 : 0.0;
  }
  return {kept, nloop};
}

}  // namespace mdvec::detail

#endif
