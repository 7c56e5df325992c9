#include "mdvec/pbc.hpp"

namespace mdvec {

void minimum_image_scalar(double& dx, double& dy, double& dz,
                          const OrthorhombicBox& box) {
  box.validate();
  if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(dz)) {
    throw ContractViolation("minimum_image_scalar: non-finite displacement");
  }
  dx = pbc::wrap1(dx, box.lx, 1.0 / box.lx, 0.5 * box.lx);
  dy = pbc::wrap1(dy, box.ly, 1.0 / box.ly, 0.5 * box.ly);
  dz = pbc::wrap1(dz, box.lz, 1.0 / box.lz, 0.5 * box.lz);
}

void minimum_image_batch(PaddedRealArray& dxs, PaddedRealArray& dys,
                         PaddedRealArray& dzs, const OrthorhombicBox& box) {
  box.validate();
  if (dxs.logical_len() != dys.logical_len() || dxs.logical_len() != dzs.logical_len() ||
      dxs.padded_len() != dys.padded_len() || dxs.padded_len() != dzs.padded_len()) {
    throw ContractViolation("minimum_image_batch: ragged arrays");
  }
  const std::size_t n = dxs.padded_len();
  double* x = dxs.data();
  double* y = dys.data();
  double* z = dzs.data();
  const double lx = box.lx, ly = box.ly, lz = box.lz;
  const double ix = 1.0 / lx, iy = 1.0 / ly, iz = 1.0 / lz;
  const double hx = 0.5 * lx, hy = 0.5 * ly, hz = 0.5 * lz;
#pragma omp simd
  for (std::size_t k = 0; k < n; ++k) x[k] = pbc::wrap1(x[k], lx, ix, hx);
#pragma omp simd
  for (std::size_t k = 0; k < n; ++k) y[k] = pbc::wrap1(y[k], ly, iy, hy);
#pragma omp simd
  for (std::size_t k = 0; k < n; ++k) z[k] = pbc::wrap1(z[k], lz, iz, hz);
}

}  // namespace mdvec
