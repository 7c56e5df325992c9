// Unvectorized counterpart of minimum_image_batch for boost measurements.

#include "mdvec/bench.hpp"
#include "mdvec/pbc.hpp"

namespace mdvec {

void minimum_image_loop_reference(PaddedRealArray& dxs, PaddedRealArray& dys,
                                  PaddedRealArray& dzs, const OrthorhombicBox& box) {
  box.validate();
  if (dxs.logical_len() != dys.logical_len() || dxs.logical_len() != dzs.logical_len()) {
    throw ContractViolation("minimum_image_loop_reference: ragged arrays");
  }
  const std::size_t n = dxs.logical_len();
  double* x = dxs.data();
  double* y = dys.data();
  double* z = dzs.data();
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = pbc::wrap1(x[k], box.lx, ix, hx);
    y[k] = pbc::wrap1(y[k], box.ly, iy, hy);
    z[k] = pbc::wrap1(z[k], box.lz, iz, hz);
  }
}

}  // namespace mdvec
