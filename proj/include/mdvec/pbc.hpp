#ifndef MDVEC_PBC_HPP
#define MDVEC_PBC_HPP

#include <cmath>

#include "mdvec/common.hpp"
#include "mdvec/layout.hpp"

namespace mdvec {

struct OrthorhombicBox {
  double lx = 0, ly = 0, lz = 0;

  void validate() const {
    if (!(lx > 0) || !(ly > 0) || !(lz > 0) || !std::isfinite(lx) ||
        !std::isfinite(ly) || !std::isfinite(lz)) {
      throw ContractViolation("OrthorhombicBox: edges must be positive and finite");
    }
  }
  double min_edge() const { return std::min(lx, std::min(ly, lz)); }
};

namespace pbc {

// Maps d into [-L/2, L/2). Written with explicit fma so the scalar and
// batched paths produce bit-identical results in every translation unit.
inline double wrap1(double d, double box_len, double inv_len, double half_len) {
  double t = std::fma(-std::nearbyint(d * inv_len), box_len, d);
  // nearbyint rounds half to even, so t can land exactly on +L/2.
  return (t >= half_len) ? t - box_len : t;
}

// Squared minimum-image distance; shared between the branchy reference
// loops and the masked vector loops so both select the same pairs.
inline double dist2(double dx, double dy, double dz) {
  return std::fma(dx, dx, std::fma(dy, dy, dz * dz));
}

}  // namespace pbc

void minimum_image_scalar(double& dx, double& dy, double& dz,
                          const OrthorhombicBox& box);

// In-place over the logical region; padded slots stay finite untouched.
void minimum_image_batch(PaddedRealArray& dxs, PaddedRealArray& dys,
                         PaddedRealArray& dzs, const OrthorhombicBox& box);

}  // namespace mdvec

#endif
