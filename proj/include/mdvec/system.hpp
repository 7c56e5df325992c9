#ifndef MDVEC_SYSTEM_HPP
#define MDVEC_SYSTEM_HPP

#include <cstdint>

#include "mdvec/layout.hpp"
#include "mdvec/pbc.hpp"

namespace mdvec {

// Padded SoA site data. Positions are wrapped into [0, L) per axis.
struct ParticleSystem {
  OrthorhombicBox box;
  std::size_t n_sites = 0;

  PaddedRealArray x, y, z;
  PaddedRealArray charge;          // globally neutral by construction
  PaddedRealArray lj_sigma;
  PaddedRealArray lj_epsilon;
  PaddedRealArray hal_r0;          // buffered 14-7 minimum-energy distance
  PaddedRealArray hal_epsilon;
  PaddedRealArray polarizability;

  void validate() const;
};

enum class SystemKind { kLatticeWaterLike, kUniformRandom };

// Deterministic synthetic system. Sites keep a minimum separation of
// min_separation; generation fails if the requested density cannot honor it.
ParticleSystem generate_system(SystemKind kind, std::size_t n_sites,
                               const OrthorhombicBox& box, std::uint64_t seed,
                               double min_separation = 0.8);

// Induced-dipole starting guess / bench input for the field kernels.
struct PolarizationState {
  PaddedRealArray mu_x, mu_y, mu_z;
  double thole_a = 0.39;
};

PolarizationState random_dipoles(const ParticleSystem& system, std::uint64_t seed,
                                 double magnitude = 0.1);

}  // namespace mdvec

#endif
