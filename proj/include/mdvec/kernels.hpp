#ifndef MDVEC_KERNELS_HPP
#define MDVEC_KERNELS_HPP

#include <cmath>

#include "mdvec/neighbors.hpp"
#include "mdvec/system.hpp"

namespace mdvec {

struct LjParams {
  double cutoff = 0;
  bool shift = false;  // subtract U(cutoff) per pair when set
};

struct EwaldRealParams {
  double alpha = 0;  // Ewald splitting parameter, inverse distance
  double cutoff = 0;
};

struct ForceAccumulator {
  PaddedRealArray fx, fy, fz;
  double energy = 0;

  explicit ForceAccumulator(std::size_t n_sites)
      : fx(n_sites), fy(n_sites), fz(n_sites) {}

  void reset() {
    energy = 0;
    std::fill(fx.data(), fx.data() + fx.padded_len(), 0.0);
    std::fill(fy.data(), fy.data() + fy.padded_len(), 0.0);
    std::fill(fz.data(), fz.data() + fz.padded_len(), 0.0);
  }
};

struct PairEnergy {
  double u;   // pair energy
  double fs;  // force scalar: F_i = fs * (r_i - r_j)
};

// U = 4 eps [ (sigma/r)^12 - (sigma/r)^6 ]
inline PairEnergy lj_pair_core(double r2, double sigma_ij, double epsilon_ij) noexcept {
  const double inv_r2 = 1.0 / r2;
  const double s2 = sigma_ij * sigma_ij * inv_r2;
  const double s6 = s2 * s2 * s2;
  const double s12 = s6 * s6;
  return {4.0 * epsilon_ij * (s12 - s6),
          24.0 * epsilon_ij * (2.0 * s12 - s6) * inv_r2};
}

inline PairEnergy lj_pair(double r2, double sigma_ij, double epsilon_ij) {
  if (!(r2 > 0)) throw SingularityError("lj_pair: zero separation");
  return lj_pair_core(r2, sigma_ij, epsilon_ij);
}

// u = qi qj erfc(alpha r) / r  (real-space Ewald term)
inline PairEnergy ewald_real_pair_core(double r, double qq, double alpha) noexcept {
  constexpr double two_over_sqrt_pi = 1.1283791670955126;
  const double inv_r = 1.0 / r;
  const double e = std::erfc(alpha * r) * inv_r;
  const double g = alpha * two_over_sqrt_pi * std::exp(-alpha * alpha * r * r);
  return {qq * e, qq * (e + g) * inv_r * inv_r};
}

inline PairEnergy ewald_real_pair(double r, double qi, double qj, double alpha) {
  if (!(r > 0)) throw SingularityError("ewald_real_pair: zero separation");
  return ewald_real_pair_core(r, qi * qj, alpha);
}

// Lorentz-Berthelot mixing
inline double mix_sigma(double si, double sj) { return 0.5 * (si + sj); }
inline double mix_epsilon(double ei, double ej) { return std::sqrt(ei * ej); }

// Reused padded buffers for the per-site gather / select / compute chain.
// Sized for the fixed neighbor capacity so kernel calls never allocate.
struct PairWorkspace {
  // gather stage (integer-lane padding so everything matches the mask)
  PaddedRealArray gdx, gdy, gdz, ga, gb, gc, gd, r2;
  // packed stage
  PaddedIndexArray idx, pidx;
  PaddedRealArray pdx, pdy, pdz, pa, pb, pc, pd;
  PaddedRealArray scale;
  // compute temporaries
  PaddedRealArray t1, t2, t3, t4, t5, t6;
  Mask mask;

  PairWorkspace()
      : gdx(mk()), gdy(mk()), gdz(mk()), ga(mk()), gb(mk()), gc(mk()), gd(mk()),
        r2(mk()), idx(mki()), pidx(mki()), pdx(mk()), pdy(mk()), pdz(mk()),
        pa(mk()), pb(mk()), pc(mk()), pd(mk()), scale(mk()), t1(mk()), t2(mk()),
        t3(mk()), t4(mk()), t5(mk()), t6(mk()), mask(kCap) {}

 private:
  // Slack beyond the neighbor capacity absorbs tables built with extra
  // padding (the padding-neutrality property).
  static constexpr std::size_t kCap = kMaxNeighbors + 64;
  static PaddedRealArray mk() { return PaddedRealArray::with_capacity(kCap, 16); }
  static PaddedIndexArray mki() { return PaddedIndexArray::with_capacity(kCap); }
};

void lj_forces_scalar(const ParticleSystem& system, const NeighborTable& table,
                      const LjParams& params, ForceAccumulator& out);
void lj_forces_vectorized(const ParticleSystem& system, const NeighborTable& table,
                          const LjParams& params, const LaneConfig& lanes,
                          PairWorkspace& ws, ForceAccumulator& out);

void ewald_real_forces_scalar(const ParticleSystem& system,
                              const NeighborTable& table,
                              const EwaldRealParams& params, ForceAccumulator& out);
void ewald_real_forces_vectorized(const ParticleSystem& system,
                                  const NeighborTable& table,
                                  const EwaldRealParams& params,
                                  const LaneConfig& lanes, PairWorkspace& ws,
                                  ForceAccumulator& out);

// Batched complementary error function over a padded lane region.
void erfc_batch(const double* x, double* out, std::size_t n);

}  // namespace mdvec

#endif
