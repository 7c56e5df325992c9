// Vectorized ("Vec") kernels: padded gather, masked selection, short
// branch-free compute loops over lane-multiple counts.

#include "kernels_impl.hpp"
#include "select_impl.hpp"

namespace mdvec {

void erfc_batch(const double* x, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::erfc(x[k]);
}

void lj_forces_vectorized(const ParticleSystem& system, const NeighborTable& table,
                          const LjParams& params, const LaneConfig& lanes,
                          PairWorkspace& ws, ForceAccumulator& out) {
  detail::validate_kernel_inputs(system, table, params.cutoff, out);
  lanes.validate();
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double shift_flag = params.shift ? 1.0 : 0.0;
  double energy = 0.0;

  const double* SIG = system.lj_sigma.data();
  const double* EPS = system.lj_epsilon.data();

  for (std::size_t i = 0; i < system.n_sites; ++i) {
    auto sel = detail::select_site_pairs(system, table, i, cutoff2,
                                         {SIG, EPS, nullptr, nullptr}, 2,
                                         lanes.real_lane, ws);
    if (sel.nloop == 0) continue;

    const double si = SIG[i], ei = EPS[i];
    const double* dx = ws.pdx.data();
    const double* dy = ws.pdy.data();
    const double* dz = ws.pdz.data();
    const double* sj = ws.pa.data();
    const double* ej = ws.pb.data();
    const double* sc = ws.scale.data();
    double* fxk = ws.t1.data();
    double* fyk = ws.t2.data();
    double* fzk = ws.t3.data();

    double e = 0, fxi = 0, fyi = 0, fzi = 0;
#pragma omp simd reduction(+ : e, fxi, fyi, fzi)
    for (std::size_t k = 0; k < sel.nloop; ++k) {
      const double s = sc[k];
      // padded lanes get a shifted r2 so they stay finite; s annihilates them
      const double r2 = pbc::dist2(dx[k], dy[k], dz[k]) + (1.0 - s);
      const double inv_r2 = 1.0 / r2;
      const double sij = 0.5 * (si + sj[k]);
      const double eij = std::sqrt(ei * ej[k]);
      const double s2 = sij * sij * inv_r2;
      const double s6 = s2 * s2 * s2;
      const double s12 = s6 * s6;
      const double sc2 = sij * sij / cutoff2;
      const double sc6 = sc2 * sc2 * sc2;
      const double ucut = 4.0 * eij * (sc6 * sc6 - sc6);
      const double u = 4.0 * eij * (s12 - s6) - shift_flag * ucut;
      const double fs = s * 24.0 * eij * (2.0 * s12 - s6) * inv_r2;
      e += s * u;
      const double fx = fs * dx[k], fy = fs * dy[k], fz = fs * dz[k];
      fxk[k] = fx;
      fyk[k] = fy;
      fzk[k] = fz;
      fxi += fx;
      fyi += fy;
      fzi += fz;
    }
    energy += e;
    out.fx[i] += fxi;
    out.fy[i] += fyi;
    out.fz[i] += fzi;
    const std::int32_t* pj = ws.pidx.data();
    for (std::size_t k = 0; k < sel.kept; ++k) {
      out.fx[pj[k]] -= fxk[k];
      out.fy[pj[k]] -= fyk[k];
      out.fz[pj[k]] -= fzk[k];
    }
  }
  out.energy = energy;
}

void ewald_real_forces_vectorized(const ParticleSystem& system,
                                  const NeighborTable& table,
                                  const EwaldRealParams& params,
                                  const LaneConfig& lanes, PairWorkspace& ws,
                                  ForceAccumulator& out) {
  detail::validate_kernel_inputs(system, table, params.cutoff, out);
  if (params.alpha < 0) throw ContractViolation("ewald: alpha must be nonnegative");
  lanes.validate();
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double alpha = params.alpha;
  constexpr double two_over_sqrt_pi = 1.1283791670955126;
  double energy = 0.0;

  const double* Q = system.charge.data();

  for (std::size_t i = 0; i < system.n_sites; ++i) {
    auto sel = detail::select_site_pairs(system, table, i, cutoff2,
                                         {Q, nullptr, nullptr, nullptr}, 1,
                                         lanes.real_lane, ws);
    if (sel.nloop == 0) continue;

    const double qi = Q[i];
    const double* dx = ws.pdx.data();
    const double* dy = ws.pdy.data();
    const double* dz = ws.pdz.data();
    const double* qj = ws.pa.data();
    const double* sc = ws.scale.data();
    double* rv = ws.t4.data();
    double* xv = ws.t5.data();
    double* erfcv = ws.t6.data();
    double* fxk = ws.t1.data();
    double* fyk = ws.t2.data();
    double* fzk = ws.t3.data();

#pragma omp simd
    for (std::size_t k = 0; k < sel.nloop; ++k) {
      const double r2 = pbc::dist2(dx[k], dy[k], dz[k]) + (1.0 - sc[k]);
      rv[k] = std::sqrt(r2);
      xv[k] = alpha * rv[k];
    }
    erfc_batch(xv, erfcv, sel.nloop);

    double e = 0, fxi = 0, fyi = 0, fzi = 0;
#pragma omp simd reduction(+ : e, fxi, fyi, fzi)
    for (std::size_t k = 0; k < sel.nloop; ++k) {
      const double s = sc[k];
      const double qq = qi * qj[k];
      const double inv_r = 1.0 / rv[k];
      const double eterm = erfcv[k] * inv_r;
      const double g = alpha * two_over_sqrt_pi * std::exp(-xv[k] * xv[k]);
      const double fs = s * qq * (eterm + g) * inv_r * inv_r;
      e += s * qq * eterm;
      const double fx = fs * dx[k], fy = fs * dy[k], fz = fs * dz[k];
      fxk[k] = fx;
      fyk[k] = fy;
      fzk[k] = fz;
      fxi += fx;
      fyi += fy;
      fzi += fz;
    }
    energy += e;
    out.fx[i] += fxi;
    out.fy[i] += fyi;
    out.fz[i] += fzi;
    const std::int32_t* pj = ws.pidx.data();
    for (std::size_t k = 0; k < sel.kept; ++k) {
      out.fx[pj[k]] -= fxk[k];
      out.fy[pj[k]] -= fyk[k];
      out.fz[pj[k]] -= fzk[k];
    }
  }
  out.energy = energy;
}

}  // namespace mdvec
