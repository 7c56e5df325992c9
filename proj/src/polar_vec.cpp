// Vectorized polarizable-side kernels.

#include "kernels_impl.hpp"
#include "mdvec/polar.hpp"
#include "select_impl.hpp"

namespace mdvec {

namespace {

void validate_field_inputs(const ParticleSystem& system, const NeighborTable& table,
                           double cutoff, const FieldArrays& out) {
  if (table.n_sites != system.n_sites) {
    throw ContractViolation("kernel: table does not match the system");
  }
  if (!(cutoff > 0) || cutoff > table.cutoff) {
    throw ContractViolation("kernel: cutoff must be positive and within the list cutoff");
  }
  if (out.ex.logical_len() != system.n_sites) {
    throw ContractViolation("kernel: field array size mismatch");
  }
}

}  // namespace

void halgren_forces_vectorized(const ParticleSystem& system,
                               const NeighborTable& table,
                               const HalgrenParams& params, const LaneConfig& lanes,
                               PairWorkspace& ws, ForceAccumulator& out) {
  detail::validate_kernel_inputs(system, table, params.cutoff, out);
  lanes.validate();
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double delta = params.delta, gamma = params.gamma;
  double energy = 0.0;

  const double* R0 = system.hal_r0.data();

  // sqrt(epsilon) per site, so the pair mixing inside the hot loop is a
  // single multiply instead of a sqrt; the buffer persists across calls to
  // keep repeated kernel invocations allocation-free
  static thread_local PaddedRealArray seps;
  if (seps.capacity() < pad_count(system.n_sites, seps.lane())) {
    seps = PaddedRealArray::with_capacity(pad_count(system.n_sites, seps.lane()));
  }
  seps.set_logical_len(system.n_sites);
  {
    const double* EPS = system.hal_epsilon.data();
    double* se = seps.data();
    const std::size_t pl = seps.padded_len();
#pragma omp simd
    for (std::size_t k = 0; k < pl; ++k) se[k] = std::sqrt(EPS[k]);
  }
  const double* SEPS = seps.data();

  for (std::size_t i = 0; i < system.n_sites; ++i) {
    auto sel = detail::select_site_pairs(system, table, i, cutoff2,
                                         {R0, SEPS, nullptr, nullptr}, 2,
                                         lanes.real_lane, ws);
    if (sel.nloop == 0) continue;

    const double r0i = R0[i], sei = SEPS[i];
    const double* dx = ws.pdx.data();
    const double* dy = ws.pdy.data();
    const double* dz = ws.pdz.data();
    const double* r0j = ws.pa.data();
    const double* sej = ws.pb.data();
    const double* sc = ws.scale.data();
    double* fxk = ws.t1.data();
    double* fyk = ws.t2.data();
    double* fzk = ws.t3.data();

    double e = 0, fxi = 0, fyi = 0, fzi = 0;
#pragma omp simd reduction(+ : e, fxi, fyi, fzi)
    for (std::size_t k = 0; k < sel.nloop; ++k) {
      const double s = sc[k];
      const double r2 = pbc::dist2(dx[k], dy[k], dz[k]) + (1.0 - s);
      const double r = std::sqrt(r2);
      const double r0 = 0.5 * (r0i + r0j[k]);
      const double eij = sei * sej[k];
      // everything expressed in r and r0 so all reciprocals come from one
      // division: t1 = (1+d) r0 / (r + d r0), g1 = (1+g) r0^7 / (r^7 + g r0^7)
      const double r0_2 = r0 * r0;
      const double r0_3 = r0_2 * r0;
      const double r0_6 = r0_3 * r0_3;
      const double r0_7 = r0_6 * r0;
      const double r3 = r2 * r;
      const double r6 = r3 * r3;
      const double r7 = r6 * r;
      const double e1 = r + delta * r0;
      const double e2 = r7 + gamma * r0_7;
      const double r0r = r0 * r;
      const double q = 1.0 / (e1 * e2 * r0r);
      const double e2r0r = e2 * r0r;
      const double inv_e1 = q * e2r0r;
      const double inv_e2 = q * e1 * r0r;
      const double inv_r0r = q * e1 * e2;
      const double t1 = (1.0 + delta) * r0 * inv_e1;
      const double t2 = t1 * t1;
      const double t4 = t2 * t2;
      const double t7 = t4 * t2 * t1;
      const double g1 = (1.0 + gamma) * r0_7 * inv_e2;
      const double b = g1 - 2.0;
      const double u = eij * t7 * b;
      const double dudrho =
          -7.0 * eij * t7 * (b * r0 * inv_e1 + r6 * r0 * g1 * inv_e2);
      const double fs = -s * dudrho * inv_r0r;
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

void dipole_field_matvec_vectorized(const ParticleSystem& system,
                                    const NeighborTable& table,
                                    const PolarizationState& state,
                                    const PolarParams& params,
                                    const LaneConfig& lanes, PairWorkspace& ws,
                                    FieldArrays& out) {
  validate_field_inputs(system, table, params.cutoff, out);
  if (state.mu_x.logical_len() != system.n_sites) {
    throw ContractViolation("dipole_field_matvec: dipole array size mismatch");
  }
  lanes.validate();
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double a = state.thole_a;

  const double* MX = state.mu_x.data();
  const double* MY = state.mu_y.data();
  const double* MZ = state.mu_z.data();
  const double* POL = system.polarizability.data();

  for (std::size_t i = 0; i < system.n_sites; ++i) {
    auto sel = detail::select_site_pairs(system, table, i, cutoff2,
                                         {MX, MY, MZ, POL}, 4, lanes.real_lane, ws);
    if (sel.nloop == 0) continue;

    const double ai = POL[i];
    const double mxi = MX[i], myi = MY[i], mzi = MZ[i];
    const double* dx = ws.pdx.data();
    const double* dy = ws.pdy.data();
    const double* dz = ws.pdz.data();
    const double* mxj = ws.pa.data();
    const double* myj = ws.pb.data();
    const double* mzj = ws.pc.data();
    const double* aj = ws.pd.data();
    const double* sc = ws.scale.data();
    double* exk = ws.t1.data();
    double* eyk = ws.t2.data();
    double* ezk = ws.t3.data();

    double exi = 0, eyi = 0, ezi = 0;
#pragma omp simd reduction(+ : exi, eyi, ezi)
    for (std::size_t k = 0; k < sel.nloop; ++k) {
      const double s = sc[k];
      const double r2 = pbc::dist2(dx[k], dy[k], dz[k]) + (1.0 - s);
      const double r = std::sqrt(r2);
      const double u = r / std::cbrt(std::sqrt(ai * aj[k]));
      const double au3 = a * u * u * u;
      const double ex = std::exp(-au3);
      const double l3 = 1.0 - ex;
      const double l5 = 1.0 - (1.0 + au3) * ex;
      const double r3 = r2 * r;
      const double r5 = r3 * r2;
      const double rr3 = s * l3 / r3;
      const double rr5 = s * 3.0 * l5 / r5;
      const double dotj = mxj[k] * dx[k] + myj[k] * dy[k] + mzj[k] * dz[k];
      exi += rr5 * dotj * dx[k] - rr3 * mxj[k];
      eyi += rr5 * dotj * dy[k] - rr3 * myj[k];
      ezi += rr5 * dotj * dz[k] - rr3 * mzj[k];
      const double doti = mxi * dx[k] + myi * dy[k] + mzi * dz[k];
      exk[k] = rr5 * doti * dx[k] - rr3 * mxi;
      eyk[k] = rr5 * doti * dy[k] - rr3 * myi;
      ezk[k] = rr5 * doti * dz[k] - rr3 * mzi;
    }
    out.ex[i] += exi;
    out.ey[i] += eyi;
    out.ez[i] += ezi;
    const std::int32_t* pj = ws.pidx.data();
    for (std::size_t k = 0; k < sel.kept; ++k) {
      out.ex[pj[k]] += exk[k];
      out.ey[pj[k]] += eyk[k];
      out.ez[pj[k]] += ezk[k];
    }
  }
}

void permanent_field_vectorized(const ParticleSystem& system,
                                const NeighborTable& table,
                                const PolarParams& params, const LaneConfig& lanes,
                                PairWorkspace& ws, FieldArrays& out) {
  validate_field_inputs(system, table, params.cutoff, out);
  lanes.validate();
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double a = params.thole_a;

  const double* Q = system.charge.data();
  const double* POL = system.polarizability.data();

  for (std::size_t i = 0; i < system.n_sites; ++i) {
    auto sel = detail::select_site_pairs(system, table, i, cutoff2,
                                         {Q, POL, nullptr, nullptr}, 2,
                                         lanes.real_lane, ws);
    if (sel.nloop == 0) continue;

    const double ai = POL[i];
    const double qi = Q[i];
    const double* dx = ws.pdx.data();
    const double* dy = ws.pdy.data();
    const double* dz = ws.pdz.data();
    const double* qj = ws.pa.data();
    const double* aj = ws.pb.data();
    const double* sc = ws.scale.data();
    double* exk = ws.t1.data();
    double* eyk = ws.t2.data();
    double* ezk = ws.t3.data();

    double exi = 0, eyi = 0, ezi = 0;
#pragma omp simd reduction(+ : exi, eyi, ezi)
    for (std::size_t k = 0; k < sel.nloop; ++k) {
      const double s = sc[k];
      const double r2 = pbc::dist2(dx[k], dy[k], dz[k]) + (1.0 - s);
      const double r = std::sqrt(r2);
      const double u = r / std::cbrt(std::sqrt(ai * aj[k]));
      const double au3 = a * u * u * u;
      const double l3 = 1.0 - std::exp(-au3);
      const double c = s * l3 / (r2 * r);
      exi += c * qj[k] * dx[k];
      eyi += c * qj[k] * dy[k];
      ezi += c * qj[k] * dz[k];
      exk[k] = -c * qi * dx[k];
      eyk[k] = -c * qi * dy[k];
      ezk[k] = -c * qi * dz[k];
    }
    out.ex[i] += exi;
    out.ey[i] += eyi;
    out.ez[i] += ezi;
    const std::int32_t* pj = ws.pidx.data();
    for (std::size_t k = 0; k < sel.kept; ++k) {
      out.ex[pj[k]] += exk[k];
      out.ey[pj[k]] += eyk[k];
      out.ez[pj[k]] += ezk[k];
    }
  }
}

}  // namespace mdvec
