// Scalar reference ("Rel") pair loops: straightforward branchy kernels,
// compiled with auto-vectorization disabled so boost factors compare a
// genuine scalar baseline against the padded vector path.

#include "kernels_impl.hpp"
#include "mdvec/pbc.hpp"

namespace mdvec {

void lj_forces_scalar(const ParticleSystem& system, const NeighborTable& table,
                      const LjParams& params, ForceAccumulator& out) {
  detail::validate_kernel_inputs(system, table, params.cutoff, out);
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const OrthorhombicBox& box = system.box;
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;
  double energy = 0.0;
  for (std::size_t i = 0; i < system.n_sites; ++i) {
    const double xi = system.x[i], yi = system.y[i], zi = system.z[i];
    const double si = system.lj_sigma[i], ei = system.lj_epsilon[i];
    const std::int32_t* idx = table.site_indices(i);
    double fxi = 0, fyi = 0, fzi = 0;
    for (std::uint32_t k = 0; k < table.nnvlst[i]; ++k) {
      const std::int32_t j = idx[k];
      const double dx = pbc::wrap1(xi - system.x[j], box.lx, ix, hx);
      const double dy = pbc::wrap1(yi - system.y[j], box.ly, iy, hy);
      const double dz = pbc::wrap1(zi - system.z[j], box.lz, iz, hz);
      const double r2 = pbc::dist2(dx, dy, dz);
      if (r2 <= cutoff2) {
        const double sij = mix_sigma(si, system.lj_sigma[j]);
        const double eij = mix_epsilon(ei, system.lj_epsilon[j]);
        PairEnergy p = lj_pair(r2, sij, eij);
        double u = p.u;
        if (params.shift) u -= lj_pair_core(cutoff2, sij, eij).u;
        energy += u;
        const double fx = p.fs * dx, fy = p.fs * dy, fz = p.fs * dz;
        fxi += fx;
        fyi += fy;
        fzi += fz;
        out.fx[j] -= fx;
        out.fy[j] -= fy;
        out.fz[j] -= fz;
      }
    }
    out.fx[i] += fxi;
    out.fy[i] += fyi;
    out.fz[i] += fzi;
  }
  out.energy = energy;
}

void ewald_real_forces_scalar(const ParticleSystem& system,
                              const NeighborTable& table,
                              const EwaldRealParams& params,
                              ForceAccumulator& out) {
  detail::validate_kernel_inputs(system, table, params.cutoff, out);
  if (params.alpha < 0) throw ContractViolation("ewald: alpha must be nonnegative");
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const OrthorhombicBox& box = system.box;
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;
  double energy = 0.0;
  for (std::size_t i = 0; i < system.n_sites; ++i) {
    const double xi = system.x[i], yi = system.y[i], zi = system.z[i];
    const double qi = system.charge[i];
    const std::int32_t* idx = table.site_indices(i);
    double fxi = 0, fyi = 0, fzi = 0;
    for (std::uint32_t k = 0; k < table.nnvlst[i]; ++k) {
      const std::int32_t j = idx[k];
      const double dx = pbc::wrap1(xi - system.x[j], box.lx, ix, hx);
      const double dy = pbc::wrap1(yi - system.y[j], box.ly, iy, hy);
      const double dz = pbc::wrap1(zi - system.z[j], box.lz, iz, hz);
      const double r2 = pbc::dist2(dx, dy, dz);
      if (r2 <= cutoff2) {
        PairEnergy p =
            ewald_real_pair(std::sqrt(r2), qi, system.charge[j], params.alpha);
        energy += p.u;
        const double fx = p.fs * dx, fy = p.fs * dy, fz = p.fs * dz;
        fxi += fx;
        fyi += fy;
        fzi += fz;
        out.fx[j] -= fx;
        out.fy[j] -= fy;
        out.fz[j] -= fz;
      }
    }
    out.fx[i] += fxi;
    out.fy[i] += fyi;
    out.fz[i] += fzi;
  }
  out.energy = energy;
}

}  // namespace mdvec
