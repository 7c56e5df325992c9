// Scalar reference loops for the polarizable-side kernels.

#include "kernels_impl.hpp"
#include "mdvec/pbc.hpp"
#include "mdvec/polar.hpp"

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

void halgren_forces_scalar(const ParticleSystem& system, const NeighborTable& table,
                           const HalgrenParams& params, ForceAccumulator& out) {
  detail::validate_kernel_inputs(system, table, params.cutoff, out);
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const OrthorhombicBox& box = system.box;
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;
  double energy = 0.0;
  for (std::size_t i = 0; i < system.n_sites; ++i) {
    const double xi = system.x[i], yi = system.y[i], zi = system.z[i];
    const double r0i = system.hal_r0[i], ei = system.hal_epsilon[i];
    const std::int32_t* idx = table.site_indices(i);
    double fxi = 0, fyi = 0, fzi = 0;
    for (std::uint32_t k = 0; k < table.nnvlst[i]; ++k) {
      const std::int32_t j = idx[k];
      const double dx = pbc::wrap1(xi - system.x[j], box.lx, ix, hx);
      const double dy = pbc::wrap1(yi - system.y[j], box.ly, iy, hy);
      const double dz = pbc::wrap1(zi - system.z[j], box.lz, iz, hz);
      const double r2 = pbc::dist2(dx, dy, dz);
      if (r2 <= cutoff2) {
        const double r = std::sqrt(r2);
        const double r0ij = 0.5 * (r0i + system.hal_r0[j]);
        const double eij = std::sqrt(ei * system.hal_epsilon[j]);
        HalgrenPair p = halgren_pair(r / r0ij, eij, params.delta, params.gamma);
        energy += p.u;
        const double fs = -p.dudrho / (r0ij * r);
        const double fx = fs * dx, fy = fs * dy, fz = fs * dz;
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

void dipole_field_matvec_scalar(const ParticleSystem& system,
                                const NeighborTable& table,
                                const PolarizationState& state,
                                const PolarParams& params, FieldArrays& out) {
  validate_field_inputs(system, table, params.cutoff, out);
  if (state.mu_x.logical_len() != system.n_sites) {
    throw ContractViolation("dipole_field_matvec: dipole array size mismatch");
  }
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double a = state.thole_a;
  const OrthorhombicBox& box = system.box;
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;
  for (std::size_t i = 0; i < system.n_sites; ++i) {
    const double xi = system.x[i], yi = system.y[i], zi = system.z[i];
    const double ai = system.polarizability[i];
    const double mxi = state.mu_x[i], myi = state.mu_y[i], mzi = state.mu_z[i];
    const std::int32_t* idx = table.site_indices(i);
    double exi = 0, eyi = 0, ezi = 0;
    for (std::uint32_t k = 0; k < table.nnvlst[i]; ++k) {
      const std::int32_t j = idx[k];
      const double dx = pbc::wrap1(xi - system.x[j], box.lx, ix, hx);
      const double dy = pbc::wrap1(yi - system.y[j], box.ly, iy, hy);
      const double dz = pbc::wrap1(zi - system.z[j], box.lz, iz, hz);
      const double r2 = pbc::dist2(dx, dy, dz);
      if (r2 <= cutoff2) {
        if (!(r2 > 0)) throw SingularityError("dipole_field_matvec: coincident sites");
        const double r = std::sqrt(r2);
        TholeFactors tf = thole_factors_core(r, ai, system.polarizability[j], a);
        const double r3 = r2 * r;
        const double r5 = r3 * r2;
        const double rr3 = tf.lambda3 / r3;
        const double rr5 = 3.0 * tf.lambda5 / r5;
        const double mxj = state.mu_x[j], myj = state.mu_y[j], mzj = state.mu_z[j];
        const double dotj = mxj * dx + myj * dy + mzj * dz;
        exi += rr5 * dotj * dx - rr3 * mxj;
        eyi += rr5 * dotj * dy - rr3 * myj;
        ezi += rr5 * dotj * dz - rr3 * mzj;
        const double doti = mxi * dx + myi * dy + mzi * dz;
        out.ex[j] += rr5 * doti * dx - rr3 * mxi;
        out.ey[j] += rr5 * doti * dy - rr3 * myi;
        out.ez[j] += rr5 * doti * dz - rr3 * mzi;
      }
    }
    out.ex[i] += exi;
    out.ey[i] += eyi;
    out.ez[i] += ezi;
  }
}

void permanent_field_scalar(const ParticleSystem& system, const NeighborTable& table,
                            const PolarParams& params, FieldArrays& out) {
  validate_field_inputs(system, table, params.cutoff, out);
  out.reset();
  const double cutoff2 = params.cutoff * params.cutoff;
  const double a = params.thole_a;
  const OrthorhombicBox& box = system.box;
  const double ix = 1.0 / box.lx, iy = 1.0 / box.ly, iz = 1.0 / box.lz;
  const double hx = 0.5 * box.lx, hy = 0.5 * box.ly, hz = 0.5 * box.lz;
  for (std::size_t i = 0; i < system.n_sites; ++i) {
    const double xi = system.x[i], yi = system.y[i], zi = system.z[i];
    const double ai = system.polarizability[i];
    const double qi = system.charge[i];
    const std::int32_t* idx = table.site_indices(i);
    double exi = 0, eyi = 0, ezi = 0;
    for (std::uint32_t k = 0; k < table.nnvlst[i]; ++k) {
      const std::int32_t j = idx[k];
      const double dx = pbc::wrap1(xi - system.x[j], box.lx, ix, hx);
      const double dy = pbc::wrap1(yi - system.y[j], box.ly, iy, hy);
      const double dz = pbc::wrap1(zi - system.z[j], box.lz, iz, hz);
      const double r2 = pbc::dist2(dx, dy, dz);
      if (r2 <= cutoff2) {
        if (!(r2 > 0)) throw SingularityError("permanent_field: coincident sites");
        const double r = std::sqrt(r2);
        TholeFactors tf = thole_factors_core(r, ai, system.polarizability[j], a);
        const double c = tf.lambda3 / (r2 * r);
        const double qj = system.charge[j];
        exi += c * qj * dx;
        eyi += c * qj * dy;
        ezi += c * qj * dz;
        out.ex[j] -= c * qi * dx;
        out.ey[j] -= c * qi * dy;
        out.ez[j] -= c * qi * dz;
      }
    }
    out.ex[i] += exi;
    out.ey[i] += eyi;
    out.ez[i] += ezi;
  }
}

PolarizationState jacobi_polarization_solve(const ParticleSystem& system,
                                            const NeighborTable& table,
                                            const PolarParams& params, double tol,
                                            std::size_t max_iter) {
  if (!(tol > 0)) throw ContractViolation("jacobi_polarization_solve: tol must be positive");
  if (max_iter < 1) throw ContractViolation("jacobi_polarization_solve: max_iter must be >= 1");
  const std::size_t n = system.n_sites;
  FieldArrays eperm(n);
  permanent_field_scalar(system, table, params, eperm);

  PolarizationState mu;
  mu.thole_a = params.thole_a;
  mu.mu_x = PaddedRealArray(n);
  mu.mu_y = PaddedRealArray(n);
  mu.mu_z = PaddedRealArray(n);
  FieldArrays tmu(n);

  double resid = 0.0;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    dipole_field_matvec_scalar(system, table, mu, params, tmu);
    resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = system.polarizability[i];
      const double nx = ai * (eperm.ex[i] + tmu.ex[i]);
      const double ny = ai * (eperm.ey[i] + tmu.ey[i]);
      const double nz = ai * (eperm.ez[i] + tmu.ez[i]);
      resid = std::max(resid, std::abs(nx - mu.mu_x[i]));
      resid = std::max(resid, std::abs(ny - mu.mu_y[i]));
      resid = std::max(resid, std::abs(nz - mu.mu_z[i]));
      mu.mu_x[i] = nx;
      mu.mu_y[i] = ny;
      mu.mu_z[i] = nz;
    }
    if (resid <= tol) return mu;
  }
  throw ConvergenceError("jacobi_polarization_solve: no convergence after max_iter",
                         resid);
}

}  // namespace mdvec
