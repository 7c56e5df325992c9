#include "mdvec/system.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace mdvec {

void ParticleSystem::validate() const {
  box.validate();
  const PaddedRealArray* arrays[] = {&x, &y, &z, &charge, &lj_sigma, &lj_epsilon,
                                     &hal_r0, &hal_epsilon, &polarizability};
  for (const auto* a : arrays) {
    if (a->logical_len() != n_sites) {
      throw ContractViolation("ParticleSystem: array length mismatch");
    }
  }
  const double L[3] = {box.lx, box.ly, box.lz};
  const PaddedRealArray* pos[3] = {&x, &y, &z};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n_sites; ++i) {
      double p = (*pos[c])[i];
      if (!(p >= 0.0 && p < L[c])) {
        throw ContractViolation("ParticleSystem: position outside the box");
      }
    }
  }
}

namespace {

void draw_site_params(ParticleSystem& s, std::mt19937_64& rng) {
  const std::size_t n = s.n_sites;
  std::uniform_real_distribution<double> uq(-0.5, 0.5);
  std::uniform_real_distribution<double> usig(0.9, 1.1);
  std::uniform_real_distribution<double> ueps(0.5, 1.5);
  std::uniform_real_distribution<double> ur0(1.1, 1.3);
  std::uniform_real_distribution<double> upol(0.5, 1.5);
  double qsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double q = uq(rng);
    s.charge[i] = q;
    qsum += q;
    s.lj_sigma[i] = usig(rng);
    s.lj_epsilon[i] = ueps(rng);
    s.hal_r0[i] = ur0(rng);
    s.hal_epsilon[i] = ueps(rng);
    s.polarizability[i] = upol(rng);
  }
  // enforce global neutrality
  if (n > 0) {
    double shift = qsum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) s.charge[i] -= shift;
  }
}

double wrap_into(double p, double L) {
  p -= L * std::floor(p / L);
  if (p >= L) p = 0.0;
  return p;
}

}  // namespace

ParticleSystem generate_system(SystemKind kind, std::size_t n_sites,
                               const OrthorhombicBox& box, std::uint64_t seed,
                               double min_separation) {
  box.validate();
  if (n_sites < 1) throw ContractViolation("generate_system: need at least one site");

  ParticleSystem s;
  s.box = box;
  s.n_sites = n_sites;
  s.x = PaddedRealArray(n_sites);
  s.y = PaddedRealArray(n_sites);
  s.z = PaddedRealArray(n_sites);
  s.charge = PaddedRealArray(n_sites);
  s.lj_sigma = PaddedRealArray(n_sites);
  s.lj_epsilon = PaddedRealArray(n_sites);
  s.hal_r0 = PaddedRealArray(n_sites);
  s.hal_epsilon = PaddedRealArray(n_sites);
  s.polarizability = PaddedRealArray(n_sites);

  std::mt19937_64 rng(seed);

  if (kind == SystemKind::kLatticeWaterLike) {
    std::size_t m = 1;
    while (m * m * m < n_sites) ++m;
    const double sx = box.lx / static_cast<double>(m);
    const double sy = box.ly / static_cast<double>(m);
    const double sz = box.lz / static_cast<double>(m);
    const double sp = std::min(sx, std::min(sy, sz));
    const double jitter = 0.05 * sp;
    if (sp - 2.0 * jitter < min_separation) {
      throw GenerationError("generate_system: lattice too dense for the minimum separation");
    }
    std::uniform_real_distribution<double> uj(-jitter, jitter);
    std::size_t i = 0;
    for (std::size_t ix = 0; ix < m && i < n_sites; ++ix) {
      for (std::size_t iy = 0; iy < m && i < n_sites; ++iy) {
        for (std::size_t iz = 0; iz < m && i < n_sites; ++iz) {
          s.x[i] = wrap_into((ix + 0.5) * sx + uj(rng), box.lx);
          s.y[i] = wrap_into((iy + 0.5) * sy + uj(rng), box.ly);
          s.z[i] = wrap_into((iz + 0.5) * sz + uj(rng), box.lz);
          ++i;
        }
      }
    }
  } else {
    // Rejection sampling against an occupancy grid at the separation scale.
    const double cell = min_separation;
    const int gx = std::max(1, static_cast<int>(box.lx / cell));
    const int gy = std::max(1, static_cast<int>(box.ly / cell));
    const int gz = std::max(1, static_cast<int>(box.lz / cell));
    std::vector<std::vector<std::int32_t>> grid(
        static_cast<std::size_t>(gx) * gy * gz);
    auto cell_of = [&](double px, double py, double pz) {
      int cx = std::min(gx - 1, static_cast<int>(px / box.lx * gx));
      int cy = std::min(gy - 1, static_cast<int>(py / box.ly * gy));
      int cz = std::min(gz - 1, static_cast<int>(pz / box.lz * gz));
      return (static_cast<std::size_t>(cx) * gy + cy) * gz + cz;
    };
    std::uniform_real_distribution<double> ux(0.0, box.lx);
    std::uniform_real_distribution<double> uy(0.0, box.ly);
    std::uniform_real_distribution<double> uz(0.0, box.lz);
    const double sep2 = min_separation * min_separation;
    for (std::size_t i = 0; i < n_sites; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        double px = ux(rng), py = uy(rng), pz = uz(rng);
        px = wrap_into(px, box.lx);
        py = wrap_into(py, box.ly);
        pz = wrap_into(pz, box.lz);
        bool clash = false;
        int cx = std::min(gx - 1, static_cast<int>(px / box.lx * gx));
        int cy = std::min(gy - 1, static_cast<int>(py / box.ly * gy));
        int cz = std::min(gz - 1, static_cast<int>(pz / box.lz * gz));
        for (int ox = -1; ox <= 1 && !clash; ++ox) {
          for (int oy = -1; oy <= 1 && !clash; ++oy) {
            for (int oz = -1; oz <= 1 && !clash; ++oz) {
              int wx = (cx + ox + gx) % gx;
              int wy = (cy + oy + gy) % gy;
              int wz = (cz + oz + gz) % gz;
              for (std::int32_t j :
                   grid[(static_cast<std::size_t>(wx) * gy + wy) * gz + wz]) {
                double dx = px - s.x[j], dy = py - s.y[j], dz = pz - s.z[j];
                minimum_image_scalar(dx, dy, dz, box);
                if (pbc::dist2(dx, dy, dz) < sep2) {
                  clash = true;
                  break;
                }
              }
            }
          }
        }
        if (!clash) {
          s.x[i] = px;
          s.y[i] = py;
          s.z[i] = pz;
          grid[cell_of(px, py, pz)].push_back(static_cast<std::int32_t>(i));
          placed = true;
        }
      }
      if (!placed) {
        throw GenerationError(
            "generate_system: density too high to respect the minimum separation");
      }
    }
  }

  draw_site_params(s, rng);
  return s;
}

PolarizationState random_dipoles(const ParticleSystem& system, std::uint64_t seed,
                                 double magnitude) {
  PolarizationState st;
  const std::size_t n = system.n_sites;
  st.mu_x = PaddedRealArray(n);
  st.mu_y = PaddedRealArray(n);
  st.mu_z = PaddedRealArray(n);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> u(-magnitude, magnitude);
  for (std::size_t i = 0; i < n; ++i) {
    st.mu_x[i] = u(rng);
    st.mu_y[i] = u(rng);
    st.mu_z[i] = u(rng);
  }
  return st;
}

}  // namespace mdvec
