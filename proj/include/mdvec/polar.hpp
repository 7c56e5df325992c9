#ifndef MDVEC_POLAR_HPP
#define MDVEC_POLAR_HPP

#include "mdvec/kernels.hpp"

namespace mdvec {

struct HalgrenParams {
  double cutoff = 0;
  double delta = 0.07;  // buffering constants of the 14-7 form
  double gamma = 0.12;
};

struct PolarParams {
  double cutoff = 0;
  double thole_a = 0.39;
};

struct HalgrenPair {
  double u;
  double dudrho;
};

// U = eps ((1+d)/(rho+d))^7 ((1+g)/(rho^7+g) - 2), rho = r/r0.
// U(1) = -eps exactly; the minimum sits at rho = 1 only when d = g.
inline HalgrenPair halgren_pair_core(double rho, double epsilon_ij, double delta,
                                     double gamma) noexcept {
  const double t1 = (1.0 + delta) / (rho + delta);
  const double t2 = t1 * t1;
  const double t4 = t2 * t2;
  const double t7 = t4 * t2 * t1;
  const double rho2 = rho * rho;
  const double rho3 = rho2 * rho;
  const double rho6 = rho3 * rho3;
  const double rho7 = rho6 * rho;
  const double g1 = (1.0 + gamma) / (rho7 + gamma);
  const double b = g1 - 2.0;
  return {epsilon_ij * t7 * b,
          -7.0 * epsilon_ij * t7 * (b / (rho + delta) + rho6 * g1 / (rho7 + gamma))};
}

inline HalgrenPair halgren_pair(double rho, double epsilon_ij, double delta,
                                double gamma) {
  if (!(rho > 0)) throw SingularityError("halgren_pair: zero separation");
  return halgren_pair_core(rho, epsilon_ij, delta, gamma);
}

struct TholeFactors {
  double lambda3;
  double lambda5;
};

// Exponential Thole damping: u = r/(ai aj)^(1/6), l3 = 1 - exp(-a u^3),
// l5 = 1 - (1 + a u^3) exp(-a u^3). Both -> 0 at r = 0 and -> 1 far away.
inline TholeFactors thole_factors_core(double r, double alpha_i, double alpha_j,
                                       double a) noexcept {
  const double u = r / std::cbrt(std::sqrt(alpha_i * alpha_j));
  const double au3 = a * u * u * u;
  const double ex = std::exp(-au3);
  return {1.0 - ex, 1.0 - (1.0 + au3) * ex};
}

inline TholeFactors thole_factors(double r, double alpha_i, double alpha_j,
                                  double a) {
  if (!(alpha_i > 0) || !(alpha_j > 0)) {
    throw ContractViolation("thole_factors: polarizabilities must be positive");
  }
  if (!(r >= 0) || !std::isfinite(r)) {
    throw ContractViolation("thole_factors: invalid distance");
  }
  return thole_factors_core(r, alpha_i, alpha_j, a);
}

struct FieldArrays {
  PaddedRealArray ex, ey, ez;

  explicit FieldArrays(std::size_t n_sites) : ex(n_sites), ey(n_sites), ez(n_sites) {}

  void reset() {
    std::fill(ex.data(), ex.data() + ex.padded_len(), 0.0);
    std::fill(ey.data(), ey.data() + ey.padded_len(), 0.0);
    std::fill(ez.data(), ez.data() + ez.padded_len(), 0.0);
  }
};

void halgren_forces_scalar(const ParticleSystem& system, const NeighborTable& table,
                           const HalgrenParams& params, ForceAccumulator& out);
void halgren_forces_vectorized(const ParticleSystem& system,
                               const NeighborTable& table,
                               const HalgrenParams& params, const LaneConfig& lanes,
                               PairWorkspace& ws, ForceAccumulator& out);

// E_i = sum_j rr5 (mu_j . r) r - rr3 mu_j, rr3 = l3/r^3, rr5 = 3 l5/r^5,
// r pointing from j to i. Symmetric contribution accumulated to j.
void dipole_field_matvec_scalar(const ParticleSystem& system,
                                const NeighborTable& table,
                                const PolarizationState& state,
                                const PolarParams& params, FieldArrays& out);
void dipole_field_matvec_vectorized(const ParticleSystem& system,
                                    const NeighborTable& table,
                                    const PolarizationState& state,
                                    const PolarParams& params,
                                    const LaneConfig& lanes, PairWorkspace& ws,
                                    FieldArrays& out);

// Field of the permanent charges: E_i += sum_j l3 q_j r / r^3.
void permanent_field_scalar(const ParticleSystem& system, const NeighborTable& table,
                            const PolarParams& params, FieldArrays& out);
void permanent_field_vectorized(const ParticleSystem& system,
                                const NeighborTable& table,
                                const PolarParams& params, const LaneConfig& lanes,
                                PairWorkspace& ws, FieldArrays& out);

// Fixed-point iteration mu = alpha (E_perm + T mu) to max-norm tolerance.
PolarizationState jacobi_polarization_solve(const ParticleSystem& system,
                                            const NeighborTable& table,
                                            const PolarParams& params, double tol,
                                            std::size_t max_iter);

}  // namespace mdvec

#endif
