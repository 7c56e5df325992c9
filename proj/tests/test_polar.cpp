#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mdvec/polar.hpp"

using namespace mdvec;

namespace {

NeighborTable make_table(const ParticleSystem& s, double cutoff,
                         std::size_t extra_pad = 0) {
  CellGrid g = build_cell_grid(s, cutoff);
  return build_neighbor_table(s, g, cutoff, extra_pad);
}

ParticleSystem bare_system(std::size_t n, double box_len) {
  ParticleSystem s;
  s.box = {box_len, box_len, box_len};
  s.n_sites = n;
  for (auto* a : {&s.x, &s.y, &s.z, &s.charge, &s.lj_sigma, &s.lj_epsilon,
                  &s.hal_r0, &s.hal_epsilon, &s.polarizability}) {
    *a = PaddedRealArray(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.lj_sigma[i] = s.lj_epsilon[i] = 1.0;
    s.hal_r0[i] = s.hal_epsilon[i] = 1.0;
    s.polarizability[i] = 1.0;
  }
  return s;
}

double field_rel(const FieldArrays& a, const FieldArrays& b, std::size_t n) {
  double scale = 1e-300, worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto* e : {&a.ex, &a.ey, &a.ez}) {
      scale = std::max(scale, std::abs((*e)[i]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(a.ex[i] - b.ex[i]) / scale);
    worst = std::max(worst, std::abs(a.ey[i] - b.ey[i]) / scale);
    worst = std::max(worst, std::abs(a.ez[i] - b.ez[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("buffered 14-7 closed-form values") {
  // U(1) = -eps exactly for any buffering constants
  for (double d : {0.07, 0.0, 0.3}) {
    for (double g : {0.12, 0.0, 0.3}) {
      HalgrenPair p = halgren_pair(1.0, 2.5, d, g);
      CHECK(p.u == doctest::Approx(-2.5).epsilon(1e-15));
    }
  }

  HalgrenPair p = halgren_pair(1.5, 1.0, 0.07, 0.12);
  CHECK(p.u == doctest::Approx(-0.13214440848300467).epsilon(1e-14));
  CHECK(p.dudrho == doctest::Approx(0.5685775350898349).epsilon(1e-13));

  // with the standard constants the derivative at rho = 1 is nonzero
  HalgrenPair q = halgren_pair(1.0, 1.0, 0.07, 0.12);
  CHECK(q.dudrho == doctest::Approx(0.29205607476635514).epsilon(1e-13));

  // equal buffering constants put the minimum exactly at rho = 1
  HalgrenPair m = halgren_pair(1.0, 1.0, 0.1, 0.1);
  CHECK(std::abs(m.dudrho) < 1e-14);

  // fast decay at long range
  HalgrenPair far = halgren_pair(10.0, 1.0, 0.07, 0.12);
  CHECK(far.u == doctest::Approx(-3.0585e-7).epsilon(1e-3));
  CHECK(std::abs(far.u) < 1e-6);

  CHECK_THROWS_AS(halgren_pair(0.0, 1.0, 0.07, 0.12), SingularityError);
}

TEST_CASE("buffered 14-7 derivative matches finite differences") {
  const double h = 1e-7;
  for (double rho : {0.8, 1.0, 1.3, 2.0, 4.0}) {
    HalgrenPair p = halgren_pair(rho, 1.7, 0.07, 0.12);
    double num = (halgren_pair(rho + h, 1.7, 0.07, 0.12).u -
                  halgren_pair(rho - h, 1.7, 0.07, 0.12).u) /
                 (2 * h);
    CHECK(p.dudrho == doctest::Approx(num).epsilon(1e-6));
  }
}

TEST_CASE("thole damping factors") {
  TholeFactors f = thole_factors(2.0, 1.0, 1.0, 0.39);
  CHECK(f.lambda3 == doctest::Approx(0.9558428315803071).epsilon(1e-15));
  CHECK(f.lambda5 == doctest::Approx(0.8180724661108654).epsilon(1e-15));

  // limits: fully damped at contact, undamped far away
  TholeFactors zero = thole_factors(0.0, 1.0, 1.0, 0.39);
  CHECK(zero.lambda3 == 0.0);
  CHECK(zero.lambda5 == 0.0);
  TholeFactors far = thole_factors(50.0, 1.0, 1.0, 0.39);
  CHECK(far.lambda3 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(far.lambda5 == doctest::Approx(1.0).epsilon(1e-12));

  // ordering property 0 <= l5 <= l3 <= 1
  for (double r = 0.0; r <= 6.0; r += 0.05) {
    TholeFactors t = thole_factors(r, 1.3, 0.8, 0.39);
    CHECK(t.lambda5 >= 0.0);
    CHECK(t.lambda5 <= t.lambda3);
    CHECK(t.lambda3 <= 1.0);
  }

  CHECK_THROWS_AS(thole_factors(1.0, 0.0, 1.0, 0.39), ContractViolation);
  CHECK_THROWS_AS(thole_factors(-1.0, 1.0, 1.0, 0.39), ContractViolation);
}

TEST_CASE("dipole field of a single source by hand") {
  // Site 1 at distance 2 along z from site 0, mu_1 = (0, 0, 1), no damping
  // (large separation-scaled damping via tiny polarizabilities is avoided by
  // using a large a so lambda ~ 1 at r = 2).
  ParticleSystem s = bare_system(2, 10.0);
  s.x[0] = s.y[0] = s.z[0] = 2.0;
  s.x[1] = 2.0;
  s.y[1] = 2.0;
  s.z[1] = 4.0;
  NeighborTable t = make_table(s, 3.0);

  PolarizationState st = random_dipoles(s, 1, 0.0);
  st.mu_x[1] = 0.0;
  st.mu_y[1] = 0.0;
  st.mu_z[1] = 1.0;
  st.thole_a = 1e9;  // damping comes from the state; ~1 at r = 2

  PolarParams p{3.0, 1e9};
  FieldArrays f(2);
  f.reset();
  dipole_field_matvec_scalar(s, t, st, p, f);
  // axial field of a point dipole: E = 2 mu / r^3 = 0.25 along z
  CHECK(f.ex[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.ey[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.ez[0] == doctest::Approx(0.25).epsilon(1e-12));

  // transverse geometry: source dipole perpendicular to the separation
  st.mu_z[1] = 0.0;
  st.mu_x[1] = 1.0;
  f.reset();
  dipole_field_matvec_scalar(s, t, st, p, f);
  // E = -mu / r^3 = -1/8 along x
  CHECK(f.ex[0] == doctest::Approx(-0.125).epsilon(1e-12));
  CHECK(f.ey[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.ez[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("permanent field of a single charge by hand") {
  ParticleSystem s = bare_system(2, 10.0);
  s.x[0] = s.y[0] = s.z[0] = 2.0;
  s.x[1] = 2.0;
  s.y[1] = 2.0;
  s.z[1] = 4.0;
  s.charge[0] = -3.0;
  s.charge[1] = 3.0;
  NeighborTable t = make_table(s, 3.0);
  PolarParams p{3.0, 1e9};
  FieldArrays f(2);
  f.reset();
  permanent_field_scalar(s, t, p, f);
  // E_0 = q_1 r_hat / r^2 pointing from the source toward site 0: -z
  CHECK(f.ez[0] == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.ez[1] == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.ex[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("field kernels: scalar and vectorized paths agree") {
  LaneConfig lanes;
  PairWorkspace ws;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (std::size_t n : {24u, 90u, 260u}) {
      ParticleSystem s =
          generate_system(SystemKind::kUniformRandom, n, {12.0, 12.0, 12.0}, seed);
      NeighborTable t = make_table(s, 3.4);
      PolarParams p{3.0, 0.39};
      PolarizationState st = random_dipoles(s, seed + 100);

      FieldArrays a(n), b(n);
      a.reset();
      b.reset();
      dipole_field_matvec_scalar(s, t, st, p, a);
      dipole_field_matvec_vectorized(s, t, st, p, lanes, ws, b);
      CHECK(field_rel(a, b, n) <= 1e-9);

      a.reset();
      b.reset();
      permanent_field_scalar(s, t, p, a);
      permanent_field_vectorized(s, t, p, lanes, ws, b);
      CHECK(field_rel(a, b, n) <= 1e-9);

      ForceAccumulator fa(n), fb(n);
      fa.reset();
      fb.reset();
      HalgrenParams hp{3.0};
      halgren_forces_scalar(s, t, hp, fa);
      halgren_forces_vectorized(s, t, hp, lanes, ws, fb);
      double scale = std::max(std::abs(fa.energy), std::abs(fb.energy));
      CHECK(std::abs(fa.energy - fb.energy) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("halgren forces match finite differences") {
  const double h = 1e-6;
  ParticleSystem s =
      generate_system(SystemKind::kUniformRandom, 10, {8.0, 8.0, 8.0}, 55);
  HalgrenParams hp{3.0};
  auto energy = [&](ParticleSystem& sys) {
    NeighborTable t = make_table(sys, 3.4);
    ForceAccumulator f(sys.n_sites);
    f.reset();
    halgren_forces_scalar(sys, t, hp, f);
    return f.energy;
  };
  NeighborTable t = make_table(s, 3.4);
  ForceAccumulator f(s.n_sites);
  f.reset();
  halgren_forces_scalar(s, t, hp, f);
  for (std::size_t i = 0; i < s.n_sites; ++i) {
    for (int axis = 0; axis < 3; ++axis) {
      PaddedRealArray& coord = axis == 0 ? s.x : axis == 1 ? s.y : s.z;
      double saved = coord[i];
      coord[i] = saved + h;
      double up = energy(s);
      coord[i] = saved - h;
      double dn = energy(s);
      coord[i] = saved;
      double num = -(up - dn) / (2 * h);
      double fc = axis == 0 ? f.fx[i] : axis == 1 ? f.fy[i] : f.fz[i];
      CHECK(std::abs(num - fc) <= 1e-5 * std::max(1.0, std::abs(fc)));
    }
  }
}

TEST_CASE("dipole field is linear in the dipoles") {
  ParticleSystem s =
      generate_system(SystemKind::kUniformRandom, 40, {10.0, 10.0, 10.0}, 3);
  NeighborTable t = make_table(s, 3.0);
  PolarParams p{3.0, 0.39};
  PolarizationState a = random_dipoles(s, 1);
  PolarizationState b = random_dipoles(s, 2);
  PolarizationState sum = random_dipoles(s, 1);
  for (std::size_t i = 0; i < s.n_sites; ++i) {
    sum.mu_x[i] = 2.0 * a.mu_x[i] + b.mu_x[i];
    sum.mu_y[i] = 2.0 * a.mu_y[i] + b.mu_y[i];
    sum.mu_z[i] = 2.0 * a.mu_z[i] + b.mu_z[i];
  }
  FieldArrays fa(s.n_sites), fb(s.n_sites), fs(s.n_sites);
  fa.reset();
  fb.reset();
  fs.reset();
  dipole_field_matvec_scalar(s, t, a, p, fa);
  dipole_field_matvec_scalar(s, t, b, p, fb);
  dipole_field_matvec_scalar(s, t, sum, p, fs);
  for (std::size_t i = 0; i < s.n_sites; ++i) {
    CHECK(fs.ex[i] == doctest::Approx(2 * fa.ex[i] + fb.ex[i]).epsilon(1e-11));
    CHECK(fs.ez[i] == doctest::Approx(2 * fa.ez[i] + fb.ez[i]).epsilon(1e-11));
  }
}

TEST_CASE("interaction matrix is symmetric") {
  // Build T column by column with unit dipoles; T must equal its transpose.
  ParticleSystem s =
      generate_system(SystemKind::kUniformRandom, 15, {9.0, 9.0, 9.0}, 6);
  NeighborTable t = make_table(s, 3.0);
  PolarParams p{3.0, 0.39};
  const std::size_t n = 3 * s.n_sites;
  std::vector<std::vector<double>> T(n, std::vector<double>(n, 0.0));
  PolarizationState st = random_dipoles(s, 1, 0.0);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < s.n_sites; ++i) {
      st.mu_x[i] = col == 3 * i + 0 ? 1.0 : 0.0;
      st.mu_y[i] = col == 3 * i + 1 ? 1.0 : 0.0;
      st.mu_z[i] = col == 3 * i + 2 ? 1.0 : 0.0;
    }
    FieldArrays f(s.n_sites);
    f.reset();
    dipole_field_matvec_scalar(s, t, st, p, f);
    for (std::size_t i = 0; i < s.n_sites; ++i) {
      T[3 * i + 0][col] = f.ex[i];
      T[3 * i + 1][col] = f.ey[i];
      T[3 * i + 2][col] = f.ez[i];
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      CHECK(std::abs(T[r][c] - T[c][r]) <= 1e-14);
    }
  }
}

TEST_CASE("fixed-point polarization solve matches a dense direct solve") {
  for (std::size_t nsites : {6u, 15u}) {
    ParticleSystem s =
        generate_system(SystemKind::kUniformRandom, nsites, {9.0, 9.0, 9.0}, 21);
    NeighborTable t = make_table(s, 3.0);
    PolarParams p{3.0, 0.39};

    PolarizationState mu = jacobi_polarization_solve(s, t, p, 1e-12, 500);

    // dense (I - alpha T) mu = alpha E_perm by Gaussian elimination
    const std::size_t n = 3 * nsites;
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    PolarizationState unit = random_dipoles(s, 1, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
      for (std::size_t i = 0; i < nsites; ++i) {
        unit.mu_x[i] = col == 3 * i + 0 ? 1.0 : 0.0;
        unit.mu_y[i] = col == 3 * i + 1 ? 1.0 : 0.0;
        unit.mu_z[i] = col == 3 * i + 2 ? 1.0 : 0.0;
      }
      FieldArrays f(nsites);
      f.reset();
      dipole_field_matvec_scalar(s, t, unit, p, f);
      for (std::size_t i = 0; i < nsites; ++i) {
        double alpha = s.polarizability[i];
        A[3 * i + 0][col] = (3 * i + 0 == col ? 1.0 : 0.0) - alpha * f.ex[i];
        A[3 * i + 1][col] = (3 * i + 1 == col ? 1.0 : 0.0) - alpha * f.ey[i];
        A[3 * i + 2][col] = (3 * i + 2 == col ? 1.0 : 0.0) - alpha * f.ez[i];
      }
    }
    FieldArrays ep(nsites);
    ep.reset();
    permanent_field_scalar(s, t, p, ep);
    for (std::size_t i = 0; i < nsites; ++i) {
      A[3 * i + 0][n] = s.polarizability[i] * ep.ex[i];
      A[3 * i + 1][n] = s.polarizability[i] * ep.ey[i];
      A[3 * i + 2][n] = s.polarizability[i] * ep.ez[i];
    }
    // partial-pivot elimination
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < n; ++r) {
        if (std::abs(A[r][k]) > std::abs(A[piv][k])) piv = r;
      }
      std::swap(A[k], A[piv]);
      REQUIRE(std::abs(A[k][k]) > 1e-14);
      for (std::size_t r = k + 1; r < n; ++r) {
        double m = A[r][k] / A[k][k];
        for (std::size_t c = k; c <= n; ++c) A[r][c] -= m * A[k][c];
      }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
      double v = A[k][n];
      for (std::size_t c = k + 1; c < n; ++c) v -= A[k][c] * x[c];
      x[k] = v / A[k][k];
    }

    double worst = 0, scale = 1e-300;
    for (std::size_t i = 0; i < nsites; ++i) {
      scale = std::max({scale, std::abs(x[3 * i]), std::abs(x[3 * i + 1]),
                        std::abs(x[3 * i + 2])});
      worst = std::max({worst, std::abs(mu.mu_x[i] - x[3 * i]),
                        std::abs(mu.mu_y[i] - x[3 * i + 1]),
                        std::abs(mu.mu_z[i] - x[3 * i + 2])});
    }
    CHECK(worst / scale <= 1e-8);

    // and the fixed point really is one: mu = alpha (E_perm + T mu)
    FieldArrays ft(nsites);
    ft.reset();
    dipole_field_matvec_scalar(s, t, mu, p, ft);
    for (std::size_t i = 0; i < nsites; ++i) {
      double alpha = s.polarizability[i];
      CHECK(std::abs(mu.mu_x[i] - alpha * (ep.ex[i] + ft.ex[i])) <= 1e-10);
      CHECK(std::abs(mu.mu_y[i] - alpha * (ep.ey[i] + ft.ey[i])) <= 1e-10);
      CHECK(std::abs(mu.mu_z[i] - alpha * (ep.ez[i] + ft.ez[i])) <= 1e-10);
    }
  }
}

TEST_CASE("polarization solve reports non-convergence") {
  ParticleSystem s =
      generate_system(SystemKind::kUniformRandom, 30, {9.0, 9.0, 9.0}, 13);
  NeighborTable t = make_table(s, 3.0);
  PolarParams p{3.0, 0.39};
  CHECK_THROWS_AS(jacobi_polarization_solve(s, t, p, 1e-300, 2), ConvergenceError);
  try {
    jacobi_polarization_solve(s, t, p, 1e-300, 2);
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual > 0);
  }
}
