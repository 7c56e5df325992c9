#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mdvec/pbc.hpp"

using namespace mdvec;

TEST_CASE("box validation") {
  OrthorhombicBox ok{10, 12, 14};
  ok.validate();
  CHECK(ok.min_edge() == 10.0);
  CHECK_THROWS_AS((OrthorhombicBox{0, 1, 1}.validate()), ContractViolation);
  CHECK_THROWS_AS((OrthorhombicBox{1, -2, 1}.validate()), ContractViolation);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((OrthorhombicBox{1, 1, inf}.validate()), ContractViolation);
}

TEST_CASE("minimum image examples") {
  OrthorhombicBox box{10, 10, 10};
  double dx = 7, dy = 0, dz = 0;
  minimum_image_scalar(dx, dy, dz, box);
  CHECK(dx == -3.0);

  dx = -6;
  minimum_image_scalar(dx, dy, dz, box);
  CHECK(dx == 4.0);

  // the boundary case maps to -L/2, never +L/2
  dx = 5;
  minimum_image_scalar(dx, dy, dz, box);
  CHECK(dx == -5.0);
  dx = -5;
  minimum_image_scalar(dx, dy, dz, box);
  CHECK(dx == -5.0);

  dx = 2.5;
  dy = -7.5;
  dz = 9.0;
  minimum_image_scalar(dx, dy, dz, box);
  CHECK(dx == 2.5);
  CHECK(dy == 2.5);
  CHECK(dz == -1.0);
}

TEST_CASE("wrapped displacement lands in [-L/2, L/2)") {
  std::mt19937_64 rng(11);
  OrthorhombicBox box{7.5, 10.0, 3.25};
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  for (int t = 0; t < 5000; ++t) {
    double dx = u(rng), dy = u(rng), dz = u(rng);
    minimum_image_scalar(dx, dy, dz, box);
    CHECK(dx >= -box.lx / 2);
    CHECK(dx < box.lx / 2);
    CHECK(dy >= -box.ly / 2);
    CHECK(dy < box.ly / 2);
    CHECK(dz >= -box.lz / 2);
    CHECK(dz < box.lz / 2);
  }
}

TEST_CASE("wrapping is idempotent") {
  std::mt19937_64 rng(12);
  OrthorhombicBox box{9.0, 9.0, 9.0};
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int t = 0; t < 2000; ++t) {
    double dx = u(rng), dy = u(rng), dz = u(rng);
    minimum_image_scalar(dx, dy, dz, box);
    double ex = dx, ey = dy, ez = dz;
    minimum_image_scalar(ex, ey, ez, box);
    CHECK(ex == dx);
    CHECK(ey == dy);
    CHECK(ez == dz);
  }
}

TEST_CASE("invariant under whole-box translations") {
  std::mt19937_64 rng(13);
  OrthorhombicBox box{8.0, 8.0, 8.0};
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int t = 0; t < 500; ++t) {
    double dx0 = u(rng), dy0 = u(rng), dz0 = u(rng);
    double rx = dx0, ry = dy0, rz = dz0;
    minimum_image_scalar(rx, ry, rz, box);
    for (int k = -4; k <= 4; ++k) {
      double dx = dx0 + k * box.lx, dy = dy0 + k * box.ly, dz = dz0 + k * box.lz;
      minimum_image_scalar(dx, dy, dz, box);
      CHECK(dx == doctest::Approx(rx).epsilon(1e-12));
      CHECK(dy == doctest::Approx(ry).epsilon(1e-12));
      CHECK(dz == doctest::Approx(rz).epsilon(1e-12));
    }
  }
}

TEST_CASE("batch path is bit-identical to the scalar path") {
  std::mt19937_64 rng(14);
  OrthorhombicBox box{6.0, 11.0, 17.5};
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  const std::size_t n = 1000;
  PaddedRealArray dxs(n, 16), dys(n, 16), dzs(n, 16);
  std::vector<double> sx(n), sy(n), sz(n);
  for (std::size_t k = 0; k < n; ++k) {
    dxs[k] = sx[k] = u(rng);
    dys[k] = sy[k] = u(rng);
    dzs[k] = sz[k] = u(rng);
  }
  minimum_image_batch(dxs, dys, dzs, box);
  for (std::size_t k = 0; k < n; ++k) {
    minimum_image_scalar(sx[k], sy[k], sz[k], box);
    CHECK(dxs[k] == sx[k]);
    CHECK(dys[k] == sy[k]);
    CHECK(dzs[k] == sz[k]);
  }
  // padded slots stay finite
  for (std::size_t k = n; k < dxs.padded_len(); ++k) {
    CHECK(std::isfinite(dxs[k]));
    CHECK(std::isfinite(dys[k]));
    CHECK(std::isfinite(dzs[k]));
  }
}

TEST_CASE("scalar path rejects non-finite input") {
  OrthorhombicBox box{10, 10, 10};
  double nan = std::numeric_limits<double>::quiet_NaN();
  double dy = 0, dz = 0;
  CHECK_THROWS_AS(minimum_image_scalar(nan, dy, dz, box), ContractViolation);
}

TEST_CASE("dist2 matches the plain formula") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 1000; ++t) {
    double dx = u(rng), dy = u(rng), dz = u(rng);
    double r2 = pbc::dist2(dx, dy, dz);
    CHECK(r2 == doctest::Approx(dx * dx + dy * dy + dz * dz).epsilon(1e-14));
    CHECK(r2 >= 0);
  }
}
