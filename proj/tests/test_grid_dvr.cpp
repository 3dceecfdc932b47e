#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latquench/errors.hpp"
#include "latquench/grid_dvr.hpp"
#include "latquench/linalg.hpp"

using namespace lq;

TEST_CASE("grid is symmetric with uniform weight") {
  const Grid g = build_grid(300, 3);
  const double half = 1.5 * std::numbers::pi;
  CHECK(g.x_min == doctest::Approx(-half));
  CHECK(g.x_max == doctest::Approx(half));
  CHECK(g.weight == doctest::Approx(g.length() / 301.0));
  for (int j = 0; j < g.n_points; ++j) CHECK(g.points[j] == doctest::Approx(-g.points[g.mirror(j)]).epsilon(1e-14));
  CHECK(g.points.front() > g.x_min);
  CHECK(g.points.back() < g.x_max);
}

TEST_CASE("free particle in a box is exact in the sine basis") {
  const Grid g = build_grid(120, 3);
  const Vector e = symmetric_eigenvalues(kinetic_matrix(g));
  for (int k = 1; k <= 20; ++k) {
    const double exact = std::pow(k * std::numbers::pi / g.length(), 2);
    CHECK(e[k - 1] == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("pure harmonic trap gives omega (n + 1/2)") {
  PotentialSpec spec;
  spec.v0 = 0.0;
  spec.omega_sq = 0.8;
  spec.n_sites = 9;
  const Grid g = build_grid(400, 9);
  const OrbitalSet e = single_particle_eigs(g, spec, 6);
  const double w = std::sqrt(spec.omega_sq);
  for (int n = 0; n < 6; ++n) CHECK(e.energies[n] == doctest::Approx(w * (n + 0.5)).epsilon(1e-7));
}

TEST_CASE("triple well at V0 = 9: band structure in recoil units") {
  PotentialSpec spec;
  const Grid g = build_grid(300, 3);
  const OrbitalSet e = single_particle_eigs(g, spec, 10);
  // lowest band: three states within 0.1 E_R, well separated from the next
  CHECK(e.energies[2] - e.energies[0] < 0.1);
  CHECK(e.energies[3] - e.energies[2] > 4.0);
  CHECK(e.energies[5] - e.energies[3] < 1.0);
  CHECK(e.energies[6] - e.energies[5] > 2.0);
  int below = 0;
  for (double v : e.energies) below += v < spec.v0 ? 1 : 0;
  CHECK(below == 6);
}

TEST_CASE("eigenvectors are normalised parity eigenstates with alternating parity") {
  PotentialSpec spec;
  const Grid g = build_grid(300, 3);
  const OrbitalSet e = single_particle_eigs(g, spec, 9);
  const Matrix s = e.overlap();
  CHECK((s - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);
  for (int i = 0; i < 9; ++i) {
    double refl = 0.0;
    for (int j = 0; j < g.n_points; ++j) refl += g.weight * e.vectors(j, i) * e.vectors(g.mirror(j), i);
    CHECK(std::abs(std::abs(refl) - 1.0) < 1e-10);
    CHECK(refl == doctest::Approx(i % 2 == 0 ? 1.0 : -1.0));
  }
}

TEST_CASE("grid convergence of the lowest level") {
  PotentialSpec spec;
  const double e300 = single_particle_eigs(build_grid(300, 3), spec, 1).energies[0];
  const double e400 = single_particle_eigs(build_grid(400, 3), spec, 1).energies[0];
  CHECK(std::abs(e300 - e400) < 1e-8);
}

TEST_CASE("potential sampling and region weights") {
  PotentialSpec spec;
  spec.omega_sq = 0.4;
  const Grid g = build_grid(11, 3);
  const Vector v = potential_on_grid(g, spec);
  for (int j = 0; j < g.n_points; ++j) {
    const double x = g.points[j];
    CHECK(v[j] == doctest::Approx(9.0 * std::sin(x) * std::sin(x) + 0.1 * x * x));
  }
  const Vector all = region_weights(g, std::nullopt);
  CHECK(all.sum() == doctest::Approx(g.weight * g.n_points));
  // an edge exactly on a grid point gets half weight
  const Vector half = region_weights(g, Interval{g.points[5], g.x_max});
  CHECK(half[5] == doctest::Approx(0.5 * g.weight));
  CHECK(half[4] == 0.0);
  CHECK(half[6] == doctest::Approx(g.weight));
}

TEST_CASE("potential validation") {
  PotentialSpec spec;
  spec.n_sites = 4;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.n_sites = 3;
  spec.omega_sq = -0.1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
