#include <doctest.h>

#include <cmath>

#include "latquench/bhm.hpp"
#include "latquench/linalg.hpp"
#include "latquench/model.hpp"
#include "latquench/oracle.hpp"

using namespace lq;

namespace {

BhmParams params(double J, double U, double eps, int sites = 3) {
  BhmParams p;
  p.J = J;
  p.U = U;
  p.eps = eps;
  p.e0 = 0.4;
  p.n_sites = sites;
  return p;
}

NumberState st(std::vector<int> v) { return NumberState{std::move(v)}; }

}  // namespace

TEST_CASE("J = 0 Hamiltonian is diagonal with the affine energies") {
  const BhmParams p = params(0.0, 0.7, 0.31);
  const FockBasis basis(4, OrbitalLayout{3, 1});
  const Matrix h = Matrix(assemble_bhm(basis, p).matrix);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const DiagonalEnergy d = diagonal_energy(basis.state(i), p);
    CHECK(h(i, i) == doctest::Approx(d.intercept + d.slope * p.eps).epsilon(1e-13));
  }
  CHECK((h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("diagonal crossings in units of U") {
  const BhmParams p = params(0.05, 0.8, 0.0);
  CHECK(diagonal_crossing(st({1, 2, 1}), st({1, 3, 0}), p) / p.U == doctest::Approx(2.0));
  CHECK(diagonal_crossing(st({0, 4, 0}), st({1, 3, 0}), p) / p.U == doctest::Approx(3.0));
  CHECK_THROWS_AS(diagonal_crossing(st({1, 3, 0}), st({0, 3, 1}), p), std::domain_error);
}

TEST_CASE("coupling between a centred pair state and a symmetric triplet") {
  const BhmParams p = params(0.05, 0.8, 0.2);
  const FockBasis basis(4, OrbitalLayout{3, 1});
  const double c = bhm_matrix_element({st({1, 2, 1}), Combination::None}, {st({1, 3, 0}), Combination::Symmetric},
                                      basis, p);
  CHECK(c / p.J == doctest::Approx(-std::sqrt(6.0)).epsilon(1e-12));
  const double a = bhm_matrix_element({st({1, 2, 1}), Combination::None},
                                      {st({1, 3, 0}), Combination::Antisymmetric}, basis, p);
  CHECK(std::abs(a) < 1e-14);
  CHECK_THROWS_AS(bhm_matrix_element({st({1, 2, 1}), Combination::Symmetric}, {st({1, 3, 0}), Combination::None},
                                     basis, p),
                  std::invalid_argument);
}

TEST_CASE("two-site BHM matches the closed form") {
  const FockBasis basis(2, OrbitalLayout{2, 1});
  for (const auto& [J, U, eps] : std::vector<std::array<double, 3>>{{0.1, 1.0, 0.3}, {1.0, 0.0, 0.0}}) {
    BhmParams p = params(J, U, eps, 2);
    p.e0 = 0.0;
    const Vector e = symmetric_eigenvalues(Matrix(assemble_bhm(basis, p).matrix));
    const auto exact = oracle::two_site_two_boson(J, U, eps);
    for (int i = 0; i < 3; ++i) CHECK(e[i] == doctest::Approx(exact[i]).epsilon(1e-12));
  }
}

TEST_CASE("closed form limits") {
  const auto free = oracle::two_site_two_boson(1.0, 0.0, 0.0);
  CHECK(free[0] == doctest::Approx(-2.0));
  CHECK(std::abs(free[1]) < 1e-12);
  CHECK(free[2] == doctest::Approx(2.0));
  const auto strong = oracle::two_site_two_boson(0.01, 1.0, 0.0);
  CHECK(strong[0] == doctest::Approx(-4e-4).epsilon(1e-3));
}

TEST_CASE("parameters extracted from the lattice") {
  ModelConfig mc;
  mc.n_bands = 1;
  const Model m(mc);
  const auto& in = m.integrals();
  const BhmParams p0 = extract_params(in.one, in.two, 0.0, 3);
  CHECK(p0.J > 0.0);
  CHECK(p0.U > 0.0);
  CHECK(p0.hopping_asymmetry < 1e-10);
  CHECK(p0.eps == doctest::Approx(p0.eps_wall));
  CHECK(p0.eps_per_omega_sq > 0.0);
  const BhmParams p1 = extract_params(in.one, in.two, 0.5, 3);
  CHECK(p1.eps == doctest::Approx(p0.eps_wall + 0.5 * p0.eps_per_omega_sq));
  CHECK(p1.U == doctest::Approx(p0.U));
}
