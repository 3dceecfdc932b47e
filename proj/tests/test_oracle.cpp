#include <doctest.h>

#include <algorithm>
#include <random>

#include "latquench/commands.hpp"
#include "latquench/convergence.hpp"
#include "latquench/errors.hpp"
#include "latquench/linalg.hpp"
#include "latquench/model.hpp"
#include "latquench/oracle.hpp"

using namespace lq;

TEST_CASE("closed-form 3x3 eigenvalues against LAPACK") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<std::array<double, 3>, 3> a{};
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) a[i][j] = a[j][i] = m(i, j) = m(j, i) = u(rng);
    const auto closed = oracle::symmetric3_eigenvalues(a);
    const Vector ref = symmetric_eigenvalues(m);
    for (int i = 0; i < 3; ++i) CHECK(closed[i] == doctest::Approx(ref[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("dense oracle for two bosons on two sites") {
  const double J = 0.1, U = 0.7, eps = 0.2;
  Matrix h(2, 2);
  h << 0.0, -J, -J, eps;
  const auto w = [&](int p, int q, int r, int s) { return (p == q && q == r && r == s) ? U : 0.0; };
  const Vector dense = oracle::dense_brute_force(h, w, 2);
  const auto exact = oracle::two_site_two_boson(J, U, eps);
  REQUIRE(dense.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(dense[i] == doctest::Approx(exact[i]).epsilon(1e-12));
}

TEST_CASE("non-interacting dense spectrum is sums of orbital energies") {
  Matrix h = Matrix::Zero(3, 3);
  h.diagonal() << 0.0, 0.3, 1.1;
  const Vector e = oracle::dense_brute_force(h, [](int, int, int, int) { return 0.0; }, 2);
  std::vector<double> sums;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) sums.push_back(h(i, i) + h(j, j));
  std::sort(sums.begin(), sums.end());
  REQUIRE(static_cast<std::size_t>(e.size()) == sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(e[i] == doctest::Approx(sums[i]).scale(1.0));
}

TEST_CASE("dense oracle cap") {
  const Matrix h = Matrix::Identity(15, 15);
  CHECK_THROWS_AS(oracle::dense_brute_force(h, [](int, int, int, int) { return 0.0; }, 6), ResourceCapError);
}

TEST_CASE("dense oracle matches the sparse pipeline") {
  ModelConfig mc;
  mc.n_particles = 2;
  mc.n_bands = 2;
  mc.g = 2.0;
  const Model m(mc);
  const Vector sparse = symmetric_eigenvalues(Matrix(m.hamiltonian(0.4)));
  const Vector dense = oracle::dense_brute_force(oracle::Config{2, 3, 2, mc.n_grid, mc.v0, 2.0, 0.4});
  REQUIRE(sparse.size() == dense.size());
  CHECK((sparse - dense).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("packaged oracle checks pass") {
  for (const auto& c : oracle_checks(ModelConfig{})) {
    INFO(c.name);
    CHECK(c.pass());
  }
}

TEST_CASE("identical convergence rungs agree exactly") {
  ModelConfig mc;
  mc.n_bands = 1;
  QuenchProtocol p;
  p.t_final = 20.0;
  p.dt_sample = 0.5;
  const ConvergenceReport r = convergence_report({{"a", mc}, {"b", mc}}, p, 20.0);
  REQUIRE(r.rungs.size() == 2);
  CHECK(r.rungs[1].delta_energy == 0.0);
  CHECK(r.rungs[1].max_relative_deviation == 0.0);
  CHECK(max_relative_deviation({0.0, 1.0, 2.0}, {1.0, 2.1, 9.0}, {1.0, 2.0, 3.0}, 1.0) == doctest::Approx(0.05));
}
