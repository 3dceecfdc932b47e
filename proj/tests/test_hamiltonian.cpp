#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "latquench/errors.hpp"
#include "latquench/hamiltonian.hpp"
#include "latquench/linalg.hpp"
#include "latquench/model.hpp"
#include "latquench/oracle.hpp"

using namespace lq;

namespace {

ModelConfig small(int n, int nb, double g) {
  ModelConfig mc;
  mc.n_particles = n;
  mc.n_bands = nb;
  mc.g = g;
  return mc;
}

}  // namespace

TEST_CASE("many-body Hamiltonian is symmetric and commutes with the reflection") {
  const Model m(small(4, 3, 1.0));
  const SparseMatrix h = m.hamiltonian(0.5);
  const SparseMatrix ht = h.transpose();
  CHECK((Matrix(h) - Matrix(ht)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(commutator_norm(h, m.reflection()) < 1e-10);
}

TEST_CASE("parity blocks reproduce the full spectrum") {
  const Model m(small(3, 2, 1.0));
  const Vector full = symmetric_eigenvalues(Matrix(m.hamiltonian(0.3)));
  const Vector even = symmetric_eigenvalues(m.block(0.3, Parity::Even));
  const Vector odd = symmetric_eigenvalues(m.block(0.3, Parity::Odd));
  std::vector<double> merged(even.data(), even.data() + even.size());
  merged.insert(merged.end(), odd.data(), odd.data() + odd.size());
  std::sort(merged.begin(), merged.end());
  REQUIRE(merged.size() == static_cast<std::size_t>(full.size()));
  for (std::size_t i = 0; i < merged.size(); ++i) CHECK(merged[i] == doctest::Approx(full[i]).epsilon(1e-10));
}

TEST_CASE("non-interacting spectrum is sums of one-body energies") {
  const Model m(small(2, 2, 0.0));
  const Matrix h1 = m.one_body(0.4);
  const Vector e1 = symmetric_eigenvalues(h1);
  std::vector<double> sums;
  for (int i = 0; i < e1.size(); ++i)
    for (int j = i; j < e1.size(); ++j) sums.push_back(e1[i] + e1[j]);
  std::sort(sums.begin(), sums.end());
  const Vector e = symmetric_eigenvalues(Matrix(m.hamiltonian(0.4)));
  REQUIRE(static_cast<std::size_t>(e.size()) == sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(e[i] == doctest::Approx(sums[i]).epsilon(1e-10));
}

TEST_CASE("two bosons on two sites match the closed form") {
  const FockBasis basis(2, OrbitalLayout{2, 1});
  const double J = 0.07, U = 0.9, eps = 0.25;
  Matrix h(2, 2);
  h << 0.0, -J, -J, eps;
  TwoBodyIntegrals w(2);
  w(0, 0, 0, 0) = U;
  w(1, 1, 1, 1) = U;
  const Vector e = symmetric_eigenvalues(Matrix(assemble_operator(basis, h, &w).matrix));
  const auto exact = oracle::two_site_two_boson(J, U, eps);
  for (int i = 0; i < 3; ++i) CHECK(e[i] == doctest::Approx(exact[i]).epsilon(1e-12));
}

TEST_CASE("identity one-body matrix gives the number operator") {
  const FockBasis basis(3, OrbitalLayout{3, 2});
  const SparseMatrix n = assemble_operator(basis, Matrix::Identity(6, 6)).matrix;
  CHECK((Matrix(n) - 3.0 * Matrix::Identity(n.rows(), n.cols())).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("assembly does not depend on the thread count") {
  const Model m(small(3, 3, 1.0));
  const Integrals& in = m.integrals();
  const SparseMatrix a = assemble_operator(m.basis(), in.one.h, &in.two, 1).matrix;
  const SparseMatrix b = assemble_operator(m.basis(), in.one.h, &in.two, 3).matrix;
  REQUIRE(a.nonZeros() == b.nonZeros());
  CHECK((Matrix(a) - Matrix(b)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nonzero cap raises a resource error") {
  const Model m(small(3, 2, 1.0));
  const Integrals& in = m.integrals();
  CHECK_THROWS_AS(assemble_operator(m.basis(), in.one.h, &in.two, 1, 10), ResourceCapError);
}

TEST_CASE("a parity-breaking operator is rejected") {
  const Model m(small(2, 1, 1.0));
  Matrix h = m.one_body(0.0);
  h(0, 0) += 0.1;
  const ManyBodyOperator op = assemble_operator(m.basis(), h);
  CHECK_THROWS_AS(parity_blocks(op, m.parity_basis(), m.reflection()), SymmetryError);
}

TEST_CASE("locating labels in the parity basis") {
  const Model m(small(4, 1, 1.0));
  const OrbitalLayout& layout = m.layout();
  const auto loc = m.parity_basis().locate(parse_label("|1,3,0>_S", layout), m.basis(), m.parity());
  REQUIRE(loc.has_value());
  CHECK(loc->even);
  CHECK(loc->amplitude == doctest::Approx(1.0));
  const auto a = m.parity_basis().locate(parse_label("|1,3,0>_A", layout), m.basis(), m.parity());
  REQUIRE(a.has_value());
  CHECK_FALSE(a->even);
  const auto plain = m.parity_basis().locate(parse_label("|1,3,0>", layout), m.basis(), m.parity());
  REQUIRE(plain.has_value());
  CHECK(std::abs(plain->amplitude) == doctest::Approx(1.0 / std::sqrt(2.0)));
  const auto centre = m.parity_basis().locate(parse_label("|1,2,1>", layout), m.basis(), m.parity());
  REQUIRE(centre.has_value());
  CHECK(centre->even);
  CHECK(centre->amplitude == doctest::Approx(1.0));
  // a combination of a self-mirrored state does not exist
  CHECK_FALSE(m.parity_basis().locate(parse_label("|1,2,1>_A", layout), m.basis(), m.parity()).has_value());
}
