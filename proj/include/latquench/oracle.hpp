#pragma once

// Reference computations that share no code with the many-body assembly:
// a closed-form two-site model and a first-quantised dense Hamiltonian.

#include <array>
#include <functional>
#include <vector>

#include "latquench/grid_dvr.hpp"
#include "latquench/orbitals.hpp"

namespace lq::oracle {

/// Eigenvalues (ascending) of two bosons on two sites with hopping J,
/// on-site U and offset eps on the second site:
///   [[U, -sqrt2 J, 0], [-sqrt2 J, eps, -sqrt2 J], [0, -sqrt2 J, U + 2 eps]]
/// in the basis |2,0>, |1,1>, |0,2>, solved by the trigonometric cubic.
std::array<double, 3> two_site_two_boson(double J, double U, double eps);

/// Closed-form eigenvalues of a real symmetric 3x3 matrix, ascending.
std::array<double, 3> symmetric3_eigenvalues(const std::array<std::array<double, 3>, 3>& a);

/// h_pq and W_pqrs by plain quadrature loops.
struct Integrals {
  Matrix h;
  std::vector<double> w;  // M^4, row-major
  int m = 0;

  double W(int p, int q, int r, int s) const { return w[((p * m + q) * m + r) * m + s]; }
};
Integrals integrals(const OrbitalSet& orbitals, const Grid& grid, const PotentialSpec& spec);

inline constexpr int kDenseCap = 5000;

/// Full spectrum of sum_i h(i) + sum_{i<j} V(i,j) over symmetrised
/// products of N orbitals, built element by element. Throws
/// ResourceCapError above kDenseCap states.
Vector dense_brute_force(const Matrix& h, const std::function<double(int, int, int, int)>& w, int n_particles);

struct Config {
  int n_particles = 4;
  int n_sites = 3;
  int n_bands = 3;
  int n_grid = 300;
  double v0 = 9.0;
  double g = 1.0;
  double omega_sq = 0.0;
};

/// Grid -> bare-lattice Wannier orbitals -> integrals -> dense spectrum at
/// omega_sq.
Vector dense_brute_force(const Config& config);

}  // namespace lq::oracle
