#pragma once

// Sine-DVR discretisation of a hard-wall box and the single-particle
// lattice-plus-trap Hamiltonian.
//
// Units throughout the library: energies in the recoil energy E_R, lengths
// in 1/k, times in hbar/E_R. In these units the one-body Hamiltonian is
//   h = -d^2/dx^2 + v0 sin^2(x) + (omega_sq / 4) x^2.

#include <optional>
#include <string>
#include <vector>

#include "latquench/linalg.hpp"

namespace lq {

struct Grid {
  int n_points = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<double> points;  // interior points, strictly increasing
  double weight = 0.0;         // uniform quadrature weight == spacing

  double length() const { return x_max - x_min; }
  /// Index of the mirror-image point x -> -x.
  int mirror(int j) const { return n_points - 1 - j; }
};

struct PotentialSpec {
  double v0 = 9.0;        // lattice depth, E_R
  double omega_sq = 0.0;  // trap curvature, E_R^2 / hbar^2
  int n_sites = 3;        // odd, centre well at x = 0
  double g = 1.0;         // contact coupling, E_R / k

  void validate() const;
};

/// Closed interval [lo, hi] used for region-restricted quadrature.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Quadrature weights restricted to `region`: full weight strictly inside,
/// half weight for points lying on an edge, zero outside.
Vector region_weights(const Grid& grid, const std::optional<Interval>& region);

/// Interior sin-DVR grid on (-S pi/2, S pi/2).
Grid build_grid(int n_points, int n_sites);

/// Matrix of -d^2/dx^2 with hard walls, exact within the sine basis.
Matrix kinetic_matrix(const Grid& grid);

/// v0 sin^2(x) + (omega_sq/4) x^2 at every grid point.
Vector potential_on_grid(const Grid& grid, const PotentialSpec& spec);

enum class BasisKind { Eigen, Wannier };

/// A set of real single-particle orbitals sampled on a grid.
///
/// `vectors` holds grid amplitudes phi(x_j); the inner product is
/// weight * sum_j phi_p(x_j) phi_q(x_j).
struct OrbitalSet {
  BasisKind kind = BasisKind::Eigen;
  std::vector<double> energies;  // eigen kind: eigenvalues; wannier kind: <h>
  Matrix vectors;                // n_points x size()
  std::vector<int> band_of;      // -1 when unassigned
  std::vector<int> site_of;      // wannier kind only, -1 otherwise
  std::vector<double> centers;   // wannier kind: position eigenvalues
  std::vector<double> spreads;   // wannier kind: sqrt(<x^2> - <x>^2)
  double weight = 0.0;

  int size() const { return static_cast<int>(vectors.cols()); }
  Matrix overlap() const { return weight * vectors.transpose() * vectors; }
};

/// Lowest `n_states` eigenstates of the one-body Hamiltonian. Each vector is
/// a parity eigenvector; near-degenerate clusters (gap < 1e-9) are rotated
/// onto reflection eigenstates. Sign: the first amplitude exceeding 1e-6 in
/// magnitude is positive.
OrbitalSet single_particle_eigs(const Grid& grid, const PotentialSpec& spec, int n_states);

/// Dense one-body Hamiltonian on the grid (kinetic + potential).
Matrix one_body_grid_hamiltonian(const Grid& grid, const PotentialSpec& spec);

}  // namespace lq
