#pragma once

// Tilted S-site Bose-Hubbard model derived from lowest-band Wannier
// integrals:
//   H = -J sum_<ij> a+_i a_j + U/2 sum n_i(n_i-1) + sum eps (i-c)^2 n_i + e0 N.

#include <string>
#include <vector>

#include "latquench/fock_basis.hpp"
#include "latquench/hamiltonian.hpp"

namespace lq {

struct BhmParams {
  double J = 0.0;
  double U = 0.0;
  double eps = 0.0;
  double e0 = 0.0;
  int n_sites = 3;
  /// eps = eps_wall + eps_per_omega_sq * omega_sq; the first term is the
  /// bare-lattice offset of the outer wells caused by the hard walls.
  double eps_wall = 0.0;
  double eps_per_omega_sq = 0.0;
  double omega_sq = 0.0;
  /// |J_left - J_right|; nonzero only when parity is broken.
  double hopping_asymmetry = 0.0;
  std::vector<std::string> warnings;
};

/// Parameters at trap strength omega_sq from bare-lattice integrals over
/// band-0 Wannier orbitals (the first `n_sites` orbitals). eps and e0 use
/// only the centre site and its two neighbours.
BhmParams extract_params(const OneBodyIntegrals& lattice, const TwoBodyIntegrals& w, double omega_sq, int n_sites);

/// One-body matrix of the BHM (site energies and hopping).
Matrix bhm_one_body(const BhmParams& params);

/// BHM over a lowest-band basis (layout with one band).
ManyBodyOperator assemble_bhm(const FockBasis& basis, const BhmParams& params);

/// J = 0 diagonal energy, affine in eps: intercept + slope * eps.
struct DiagonalEnergy {
  double intercept = 0.0;
  double slope = 0.0;
};
DiagonalEnergy diagonal_energy(const NumberState& s, const BhmParams& params);

/// eps at which the J = 0 energies of a and b coincide. Throws
/// std::domain_error for parallel diagonals.
double diagonal_crossing(const NumberState& a, const NumberState& b, const BhmParams& params);

/// <a|H|b> for number states or parity combinations.
double bhm_matrix_element(const StateLabel& a, const StateLabel& b, const FockBasis& basis, const BhmParams& params);

}  // namespace lq
