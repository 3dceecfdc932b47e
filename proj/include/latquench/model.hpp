#pragma once

// A fully assembled few-body model: grid, Wannier orbitals, Fock basis,
// parity structure and the many-body operators that every analysis needs.
//
// The trap enters linearly, H(omega_sq) = H_lattice + (omega_sq/4) X2, so
// both terms are stored once and combined on demand.

#include <memory>
#include <optional>

#include "latquench/fock_basis.hpp"
#include "latquench/grid_dvr.hpp"
#include "latquench/hamiltonian.hpp"
#include "latquench/orbitals.hpp"

namespace lq {

struct ModelConfig {
  int n_particles = 4;
  int n_sites = 3;
  int n_bands = 3;
  int n_grid = 300;
  double v0 = 9.0;
  double g = 1.0;
  /// Build Wannier states in the trap omega_sq = wannier_omega_sq instead of
  /// the bare lattice.
  bool wannier_at_initial_trap = false;
  double wannier_omega_sq = 0.0;
  int threads = 1;
  std::size_t basis_cap = kDefaultBasisCap;

  void validate() const;
};

enum class Parity { Even, Odd };

class Model {
 public:
  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }
  const OrbitalSet& eigen_orbitals() const { return eigen_; }
  const OrbitalSet& orbitals() const { return wannier_; }
  const OrbitalLayout& layout() const { return basis_->layout(); }
  const FockBasis& basis() const { return *basis_; }
  const ParityInfo& parity() const { return parity_; }
  const ParityBasis& parity_basis() const { return parity_basis_; }
  const SparseMatrix& reflection() const { return reflection_; }
  /// Integrals of the bare lattice (omega_sq = 0); x1/x2/number whole line.
  const Integrals& integrals() const { return integrals_; }
  PotentialSpec potential(double omega_sq) const;

  /// One-body matrix h(omega_sq) = h_lattice + (omega_sq/4) x2.
  Matrix one_body(double omega_sq) const;

  /// Full-basis Hamiltonian at omega_sq.
  SparseMatrix hamiltonian(double omega_sq) const;
  /// Parity block of H(omega_sq) as a dense matrix.
  Matrix block(double omega_sq, Parity parity) const;
  SparseMatrix sparse_block(double omega_sq, Parity parity) const;
  /// Parity block of sum_i x_i^2 over the whole line.
  const SparseMatrix& x2_block(Parity parity) const { return parity == Parity::Even ? x2_even_ : x2_odd_; }

  Eigen::Index block_dimension(Parity parity) const;
  const std::vector<StateLabel>& block_labels(Parity parity) const;

  /// Many-body image of a one-body matrix, projected onto a parity block.
  SparseMatrix project_one_body(const Matrix& one_body, Parity parity) const;
  /// Full-basis operator of a one-body matrix.
  SparseMatrix one_body_operator(const Matrix& one_body) const;

  /// Block vector -> full-basis vector, and back.
  Vector embed(const Vector& block_vector, Parity parity) const;
  Vector project(const Vector& full_vector, Parity parity) const;

 private:
  ModelConfig config_;
  Grid grid_;
  OrbitalSet eigen_;
  BandAssignment bands_;
  OrbitalSet wannier_;
  Integrals integrals_;
  std::shared_ptr<const FockBasis> basis_;
  ParityInfo parity_;
  ParityBasis parity_basis_;
  SparseMatrix reflection_;
  SparseMatrix lattice_even_, lattice_odd_;
  SparseMatrix x2_even_, x2_odd_;
  SparseMatrix lattice_full_, x2_full_;
};

}  // namespace lq
