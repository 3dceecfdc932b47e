#include "latquench/model.hpp"

#include <stdexcept>

#include "latquench/errors.hpp"

namespace lq {

void ModelConfig::validate() const {
  if (n_particles < 1) throw ConfigError("n_particles must be >= 1");
  if (n_sites < 1 || n_sites % 2 == 0) throw ConfigError("n_sites must be a positive odd integer");
  if (n_bands < 1) throw ConfigError("n_bands must be >= 1");
  if (n_grid < 2) throw ConfigError("n_grid must be >= 2");
  if (n_grid < 4 * n_sites * n_bands) throw ConfigError("n_grid too small for the requested orbital count");
  if (v0 < 0.0) throw ConfigError("v0 must be non-negative");
  if (g < 0.0) throw ConfigError("g must be non-negative");
  if (wannier_omega_sq < 0.0) throw ConfigError("wannier_omega_sq must be non-negative");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

Model::Model(const ModelConfig& config) : config_(config) {
  config_.validate();
  grid_ = build_grid(config_.n_grid, config_.n_sites);

  PotentialSpec construction = potential(config_.wannier_at_initial_trap ? config_.wannier_omega_sq : 0.0);
  const int n_orb = config_.n_sites * config_.n_bands;
  // one extra state lets the classifier see the gap above the last band
  eigen_ = single_particle_eigs(grid_, construction, std::min(n_orb + 1, config_.n_grid));
  bands_ = classify_bands(eigen_, config_.n_sites, config_.n_bands);
  wannier_ = wannier_states(eigen_, grid_, bands_);
  integrals_ = compute_integrals(wannier_, grid_, potential(0.0));

  basis_ = std::make_shared<const FockBasis>(config_.n_particles, OrbitalLayout{config_.n_sites, config_.n_bands},
                                             config_.basis_cap);
  parity_ = build_parity(*basis_);
  parity_basis_ = build_parity_basis(*basis_, parity_);
  reflection_ = reflection_operator(*basis_, parity_);

  const ManyBodyOperator lattice =
      assemble_operator(*basis_, integrals_.one.h, &integrals_.two, config_.threads);
  const ManyBodyOperator x2 = assemble_operator(*basis_, integrals_.one.x2, nullptr, config_.threads);
  const ParityBlocks lb = parity_blocks(lattice, parity_basis_, reflection_);
  const ParityBlocks xb = parity_blocks(x2, parity_basis_, reflection_);
  lattice_even_ = lb.even;
  lattice_odd_ = lb.odd;
  x2_even_ = xb.even;
  x2_odd_ = xb.odd;
  lattice_full_ = lattice.matrix;
  x2_full_ = x2.matrix;
}

PotentialSpec Model::potential(double omega_sq) const {
  PotentialSpec spec;
  spec.v0 = config_.v0;
  spec.omega_sq = omega_sq;
  spec.n_sites = config_.n_sites;
  spec.g = config_.g;
  return spec;
}

Matrix Model::one_body(double omega_sq) const { return integrals_.one.h + 0.25 * omega_sq * integrals_.one.x2; }

SparseMatrix Model::hamiltonian(double omega_sq) const { return lattice_full_ + 0.25 * omega_sq * x2_full_; }

SparseMatrix Model::sparse_block(double omega_sq, Parity parity) const {
  if (parity == Parity::Even) return lattice_even_ + 0.25 * omega_sq * x2_even_;
  return lattice_odd_ + 0.25 * omega_sq * x2_odd_;
}

Matrix Model::block(double omega_sq, Parity parity) const {
  Matrix m = Matrix(sparse_block(omega_sq, parity));
  return 0.5 * (m + m.transpose());
}

Eigen::Index Model::block_dimension(Parity parity) const {
  return parity == Parity::Even ? parity_basis_.even.cols() : parity_basis_.odd.cols();
}

const std::vector<StateLabel>& Model::block_labels(Parity parity) const {
  return parity == Parity::Even ? parity_basis_.even_labels : parity_basis_.odd_labels;
}

SparseMatrix Model::one_body_operator(const Matrix& one_body) const {
  return assemble_operator(*basis_, one_body, nullptr, config_.threads).matrix;
}

SparseMatrix Model::project_one_body(const Matrix& one_body, Parity parity) const {
  const SparseMatrix full = one_body_operator(one_body);
  const SparseMatrix& p = parity == Parity::Even ? parity_basis_.even : parity_basis_.odd;
  return SparseMatrix(p.transpose() * (full * p)).pruned();
}

Vector Model::embed(const Vector& block_vector, Parity parity) const {
  const SparseMatrix& p = parity == Parity::Even ? parity_basis_.even : parity_basis_.odd;
  return p * block_vector;
}

Vector Model::project(const Vector& full_vector, Parity parity) const {
  const SparseMatrix& p = parity == Parity::Even ? parity_basis_.even : parity_basis_.odd;
  return p.transpose() * full_vector;
}

}  // namespace lq
