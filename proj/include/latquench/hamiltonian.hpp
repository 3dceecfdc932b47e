#pragma once

// Second-quantised operators in a FockBasis:
//   H = sum h_pq a+_p a_q + 1/2 sum W_pqrs a+_p a+_q a_r a_s.

#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "latquench/fock_basis.hpp"
#include "latquench/grid_dvr.hpp"

namespace lq {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct OneBodyIntegrals {
  Matrix h;       // kinetic + potential, whole line
  Matrix x1;      // <p|x|q> over the region
  Matrix x2;      // <p|x^2|q> over the region
  Matrix number;  // <p|q> over the region
};

/// W_pqrs = g * sum_j w_j phi_p phi_q phi_r phi_s, stored densely.
class TwoBodyIntegrals {
 public:
  TwoBodyIntegrals() = default;
  explicit TwoBodyIntegrals(int m) : m_(m), data_(static_cast<std::size_t>(m) * m * m * m, 0.0) {}

  int size() const { return m_; }
  double operator()(int p, int q, int r, int s) const { return data_[offset(p, q, r, s)]; }
  double& operator()(int p, int q, int r, int s) { return data_[offset(p, q, r, s)]; }
  double max_abs() const;

 private:
  std::size_t offset(int p, int q, int r, int s) const {
    return ((static_cast<std::size_t>(p) * m_ + q) * m_ + r) * m_ + s;
  }
  int m_ = 0;
  std::vector<double> data_;
};

OneBodyIntegrals one_body_integrals(const OrbitalSet& orbitals, const Grid& grid, const PotentialSpec& spec,
                                    const std::optional<Interval>& region = std::nullopt);
TwoBodyIntegrals two_body_integrals(const OrbitalSet& orbitals, double g);

struct Integrals {
  OneBodyIntegrals one;
  TwoBodyIntegrals two;
};
Integrals compute_integrals(const OrbitalSet& orbitals, const Grid& grid, const PotentialSpec& spec,
                            const std::optional<Interval>& region = std::nullopt);

struct ManyBodyOperator {
  SparseMatrix matrix;

  Eigen::Index dimension() const { return matrix.rows(); }
};

/// Build the operator row by row. Rows are split across `threads` workers;
/// each row is accumulated in a fixed order, so the result does not depend
/// on the thread count. Throws ResourceCapError past `max_nonzeros`.
ManyBodyOperator assemble_operator(const FockBasis& basis, const Matrix& one_body,
                                   const TwoBodyIntegrals* two_body = nullptr, int threads = 1,
                                   std::size_t max_nonzeros = 400'000'000);

/// Signed permutation R|n> = sign(n) |Rn>.
SparseMatrix reflection_operator(const FockBasis& basis, const ParityInfo& parity);

/// Columns of the even (odd) block: (|n> +- sign |Rn>)/sqrt2 for each pair,
/// represented by its lexicographically larger member, and |n> for
/// self-mirrored states with sign +1 (-1).
struct ParityBasis {
  SparseMatrix even;  // D x D_even
  SparseMatrix odd;   // D x D_odd
  std::vector<std::size_t> even_rep;
  std::vector<std::size_t> odd_rep;
  std::vector<StateLabel> even_labels;
  std::vector<StateLabel> odd_labels;

  /// Column of `label` in the block of the matching parity, with the
  /// amplitude <label|column>. Plain non-symmetric states map to their
  /// combination with amplitude 1/sqrt2.
  struct Locator {
    bool even = true;
    Eigen::Index column = -1;
    double amplitude = 0.0;
  };
  std::optional<Locator> locate(const StateLabel& label, const FockBasis& basis, const ParityInfo& parity) const;
};
ParityBasis build_parity_basis(const FockBasis& basis, const ParityInfo& parity);

/// max |HR - RH|.
double commutator_norm(const SparseMatrix& op, const SparseMatrix& reflection);

struct ParityBlocks {
  SparseMatrix even;
  SparseMatrix odd;
};
/// P^T H P for both parities. Throws SymmetryError if the commutator with
/// the reflection exceeds `tolerance`.
ParityBlocks parity_blocks(const ManyBodyOperator& op, const ParityBasis& pb, const SparseMatrix& reflection,
                           double tolerance = 1e-8);

}  // namespace lq
