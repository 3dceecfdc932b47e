#pragma once

// Sudden trap quench omega_i -> omega_f, evolved exactly in the eigenbasis
// of the post-quench Hamiltonian: c_i(t) = c_i exp(-i E_i t).

#include <complex>
#include <optional>
#include <vector>

#include "latquench/model.hpp"
#include "latquench/spectrum_scan.hpp"

namespace lq {

using ComplexVector = Eigen::VectorXcd;

struct QuenchProtocol {
  double omega_i_sq = 0.8;
  double omega_f_sq = 0.58;
  double t_final = 300.0;
  double dt_sample = 0.1;

  void validate() const;
  std::vector<double> sample_times() const;
};

struct GroundState {
  Vector vector;  // even block, largest-magnitude entry positive
  double energy = 0.0;
  double gap = 0.0;  // to the next even level
  DominantLabel dominant;
};

/// Lowest even-parity eigenstate. Throws ConvergenceError when the gap to
/// the next even level is below 1e-10.
GroundState ground_state(const Model& model, double omega_sq);

struct SpectralOptions {
  int full_limit = 3000;  // blocks up to this size are diagonalised fully
  int initial_k = 400;
  double defect_threshold = 1e-8;
  int max_k = 0;  // 0: escalate up to the full block
};

/// Next basis size when escalating: K doubles, and jumps to the full block
/// once it would pass half of it, where a partial solve costs about as much.
int next_k(int k, int dim);

/// Expansion coefficients below this magnitude are dropped from time series.
inline constexpr double kNegligibleCoefficient = 1e-13;

/// Eigenpairs of the even block at omega_sq; `count <= 0` means all.
struct EigenBasis {
  double omega_sq = 0.0;
  Vector energies;
  Matrix vectors;
  bool complete = false;
};
EigenBasis even_eigenbasis(const Model& model, double omega_sq, int count = 0);

struct QuenchResult {
  QuenchProtocol protocol;
  Vector energies;      // post-quench, K
  Matrix vectors;       // even block x K
  Vector psi0;          // even block
  Vector coefficients;  // c_i = <Psi_i|psi0>
  double defect = 0.0;  // 1 - sum c_i^2
  int k = 0;
  bool full = false;
  std::vector<double> times;

  /// c_i exp(-i E_i t).
  ComplexVector eigen_amplitudes(double t) const;
  /// State in even-block coordinates.
  ComplexVector state_at(double t) const;
  /// V^T O V for an even-block operator.
  Matrix in_eigenbasis(const SparseMatrix& block_operator) const;
  /// <O>(t) at every sample time from an eigenbasis matrix.
  std::vector<double> expectation_series(const Matrix& op_eigen) const;
};

/// Diagonalise at omega_f (escalating K until the completeness defect is
/// below threshold) and expand psi0.
QuenchResult evolve(const Model& model, const QuenchProtocol& protocol, const Vector& psi0,
                    const SpectralOptions& options = {});
/// Same with a precomputed post-quench basis. Throws ConvergenceError if the
/// defect exceeds the threshold.
QuenchResult evolve(const EigenBasis& basis, const QuenchProtocol& protocol, const Vector& psi0,
                    double defect_threshold = 1e-8);

/// |<target|Psi(t)>|^2 at every sample time.
std::vector<double> population_timeseries(const QuenchResult& result, const ParityBasis::Locator& target);

/// Earliest sample with population >= threshold.
std::optional<double> state_prep_search(const std::vector<double>& times, const std::vector<double>& populations,
                                        double threshold);

}  // namespace lq
