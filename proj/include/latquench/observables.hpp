#pragma once

// Density, region moments, the long-time and temporal variances of the
// whole-line position variance, and Fourier branch analysis.
//
// For an even-parity quench <x>_L = 0 and the whole-line variance is
//   sigma2(t) = <X2>(t)/N = C + sum_{i<j} A_ij cos((E_i - E_j) t),
//   A_ij = (2/N) c_i c_j <Psi_i|X2|Psi_j>,
// which gives the time average C - sigma2(0) = -sum A_ij and the temporal
// variance sum_f (sum_{pairs at f} A_ij)^2 / 2 over distinct frequencies f.

#include <optional>
#include <string>
#include <vector>

#include "latquench/model.hpp"
#include "latquench/quench.hpp"

namespace lq {

struct RegionSpec {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::string label = "custom";

  void validate(const Grid& grid) const;
  Interval interval() const { return {x_lo, x_hi}; }
  static RegionSpec whole(const Grid& grid);
  /// The `wells` central wells, (-wells*pi/2, wells*pi/2).
  static RegionSpec core(int wells = 3);
};

/// rho(x_j) = sum_pq gamma_pq phi_p(x_j) phi_q(x_j) from a full-basis state.
Vector one_body_density(const Model& model, const ComplexVector& full_state);
Vector one_body_density(const Model& model, const Vector& full_state);
/// One-body reduced density matrix <a+_p a_q>.
Matrix one_body_rdm(const FockBasis& basis, const ComplexVector& full_state);

/// Many-body number, x and x^2 operators restricted to a region, in a
/// parity block.
struct RegionOperators {
  RegionSpec region;
  SparseMatrix number;
  SparseMatrix x1;
  SparseMatrix x2;
};
RegionOperators region_operators(const Model& model, const RegionSpec& region, Parity parity = Parity::Even);

/// N_D, <x>_D = (1/N_D) int_D x rho, sigma2_D = (1/N_D) int_D x^2 rho - <x>_D^2.
/// Mean and variance are missing when N_D < 1e-12.
struct RegionMoments {
  double number = 0.0;
  std::optional<double> mean;
  std::optional<double> variance;
};
RegionMoments region_moments(double number, double x1, double x2);

struct MomentSeries {
  std::vector<double> times;
  std::vector<RegionMoments> values;
};
MomentSeries region_moment_series(const QuenchResult& result, const RegionOperators& ops);

struct PairTerm {
  int i = 0;
  int j = 0;
  double frequency = 0.0;  // |E_i - E_j|
  double amplitude = 0.0;  // A_ij
};
/// All i<j pair terms of the whole-line variance.
std::vector<PairTerm> variance_pair_terms(const QuenchResult& result, const Matrix& x2_eigen, int n_particles);

/// Whole-line sigma2(t) at every sample time.
std::vector<double> whole_line_variance(const QuenchResult& result, const Matrix& x2_eigen, int n_particles);

/// Integral (finite-T, sampled) against spectral (T -> infinity) forms.
/// Pairs with frequency below 2 pi / T are near-degenerate: their finite-T
/// contribution is removed from the integral form analytically and they are
/// excluded from the spectral form; `near_degenerate` reports their size.
struct DualForm {
  double integral = 0.0;
  double integral_adjusted = 0.0;
  double spectral = 0.0;
  double near_degenerate = 0.0;
  int near_degenerate_pairs = 0;
  double relative_difference = 0.0;
  double drift = 0.0;  // change of the running value over the last 20% of the window
  bool converged = true;
};

/// Long-time average of sigma2(t) - sigma2(0).
DualForm time_averaged_variance(const std::vector<double>& times, const std::vector<double>& sigma2,
                                const std::vector<PairTerm>& pairs, double drift_tolerance = 0.05);
/// Time variance of sigma2(t).
DualForm temporal_variance(const std::vector<double>& times, const std::vector<double>& sigma2,
                           const std::vector<PairTerm>& pairs, double drift_tolerance = 0.05);

struct FourierSpectrum {
  std::vector<double> frequency;  // angular, E_R / hbar
  std::vector<double> amplitude;  // cosine amplitude (2/n)|X_k|
};
/// Rectangular-window DFT of the mean-subtracted series, k = 1 .. n/2.
FourierSpectrum fourier_spectrum(const std::vector<double>& series, double dt);

struct PredictedLine {
  double frequency = 0.0;
  double amplitude = 0.0;  // |sum of A over merged pairs|
  int i = 0;               // strongest contributing pair
  int j = 0;
  int multiplicity = 1;
};
/// Pair terms merged by frequency (within 1e-8), sorted by decreasing
/// amplitude.
std::vector<PredictedLine> predicted_lines(const std::vector<PairTerm>& pairs);

struct PeakMatch {
  double frequency = 0.0;
  double amplitude = 0.0;
  std::optional<double> line_frequency;
  double distance = 0.0;
  bool matched = false;
};

struct BranchSpectrum {
  FourierSpectrum dft;
  std::vector<PredictedLine> lines;
  std::vector<PeakMatch> peaks;  // DFT local maxima above 5% of the largest
  double parseval_variance = 0.0;  // sum amplitude^2 / 2
  int lines_above_1pct = 0;
};
BranchSpectrum fourier_branches(const std::vector<double>& times, const std::vector<double>& sigma2,
                                const std::vector<PairTerm>& pairs);

}  // namespace lq
