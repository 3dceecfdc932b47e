#pragma once

// Spectra versus trap strength, curve continuation and avoided-crossing
// detection.

#include <optional>
#include <string>
#include <vector>

#include "latquench/model.hpp"

namespace lq {

struct DominantLabel {
  StateLabel label;
  double weight = 0.0;
  Eigen::Index column = -1;
};

/// Largest |<n|psi>|^2 over the columns of a parity block (number states
/// and S/A combinations). Ties go to the lower column.
DominantLabel dominant_label(const Vector& block_vector, const std::vector<StateLabel>& labels);

struct ScanConfig {
  double omega_min = 0.0;
  double omega_max = 0.8;
  int n_points = 161;
  int n_states = 15;
  Parity parity = Parity::Even;
  int threads = 1;

  void validate() const;
};

struct ScanPoint {
  double omega_sq = 0.0;
  Vector energies;  // ascending, n_states
  Matrix vectors;   // block coordinates
  std::vector<DominantLabel> labels;
};

struct SpectralScan {
  ScanConfig config;
  std::vector<ScanPoint> points;
  /// level_of_curve[p][c]: level index carrying curve c at point p.
  std::vector<std::vector<int>> level_of_curve;
  std::vector<std::string> warnings;
};

/// Eigenpairs of one parity block at one trap strength (lowest `count`).
ScanPoint spectrum_at(const Model& model, double omega_sq, int count, Parity parity);

/// Diagonalise on a uniform grid and follow curves by maximum-overlap
/// assignment between neighbouring points. Two overlaps within 1e-3 of each
/// other for the same curve are reported as an ambiguity warning.
SpectralScan scan_spectrum(const Model& model, const ScanConfig& config);

enum class CrossingClass { VeryNarrow, Narrow, Wide };
std::string to_string(CrossingClass c);

inline constexpr double kVeryNarrowWidth = 4e-3;

struct Slopes {
  double lower_before = 0.0;
  double upper_before = 0.0;
  double lower_after = 0.0;
  double upper_after = 0.0;
};

struct AvoidedCrossing {
  int lower_level = 0;  // pair (lower_level, lower_level + 1)
  double omega_sq_c = 0.0;
  double min_gap = 0.0;
  double slope_difference = 0.0;
  double width = 0.0;  // min_gap / slope_difference
  CrossingClass cls = CrossingClass::Narrow;
  StateLabel lower_before, upper_before, lower_after, upper_after;
  bool exchanged = false;
  double probe_offset = 0.0;  // omega_sq offset at which labels were compared
  Slopes slopes;
  bool resolved = true;
  int refinement_levels = 0;
};

struct DetectConfig {
  int max_refinement_levels = 12;
  double refinement_tolerance = 0.01;  // relative change of the minimum gap
  double slope_window = 0.02;
  int slope_samples = 5;
};

/// Local minima of every adjacent-level gap, refined by bisection and a
/// quadratic fit of gap^2, kept when the dominant labels of the two levels
/// exchange across the minimum. Class: very narrow below kVeryNarrowWidth,
/// otherwise wide when the ground state is involved and narrow if not.
std::vector<AvoidedCrossing> detect_crossings(const Model& model, const SpectralScan& scan,
                                              const DetectConfig& config = {});

}  // namespace lq
