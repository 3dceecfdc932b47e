#pragma once

// Ladder comparisons in the grid size and the number of bands.

#include <string>
#include <vector>

#include "latquench/model.hpp"
#include "latquench/quench.hpp"

namespace lq {

struct ConvergenceRung {
  std::string label;
  ModelConfig model;
};

struct RungResult {
  std::string label;
  double ground_energy = 0.0;
  std::vector<double> sigma2;
  /// Against the previous rung; zero for the first.
  double delta_energy = 0.0;
  double max_relative_deviation = 0.0;
};

struct ConvergenceReport {
  QuenchProtocol protocol;
  double window = 0.0;  // deviations use t <= window
  std::vector<double> times;
  std::vector<RungResult> rungs;
};

/// Run the same quench on every rung and compare whole-line sigma2(t).
ConvergenceReport convergence_report(const std::vector<ConvergenceRung>& ladder, const QuenchProtocol& protocol,
                                     double window, const SpectralOptions& spectral = {});

/// max_{t <= window} |a - b| / |b|.
double max_relative_deviation(const std::vector<double>& times, const std::vector<double>& a,
                              const std::vector<double>& b, double window);

}  // namespace lq
