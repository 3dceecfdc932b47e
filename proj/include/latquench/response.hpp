#pragma once

// Response of the whole-line variance to a family of quenches from one
// initial trap strength.

#include <optional>
#include <utility>
#include <vector>

#include "latquench/observables.hpp"

namespace lq {

struct ResponsePoint {
  double omega_f_sq = 0.0;
  DualForm temporal;
  DualForm average;
  double sigma2_initial = 0.0;
  double max_deviation = 0.0;  // max_t |sigma2(t) - sigma2(0)|
  double defect = 0.0;
  int k = 0;
  int lines_above_1pct = 0;
  /// Temporal variance of the core-region variance (integral form), when
  /// a core region is requested.
  std::optional<double> core_temporal;
};

struct ResponseScanConfig {
  double omega_i_sq = 0.8;
  std::vector<double> omega_f;
  double t_final = 300.0;
  double dt_sample = 0.1;
  SpectralOptions spectral;
  int threads = 1;
  /// Also track sigma2 over this many central wells; 0 disables.
  int core_wells = 0;
};

/// One quench per omega_f from the even ground state at omega_i. Results
/// are ordered as `omega_f` regardless of the thread count.
std::vector<ResponsePoint> response_scan(const Model& model, const ResponseScanConfig& config);

struct ResponsePeak {
  int index = 0;
  double omega_f_sq = 0.0;
  double value = 0.0;
  double half_width = 0.0;
  bool bounded = true;  // both half-maximum points found before a valley or the edge
  std::optional<double> nearest_crossing;
};

/// Which estimate of the temporal variance peaks are located on. The
/// finite-T integral form keeps resonances slower than 2 pi / T, which the
/// spectral form drops as near-degenerate.
enum class ResponseForm { Integral, Spectral, Core };

/// Local maxima of the temporal variance with their half widths at half
/// maximum, annotated with the nearest of `crossings`. `scan` must be sorted
/// by omega_f_sq.
std::vector<ResponsePeak> response_peaks(const std::vector<ResponsePoint>& scan, const std::vector<double>& crossings,
                                         ResponseForm form = ResponseForm::Integral);

/// Extra omega_f_sq samples around each crossing centre: c + f * scale for
/// f in {0, +-1/4, +-1/2, +-1, +-2, +-4}, clipped to [lo, hi].
std::vector<double> refinement_points(const std::vector<std::pair<double, double>>& centre_and_scale, double lo,
                                      double hi);

}  // namespace lq
