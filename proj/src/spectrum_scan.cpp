#include "latquench/spectrum_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "latquench/errors.hpp"

namespace lq {

DominantLabel dominant_label(const Vector& block_vector, const std::vector<StateLabel>& labels) {
  DominantLabel out;
  for (Eigen::Index i = 0; i < block_vector.size(); ++i) {
    const double w = block_vector[i] * block_vector[i];
    if (w > out.weight) {
      out.weight = w;
      out.column = i;
    }
  }
  if (out.column >= 0) out.label = labels.at(out.column);
  return out;
}

void ScanConfig::validate() const {
  if (!(omega_max > omega_min)) throw ConfigError("scan range is empty: omega_max must exceed omega_min");
  if (omega_min < 0.0) throw ConfigError("scan range must be non-negative");
  if (n_points < 3) throw ConfigError("scan needs at least 3 points");
  if (n_states < 1) throw ConfigError("n_states must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

ScanPoint spectrum_at(const Model& model, double omega_sq, int count, Parity parity) {
  const Matrix h = model.block(omega_sq, parity);
  EigenDecomposition eig = count >= h.rows() ? symmetric_eigen(h) : symmetric_eigen_lowest(h, count);
  fix_column_signs(eig.vectors);
  ScanPoint p;
  p.omega_sq = omega_sq;
  p.energies = eig.values;
  p.vectors = eig.vectors;
  const auto& labels = model.block_labels(parity);
  for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) p.labels.push_back(dominant_label(eig.vectors.col(k), labels));
  return p;
}

SpectralScan scan_spectrum(const Model& model, const ScanConfig& config) {
  config.validate();
  if (config.n_states > model.block_dimension(config.parity)) {
    throw ConfigError("n_states exceeds the parity-block dimension " +
                      std::to_string(model.block_dimension(config.parity)));
  }
  SpectralScan scan;
  scan.config = config;
  scan.points.resize(config.n_points);
  const int workers = std::max(1, std::min(config.threads, config.n_points));
  auto work = [&](int t) {
    for (int i = t; i < config.n_points; i += workers) {
      const double w = config.omega_min + (config.omega_max - config.omega_min) * i / (config.n_points - 1);
      scan.points[i] = spectrum_at(model, w, config.n_states, config.parity);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
  }

  const int n = config.n_states;
  std::vector<int> first(n);
  for (int c = 0; c < n; ++c) first[c] = c;
  scan.level_of_curve.push_back(first);
  for (int p = 1; p < config.n_points; ++p) {
    const Matrix overlap = (scan.points[p - 1].vectors.transpose() * scan.points[p].vectors).cwiseAbs();
    const std::vector<int> next_of_prev = max_weight_assignment(overlap);
    std::vector<int> levels(n);
    const auto& prev = scan.level_of_curve.back();
    for (int c = 0; c < n; ++c) {
      const int from = prev[c];
      const int to = next_of_prev[from];
      levels[c] = to;
      for (int k = 0; k < n; ++k) {
        if (k != to && std::abs(overlap(from, k) - overlap(from, to)) < 1e-3 && overlap(from, to) > 1e-3) {
          std::ostringstream msg;
          msg << "continuation ambiguity at point " << p << " (omega_sq=" << scan.points[p].omega_sq << ") for curve " << c;
          scan.warnings.push_back(msg.str());
          break;
        }
      }
    }
    scan.level_of_curve.push_back(levels);
  }
  return scan;
}

std::string to_string(CrossingClass c) {
  switch (c) {
    case CrossingClass::VeryNarrow: return "very_narrow";
    case CrossingClass::Narrow: return "narrow";
    case CrossingClass::Wide: return "wide";
  }
  return "narrow";
}

namespace {

struct GapProbe {
  const Model& model;
  Parity parity;
  int level;

  double operator()(double w) const {
    const Vector e = symmetric_eigenvalues(model.block(w, parity));
    return e[level + 1] - e[level];
  }
};

// Least-squares slope of the given level over [lo, hi].
double fit_slope(const Model& model, Parity parity, int level, double lo, double hi, int samples) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double w = lo + (hi - lo) * i / (samples - 1);
    const double e = symmetric_eigenvalues(model.block(w, parity))[level];
    sx += w;
    sy += e;
    sxx += w * w;
    sxy += w * e;
  }
  return (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
}

}  // namespace

std::vector<AvoidedCrossing> detect_crossings(const Model& model, const SpectralScan& scan, const DetectConfig& config) {
  std::vector<AvoidedCrossing> out;
  const int n_levels = scan.config.n_states;
  const int n_pts = static_cast<int>(scan.points.size());
  const double lo_edge = scan.config.omega_min;
  const double hi_edge = scan.config.omega_max;

  for (int k = 0; k + 1 < n_levels; ++k) {
    const GapProbe gap{model, scan.config.parity, k};
    std::vector<double> g(n_pts);
    for (int p = 0; p < n_pts; ++p) g[p] = scan.points[p].energies[k + 1] - scan.points[p].energies[k];

    for (int p = 1; p + 1 < n_pts; ++p) {
      if (!(g[p] < g[p - 1] && g[p] <= g[p + 1])) continue;
      AvoidedCrossing ac;
      ac.lower_level = k;

      // bisection: keep the sub-bracket around the best of three samples
      double a = scan.points[p - 1].omega_sq, m = scan.points[p].omega_sq, b = scan.points[p + 1].omega_sq;
      double ga = g[p - 1], gm = g[p], gb = g[p + 1];
      int level = 0;
      bool converged = false;
      while (level < config.max_refinement_levels) {
        ++level;
        const double l = 0.5 * (a + m), r = 0.5 * (m + b);
        const double gl = gap(l), gr = gap(r);
        const double before = gm;
        if (gl < gm && gl <= gr) {
          b = m; gb = gm; m = l; gm = gl;
        } else if (gr < gm) {
          a = m; ga = gm; m = r; gm = gr;
        } else {
          a = l; ga = gl; b = r; gb = gr;
        }
        if (level >= 3 && std::abs(before - gm) <= config.refinement_tolerance * gm) {
          converged = true;
          break;
        }
      }
      ac.refinement_levels = level;
      ac.resolved = converged;

      // two-level model: gap^2 is quadratic in omega_sq
      {
        const double fa = ga * ga, fm = gm * gm, fb = gb * gb;
        const double d1 = (fm - fa) / (m - a), d2 = (fb - fm) / (b - m);
        const double curv = (d2 - d1) / (b - a);
        double wc = m, gc = gm;
        if (curv > 0.0) {
          const double x = std::clamp(0.5 * (a + m) - d1 / (2.0 * curv), a, b);
          const double gx = gap(x);
          if (gx < gc) {
            wc = x;
            gc = gx;
          }
        }
        ac.omega_sq_c = wc;
        ac.min_gap = gc;
      }

      // slope difference from sqrt(G(h)^2 - G0^2)/h, growing h until the
      // gap has opened to three times its minimum; a gap that shrinks again
      // means a neighbouring crossing, so the previous estimate is kept
      {
        double h = std::max(1e-5, 0.1 * (b - a));
        double ds = 0.0;
        double prev_l = -1.0, prev_r = -1.0;
        for (int it = 0; it < 40; ++it) {
          const double wl = std::max(lo_edge, ac.omega_sq_c - h), wr = std::min(hi_edge, ac.omega_sq_c + h);
          const double gl = gap(wl), gr = gap(wr);
          const double hl = ac.omega_sq_c - wl, hr = wr - ac.omega_sq_c;
          if (ds > 0.0 && ((hl > 0.0 && gl < prev_l) || (hr > 0.0 && gr < prev_r))) break;
          prev_l = gl;
          prev_r = gr;
          double est = 0.0;
          int cnt = 0;
          if (hl > 0.0) { est += std::sqrt(std::max(0.0, gl * gl - ac.min_gap * ac.min_gap)) / hl; ++cnt; }
          if (hr > 0.0) { est += std::sqrt(std::max(0.0, gr * gr - ac.min_gap * ac.min_gap)) / hr; ++cnt; }
          if (cnt > 0) ds = est / cnt;
          const bool open = std::min(hl > 0.0 ? gl : gr, hr > 0.0 ? gr : gl) >= 3.0 * ac.min_gap;
          const bool at_edges = (wl <= lo_edge && wr >= hi_edge);
          if (open || at_edges) break;
          h *= 2.0;
        }
        ac.slope_difference = ds;
        ac.width = ds > 0.0 ? ac.min_gap / ds : std::numeric_limits<double>::infinity();
      }

      // label exchange across the crossing
      for (double f : {0.5, 1.0, 2.0, 4.0}) {
        const double d = f * ac.width;
        const double wl = std::max(lo_edge, ac.omega_sq_c - d), wr = std::min(hi_edge, ac.omega_sq_c + d);
        const ScanPoint pl = spectrum_at(model, wl, k + 2, scan.config.parity);
        const ScanPoint pr = spectrum_at(model, wr, k + 2, scan.config.parity);
        ac.lower_before = pl.labels[k].label;
        ac.upper_before = pl.labels[k + 1].label;
        ac.lower_after = pr.labels[k].label;
        ac.upper_after = pr.labels[k + 1].label;
        ac.probe_offset = d;
        if (!(ac.lower_before == ac.upper_before) && ac.lower_before == ac.upper_after &&
            ac.upper_before == ac.lower_after) {
          ac.exchanged = true;
          break;
        }
      }
      if (!ac.exchanged) continue;

      // diabatic slopes away from the crossing region
      {
        // the model is defined for any omega^2 >= 0, so the windows may leave
        // the scan range rather than collapse at its edges
        const double off = std::max(2.0 * ac.probe_offset, 2.0 * ac.width);
        const double span = std::min(config.slope_window, 2.0 * off);
        const double bl = std::max(0.0, ac.omega_sq_c - off - span);
        const double br = std::max(0.0, ac.omega_sq_c - off);
        const double al = ac.omega_sq_c + off;
        const double ar = ac.omega_sq_c + off + span;
        if (br > bl) {
          ac.slopes.lower_before = fit_slope(model, scan.config.parity, k, bl, br, config.slope_samples);
          ac.slopes.upper_before = fit_slope(model, scan.config.parity, k + 1, bl, br, config.slope_samples);
        }
        if (ar > al) {
          ac.slopes.lower_after = fit_slope(model, scan.config.parity, k, al, ar, config.slope_samples);
          ac.slopes.upper_after = fit_slope(model, scan.config.parity, k + 1, al, ar, config.slope_samples);
        }
      }

      if (ac.width < kVeryNarrowWidth) ac.cls = CrossingClass::VeryNarrow;
      else if (k == 0) ac.cls = CrossingClass::Wide;
      else ac.cls = CrossingClass::Narrow;
      out.push_back(ac);
    }
  }
  std::sort(out.begin(), out.end(), [](const AvoidedCrossing& x, const AvoidedCrossing& y) {
    return x.omega_sq_c != y.omega_sq_c ? x.omega_sq_c > y.omega_sq_c : x.lower_level < y.lower_level;
  });
  return out;
}

}  // namespace lq
