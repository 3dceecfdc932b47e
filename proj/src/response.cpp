#include "latquench/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace lq {

std::vector<ResponsePoint> response_scan(const Model& model, const ResponseScanConfig& config) {
  const GroundState gs = ground_state(model, config.omega_i_sq);
  const SparseMatrix& x2 = model.x2_block(Parity::Even);
  const int n = model.config().n_particles;
  std::vector<ResponsePoint> out(config.omega_f.size());
  std::optional<RegionOperators> core;
  if (config.core_wells > 0) core = region_operators(model, RegionSpec::core(config.core_wells));

  auto one = [&](std::size_t idx) {
    QuenchProtocol protocol;
    protocol.omega_i_sq = config.omega_i_sq;
    protocol.omega_f_sq = config.omega_f[idx];
    protocol.t_final = config.t_final;
    protocol.dt_sample = config.dt_sample;
    const QuenchResult r = evolve(model, protocol, gs.vector, config.spectral);
    const Matrix x2e = r.in_eigenbasis(x2);
    const auto sigma2 = whole_line_variance(r, x2e, n);
    const auto pairs = variance_pair_terms(r, x2e, n);
    ResponsePoint p;
    p.omega_f_sq = protocol.omega_f_sq;
    p.temporal = temporal_variance(r.times, sigma2, pairs);
    p.average = time_averaged_variance(r.times, sigma2, pairs);
    p.sigma2_initial = sigma2.front();
    for (double s : sigma2) p.max_deviation = std::max(p.max_deviation, std::abs(s - sigma2.front()));
    p.defect = r.defect;
    p.k = r.k;
    const auto lines = predicted_lines(pairs);
    const double top = lines.empty() ? 0.0 : lines.front().amplitude;
    for (const auto& l : lines) p.lines_above_1pct += l.amplitude > 0.01 * top ? 1 : 0;
    if (core) {
      const MomentSeries m = region_moment_series(r, *core);
      std::vector<double> var(m.values.size(), 0.0);
      for (std::size_t j = 0; j < var.size(); ++j) var[j] = m.values[j].variance.value_or(0.0);
      p.core_temporal = temporal_variance(r.times, var, {}).integral;
    }
    out[idx] = p;
  };

  const int workers = std::max(1, std::min<int>(config.threads, static_cast<int>(config.omega_f.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < config.omega_f.size(); ++i) one(i);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < config.omega_f.size(); i += workers) one(i);
      });
    }
  }
  return out;
}

std::vector<ResponsePeak> response_peaks(const std::vector<ResponsePoint>& scan, const std::vector<double>& crossings,
                                         ResponseForm form) {
  std::vector<ResponsePeak> out;
  const int n = static_cast<int>(scan.size());
  auto v = [&](int i) {
    switch (form) {
      case ResponseForm::Spectral: return scan[i].temporal.spectral;
      case ResponseForm::Core: return scan[i].core_temporal.value_or(0.0);
      default: return scan[i].temporal.integral;
    }
  };
  auto w = [&](int i) { return scan[i].omega_f_sq; };
  for (int i = 1; i + 1 < n; ++i) {
    if (!(v(i) > v(i - 1) && v(i) >= v(i + 1))) continue;
    ResponsePeak pk;
    pk.index = i;
    pk.omega_f_sq = w(i);
    pk.value = v(i);
    const double half = 0.5 * v(i);
    // walk outward until half maximum, a valley or the edge
    auto side = [&](int dir, bool& found) {
      int j = i;
      while (true) {
        const int nxt = j + dir;
        if (nxt < 0 || nxt >= n) return w(j);
        if (v(nxt) <= half) {
          found = true;
          const double f = (v(j) - half) / (v(j) - v(nxt));
          return w(j) + f * (w(nxt) - w(j));
        }
        if (v(nxt) > v(j)) return w(j);
        j = nxt;
      }
    };
    bool left_found = false, right_found = false;
    const double lo = side(-1, left_found);
    const double hi = side(+1, right_found);
    pk.bounded = left_found && right_found;
    if (left_found && right_found) pk.half_width = 0.5 * (hi - lo);
    else if (left_found) pk.half_width = pk.omega_f_sq - lo;
    else if (right_found) pk.half_width = hi - pk.omega_f_sq;
    else pk.half_width = 0.5 * (hi - lo);
    double best = std::numeric_limits<double>::infinity();
    for (double c : crossings) {
      if (std::abs(c - pk.omega_f_sq) < best) {
        best = std::abs(c - pk.omega_f_sq);
        pk.nearest_crossing = c;
      }
    }
    out.push_back(pk);
  }
  return out;
}

std::vector<double> refinement_points(const std::vector<std::pair<double, double>>& centre_and_scale, double lo,
                                      double hi) {
  std::vector<double> out;
  for (const auto& [c, scale] : centre_and_scale) {
    for (double f : {-4.0, -2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double w = c + f * scale;
      if (w >= lo && w <= hi) out.push_back(w);
    }
  }
  return out;
}

}  // namespace lq
