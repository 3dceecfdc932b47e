#include "latquench/convergence.hpp"

#include <cmath>
#include <stdexcept>

#include "latquench/observables.hpp"

namespace lq {

double max_relative_deviation(const std::vector<double>& times, const std::vector<double>& a,
                              const std::vector<double>& b, double window) {
  if (a.size() != b.size() || a.size() != times.size()) throw std::invalid_argument("series lengths differ");
  double m = 0.0;
  for (std::size_t j = 0; j < times.size() && times[j] <= window + 1e-12; ++j) {
    m = std::max(m, std::abs(a[j] - b[j]) / std::abs(b[j]));
  }
  return m;
}

ConvergenceReport convergence_report(const std::vector<ConvergenceRung>& ladder, const QuenchProtocol& protocol,
                                     double window, const SpectralOptions& spectral) {
  ConvergenceReport report;
  report.protocol = protocol;
  report.window = window;
  report.times = protocol.sample_times();
  for (const auto& rung : ladder) {
    const Model model(rung.model);
    const GroundState gs = ground_state(model, protocol.omega_i_sq);
    const QuenchResult r = evolve(model, protocol, gs.vector, spectral);
    RungResult rr;
    rr.label = rung.label;
    rr.ground_energy = gs.energy;
    rr.sigma2 = whole_line_variance(r, r.in_eigenbasis(model.x2_block(Parity::Even)), rung.model.n_particles);
    if (!report.rungs.empty()) {
      const RungResult& prev = report.rungs.back();
      rr.delta_energy = rr.ground_energy - prev.ground_energy;
      rr.max_relative_deviation = max_relative_deviation(report.times, prev.sigma2, rr.sigma2, window);
    }
    report.rungs.push_back(std::move(rr));
  }
  return report;
}

}  // namespace lq
