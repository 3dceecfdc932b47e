#include "latquench/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>

#include <fftw3.h>

#include "latquench/errors.hpp"

namespace lq {

void RegionSpec::validate(const Grid& grid) const {
  if (!(x_lo < x_hi)) throw ConfigError("region '" + label + "' needs x_lo < x_hi");
  const double tol = 1e-12 * grid.length();
  if (x_lo < grid.x_min - tol || x_hi > grid.x_max + tol) {
    throw ConfigError("region '" + label + "' extends beyond the box");
  }
}

RegionSpec RegionSpec::whole(const Grid& grid) { return {grid.x_min, grid.x_max, "L"}; }

RegionSpec RegionSpec::core(int wells) {
  const double half = wells * std::numbers::pi / 2.0;
  return {-half, half, std::to_string(wells) + "w"};
}

Matrix one_body_rdm(const FockBasis& basis, const ComplexVector& full_state) {
  const int m = basis.n_orbitals();
  Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(m, m);
  std::vector<std::uint8_t> tmp(m);
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const std::complex<double> psi_n = full_state[static_cast<Eigen::Index>(n)];
    if (psi_n == 0.0) continue;
    const auto occ = basis.occupations(n);
    for (int q = 0; q < m; ++q) {
      if (occ[q] == 0) continue;
      for (int p = 0; p < m; ++p) {
        std::copy(occ.begin(), occ.end(), tmp.begin());
        double amp = std::sqrt(static_cast<double>(tmp[q]));
        --tmp[q];
        amp *= std::sqrt(static_cast<double>(tmp[p] + 1));
        ++tmp[p];
        const auto target = static_cast<Eigen::Index>(basis.rank(tmp));
        gamma(p, q) += std::conj(full_state[target]) * psi_n * amp;
      }
    }
  }
  Matrix re = gamma.real();
  return 0.5 * (re + re.transpose());
}

Vector one_body_density(const Model& model, const ComplexVector& full_state) {
  const Matrix gamma = one_body_rdm(model.basis(), full_state);
  const Matrix& phi = model.orbitals().vectors;
  return ((phi * gamma).cwiseProduct(phi)).rowwise().sum();
}

Vector one_body_density(const Model& model, const Vector& full_state) {
  return one_body_density(model, ComplexVector(full_state.cast<std::complex<double>>()));
}

RegionOperators region_operators(const Model& model, const RegionSpec& region, Parity parity) {
  region.validate(model.grid());
  const OneBodyIntegrals ints = one_body_integrals(model.orbitals(), model.grid(), model.potential(0.0), region.interval());
  RegionOperators out;
  out.region = region;
  out.number = model.project_one_body(ints.number, parity);
  out.x1 = model.project_one_body(ints.x1, parity);
  out.x2 = model.project_one_body(ints.x2, parity);
  return out;
}

RegionMoments region_moments(double number, double x1, double x2) {
  RegionMoments m;
  m.number = number;
  if (number < 1e-12) return m;
  const double mean = x1 / number;
  m.mean = mean;
  m.variance = x2 / number - mean * mean;
  return m;
}

MomentSeries region_moment_series(const QuenchResult& result, const RegionOperators& ops) {
  const auto n = result.expectation_series(result.in_eigenbasis(ops.number));
  const auto x1 = result.expectation_series(result.in_eigenbasis(ops.x1));
  const auto x2 = result.expectation_series(result.in_eigenbasis(ops.x2));
  MomentSeries out;
  out.times = result.times;
  for (std::size_t j = 0; j < n.size(); ++j) out.values.push_back(region_moments(n[j], x1[j], x2[j]));
  return out;
}

std::vector<PairTerm> variance_pair_terms(const QuenchResult& result, const Matrix& x2_eigen, int n_particles) {
  std::vector<PairTerm> out;
  const double scale = 2.0 / n_particles;
  for (int i = 0; i < result.k; ++i) {
    for (int j = i + 1; j < result.k; ++j) {
      const double a = scale * result.coefficients[i] * result.coefficients[j] * x2_eigen(i, j);
      if (a == 0.0) continue;
      out.push_back({i, j, std::abs(result.energies[j] - result.energies[i]), a});
    }
  }
  return out;
}

std::vector<double> whole_line_variance(const QuenchResult& result, const Matrix& x2_eigen, int n_particles) {
  std::vector<double> s = result.expectation_series(x2_eigen);
  for (double& v : s) v /= n_particles;
  return s;
}

namespace {

// Trapezoid mean of f over the sampled window [times.front(), times[last]].
double window_mean(const std::vector<double>& times, const std::vector<double>& f, std::size_t last) {
  if (last == 0) return f[0];
  double acc = 0.0;
  for (std::size_t j = 0; j < last; ++j) acc += 0.5 * (f[j] + f[j + 1]) * (times[j + 1] - times[j]);
  return acc / (times[last] - times[0]);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

DualForm time_averaged_variance(const std::vector<double>& times, const std::vector<double>& sigma2,
                                const std::vector<PairTerm>& pairs, double drift_tolerance) {
  if (times.size() != sigma2.size() || times.size() < 2) throw std::invalid_argument("time_averaged_variance: bad series");
  const double t_total = times.back() - times.front();
  const double cutoff = 2.0 * std::numbers::pi / t_total;
  std::vector<double> delta(sigma2.size());
  for (std::size_t j = 0; j < sigma2.size(); ++j) delta[j] = sigma2[j] - sigma2[0];

  DualForm d;
  d.integral = window_mean(times, delta, times.size() - 1);
  double nd_finite = 0.0;
  for (const auto& p : pairs) {
    if (p.frequency < cutoff) {
      nd_finite += p.amplitude * (sinc(p.frequency * t_total) - 1.0);
      d.near_degenerate += -p.amplitude;
      ++d.near_degenerate_pairs;
    } else {
      d.spectral += -p.amplitude;
    }
  }
  d.integral_adjusted = d.integral - nd_finite;
  const double scale = std::max(std::abs(d.spectral), 1e-300);
  d.relative_difference = std::abs(d.integral_adjusted - d.spectral) / scale;

  const std::size_t early = static_cast<std::size_t>(0.8 * (times.size() - 1));
  const double running_early = window_mean(times, delta, early);
  d.drift = std::abs(d.integral - running_early) / std::max(std::abs(d.integral), 1e-300);
  d.converged = d.drift <= drift_tolerance || std::abs(d.integral) < 1e-12;
  return d;
}

DualForm temporal_variance(const std::vector<double>& times, const std::vector<double>& sigma2,
                           const std::vector<PairTerm>& pairs, double drift_tolerance) {
  if (times.size() != sigma2.size() || times.size() < 2) throw std::invalid_argument("temporal_variance: bad series");
  const double t_total = times.back() - times.front();
  const double cutoff = 2.0 * std::numbers::pi / t_total;

  auto variance_over = [&](const std::vector<double>& f, std::size_t last) {
    const double mean = window_mean(times, f, last);
    std::vector<double> sq(last + 1);
    for (std::size_t j = 0; j <= last; ++j) sq[j] = (f[j] - mean) * (f[j] - mean);
    return window_mean(times, sq, last);
  };

  DualForm d;
  d.integral = variance_over(sigma2, times.size() - 1);

  std::vector<double> slow(sigma2.size(), 0.0);
  std::vector<PairTerm> fast;
  for (const auto& p : pairs) {
    if (p.frequency < cutoff) {
      ++d.near_degenerate_pairs;
      for (std::size_t j = 0; j < times.size(); ++j) slow[j] += p.amplitude * std::cos(p.frequency * times[j]);
    } else {
      fast.push_back(p);
    }
  }
  std::vector<double> adjusted(sigma2.size());
  for (std::size_t j = 0; j < sigma2.size(); ++j) adjusted[j] = sigma2[j] - slow[j];
  d.integral_adjusted = variance_over(adjusted, times.size() - 1);
  d.near_degenerate = variance_over(slow, times.size() - 1);

  // Lines closer than 2 pi / T beat instead of averaging out; their cross
  // terms are the near-degenerate pairs of this second-order quantity.
  std::vector<std::pair<double, double>> lines;  // frequency, signed amplitude
  {
    std::vector<PairTerm> sorted = fast;
    std::sort(sorted.begin(), sorted.end(), [](const PairTerm& a, const PairTerm& b) { return a.frequency < b.frequency; });
    for (const auto& p : sorted) {
      if (!lines.empty() && p.frequency - lines.back().first <= 1e-8) lines.back().second += p.amplitude;
      else lines.emplace_back(p.frequency, p.amplitude);
    }
  }
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size() && lines[b].first - lines[a].first < cutoff; ++b) {
      // window covariance of cos(f_a t) and cos(f_b t) over [0, T]
      const double fa = lines[a].first, fb = lines[b].first;
      const double cov = 0.5 * (sinc((fb - fa) * t_total) + sinc((fa + fb) * t_total)) -
                         sinc(fa * t_total) * sinc(fb * t_total);
      const double term = 2.0 * lines[a].second * lines[b].second * cov;
      d.integral_adjusted -= term;
      d.near_degenerate += term;
      ++d.near_degenerate_pairs;
    }
  }

  for (const auto& line : predicted_lines(fast)) d.spectral += 0.5 * line.amplitude * line.amplitude;
  const double scale = std::max(std::abs(d.spectral), 1e-300);
  d.relative_difference = std::abs(d.integral_adjusted - d.spectral) / scale;

  const std::size_t early = static_cast<std::size_t>(0.8 * (times.size() - 1));
  const double v_early = variance_over(sigma2, early);
  d.drift = std::abs(d.integral - v_early) / std::max(std::abs(d.integral), 1e-300);
  d.converged = d.drift <= drift_tolerance || std::abs(d.integral) < 1e-14;
  return d;
}

FourierSpectrum fourier_spectrum(const std::vector<double>& series, double dt) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw std::invalid_argument("fourier_spectrum: need at least two samples");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;

  const int n_out = n / 2 + 1;
  std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(n), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(fftw_alloc_complex(n_out), &fftw_free);
  for (int j = 0; j < n; ++j) in.get()[j] = series[j] - mean;
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  FourierSpectrum s;
  for (int k = 1; k < n_out; ++k) {
    const double mag = std::hypot(out.get()[k][0], out.get()[k][1]);
    const bool nyquist = (n % 2 == 0) && (k == n / 2);
    s.frequency.push_back(2.0 * std::numbers::pi * k / (n * dt));
    s.amplitude.push_back((nyquist ? 1.0 : 2.0) * mag / n);
  }
  return s;
}

std::vector<PredictedLine> predicted_lines(const std::vector<PairTerm>& pairs) {
  std::vector<PairTerm> sorted = pairs;
  std::sort(sorted.begin(), sorted.end(), [](const PairTerm& a, const PairTerm& b) {
    return a.frequency != b.frequency ? a.frequency < b.frequency : (a.i != b.i ? a.i < b.i : a.j < b.j);
  });
  std::vector<PredictedLine> lines;
  double strongest = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const PairTerm& p = sorted[k];
    if (!lines.empty() && p.frequency - lines.back().frequency < 1e-8) {
      sum += p.amplitude;
      ++lines.back().multiplicity;
      if (std::abs(p.amplitude) > strongest) {
        strongest = std::abs(p.amplitude);
        lines.back().i = p.i;
        lines.back().j = p.j;
      }
      lines.back().amplitude = std::abs(sum);
      continue;
    }
    lines.push_back({p.frequency, std::abs(p.amplitude), p.i, p.j, 1});
    sum = p.amplitude;
    strongest = std::abs(p.amplitude);
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const PredictedLine& a, const PredictedLine& b) { return a.amplitude > b.amplitude; });
  return lines;
}

BranchSpectrum fourier_branches(const std::vector<double>& times, const std::vector<double>& sigma2,
                                const std::vector<PairTerm>& pairs) {
  if (times.size() < 3) throw std::invalid_argument("fourier_branches: need at least three samples");
  const double dt = times[1] - times[0];
  BranchSpectrum b;
  b.dft = fourier_spectrum(sigma2, dt);
  b.lines = predicted_lines(pairs);
  for (double a : b.dft.amplitude) b.parseval_variance += 0.5 * a * a;

  const double top_line = b.lines.empty() ? 0.0 : b.lines.front().amplitude;
  std::vector<const PredictedLine*> strong;
  for (const auto& l : b.lines) {
    if (l.amplitude > 0.01 * top_line) {
      ++b.lines_above_1pct;
      strong.push_back(&l);
    }
  }

  const auto& amp = b.dft.amplitude;
  const double top_peak = amp.empty() ? 0.0 : *std::max_element(amp.begin(), amp.end());
  const double bin = 2.0 * std::numbers::pi / (times.back() - times.front());
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const bool left = k == 0 || amp[k] > amp[k - 1];
    const bool right = k + 1 == amp.size() || amp[k] >= amp[k + 1];
    if (!(left && right) || amp[k] < 0.05 * top_peak) continue;
    PeakMatch pm;
    pm.frequency = b.dft.frequency[k];
    pm.amplitude = amp[k];
    double best = std::numeric_limits<double>::infinity();
    for (const PredictedLine* l : strong) {
      const double dist = std::abs(l->frequency - pm.frequency);
      if (dist < best) {
        best = dist;
        pm.line_frequency = l->frequency;
      }
    }
    pm.distance = best;
    pm.matched = best <= bin;
    b.peaks.push_back(pm);
  }
  return b;
}

}  // namespace lq
