#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latquench/errors.hpp"
#include "latquench/observables.hpp"

using namespace lq;

namespace {

const Model& model() {
  static const Model m([] {
    ModelConfig mc;
    mc.n_bands = 2;
    return mc;
  }());
  return m;
}

const QuenchResult& quench() {
  static const QuenchResult r = [] {
    QuenchProtocol p;
    p.omega_i_sq = 0.8;
    p.omega_f_sq = 0.5;
    p.t_final = 300.0;
    p.dt_sample = 0.1;
    return evolve(model(), p, ground_state(model(), 0.8).vector);
  }();
  return r;
}

}  // namespace

TEST_CASE("density integrates to the particle number and the second moment") {
  const GroundState g = ground_state(model(), 0.5);
  const Vector full = model().embed(g.vector, Parity::Even);
  const Vector rho = one_body_density(model(), full);
  const Grid& grid = model().grid();
  double n = 0.0, x2 = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    n += grid.weight * rho[j];
    x2 += grid.weight * rho[j] * grid.points[j] * grid.points[j];
  }
  CHECK(n == doctest::Approx(4.0).epsilon(1e-10));
  const double direct = g.vector.dot(model().x2_block(Parity::Even) * g.vector);
  CHECK(x2 == doctest::Approx(direct).epsilon(1e-8));
  for (int j = 0; j < grid.n_points; ++j) CHECK(rho[j] == doctest::Approx(rho[grid.mirror(j)]).epsilon(1e-9));
}

TEST_CASE("region moments") {
  const RegionMoments m = region_moments(2.0, 1.0, 3.0);
  CHECK(*m.mean == doctest::Approx(0.5));
  CHECK(*m.variance == doctest::Approx(1.25));
  const RegionMoments empty = region_moments(1e-14, 0.0, 0.0);
  CHECK_FALSE(empty.mean.has_value());
  CHECK_FALSE(empty.variance.has_value());
  CHECK_THROWS(RegionSpec{1.0, 0.0}.validate(model().grid()));
}

TEST_CASE("pair terms reproduce the sampled variance") {
  const QuenchResult& r = quench();
  const Matrix x2 = r.in_eigenbasis(model().x2_block(Parity::Even));
  const auto s = whole_line_variance(r, x2, 4);
  const auto pairs = variance_pair_terms(r, x2, 4);
  for (std::size_t k = 0; k < r.times.size(); k += 97) {
    double d = 0.0;
    for (const auto& p : pairs) d += p.amplitude * (std::cos(p.frequency * r.times[k]) - 1.0);
    CHECK(s[k] - s[0] == doctest::Approx(d).epsilon(1e-9).scale(1e-6));
  }
}

TEST_CASE("whole-line region series matches the variance") {
  const QuenchResult& r = quench();
  const auto s = whole_line_variance(r, r.in_eigenbasis(model().x2_block(Parity::Even)), 4);
  const MomentSeries m = region_moment_series(r, region_operators(model(), RegionSpec::whole(model().grid())));
  for (std::size_t k = 0; k < r.times.size(); k += 211) {
    CHECK(m.values[k].number == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(std::abs(*m.values[k].mean) < 1e-9);
    CHECK(*m.values[k].variance == doctest::Approx(s[k]).epsilon(1e-9));
  }
}

TEST_CASE("dual forms agree for a finite window") {
  const QuenchResult& r = quench();
  const Matrix x2 = r.in_eigenbasis(model().x2_block(Parity::Even));
  const auto s = whole_line_variance(r, x2, 4);
  const auto pairs = variance_pair_terms(r, x2, 4);
  const DualForm avg = time_averaged_variance(r.times, s, pairs);
  const DualForm tv = temporal_variance(r.times, s, pairs);
  CHECK(tv.integral > 0.0);
  CHECK(tv.spectral > 0.0);
  CHECK(std::abs(avg.integral_adjusted - avg.spectral) <= 0.05 * std::abs(avg.spectral) + 1e-6);
  CHECK(std::abs(tv.integral_adjusted - tv.spectral) <= 0.05 * tv.spectral);
}

TEST_CASE("fourier amplitude of a pure tone") {
  const double dt = 0.1;
  const int n = 2000;
  const double w = 2.0 * std::numbers::pi * 50.0 / (n * dt);
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = 1.5 + 0.3 * std::cos(w * i * dt);
  const FourierSpectrum f = fourier_spectrum(s, dt);
  REQUIRE(f.frequency.size() == n / 2);
  std::size_t best = 0;
  for (std::size_t k = 0; k < f.amplitude.size(); ++k)
    if (f.amplitude[k] > f.amplitude[best]) best = k;
  CHECK(f.frequency[best] == doctest::Approx(w));
  CHECK(f.amplitude[best] == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("predicted lines merge equal frequencies") {
  const std::vector<PairTerm> pairs = {{0, 1, 0.5, 0.1}, {2, 3, 0.5 + 1e-10, 0.2}, {0, 2, 0.9, -0.05}};
  const auto lines = predicted_lines(pairs);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].amplitude == doctest::Approx(0.3));
  CHECK(lines[0].multiplicity == 2);
  CHECK(lines[0].i == 2);
  CHECK(lines[1].amplitude == doctest::Approx(0.05));
}

TEST_CASE("fourier branches match predicted lines") {
  const QuenchResult& r = quench();
  const Matrix x2 = r.in_eigenbasis(model().x2_block(Parity::Even));
  const auto s = whole_line_variance(r, x2, 4);
  const BranchSpectrum b = fourier_branches(r.times, s, variance_pair_terms(r, x2, 4));
  REQUIRE_FALSE(b.peaks.empty());
  CHECK(b.lines_above_1pct >= 1);
  const auto top = std::max_element(b.peaks.begin(), b.peaks.end(),
                                    [](const PeakMatch& x, const PeakMatch& y) { return x.amplitude < y.amplitude; });
  CHECK(top->matched);
}
