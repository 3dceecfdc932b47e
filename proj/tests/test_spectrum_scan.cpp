#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "latquench/errors.hpp"
#include "latquench/spectrum_scan.hpp"

using namespace lq;

namespace {

const Model& lowest_band() {
  static const Model m([] {
    ModelConfig mc;
    mc.n_bands = 1;
    return mc;
  }());
  return m;
}

}  // namespace

TEST_CASE("dominant label picks the largest weight, ties to the lower column") {
  const std::vector<StateLabel> labels = {{NumberState{{0, 4, 0}}, Combination::None},
                                          {NumberState{{1, 3, 0}}, Combination::Symmetric},
                                          {NumberState{{1, 2, 1}}, Combination::None}};
  Vector v(3);
  v << 0.3, -0.9, 0.3;
  const DominantLabel d = dominant_label(v, labels);
  CHECK(d.column == 1);
  CHECK(d.weight == doctest::Approx(0.81));
  CHECK(d.label == labels[1]);
  Vector tie(3);
  tie << 0.0, std::sqrt(0.5), -std::sqrt(0.5);
  CHECK(dominant_label(tie, labels).column == 1);
}

TEST_CASE("scan configuration validation") {
  ScanConfig c;
  c.omega_max = c.omega_min;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScanConfig{};
  c.n_points = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScanConfig{};
  c.omega_min = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_NOTHROW(ScanConfig{}.validate());
}

TEST_CASE("curve continuation is a permutation at every point") {
  ScanConfig c;
  c.n_points = 41;
  c.n_states = 9;
  const SpectralScan s = scan_spectrum(lowest_band(), c);
  REQUIRE(s.points.size() == 41);
  CHECK(s.points.front().omega_sq == 0.0);
  CHECK(s.points.back().omega_sq == doctest::Approx(0.8));
  for (const auto& perm : s.level_of_curve) {
    std::vector<int> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) CHECK(sorted[i] == i);
  }
  for (const auto& p : s.points) {
    for (Eigen::Index i = 1; i < p.energies.size(); ++i) CHECK(p.energies[i] >= p.energies[i - 1]);
  }
}

TEST_CASE("detected crossings exchange labels and slopes") {
  ScanConfig c;
  c.n_points = 81;
  c.n_states = 9;
  const Model& m = lowest_band();
  const SpectralScan s = scan_spectrum(m, c);
  const auto crossings = detect_crossings(m, s);
  REQUIRE_FALSE(crossings.empty());
  for (const auto& x : crossings) {
    CHECK(x.exchanged);
    CHECK(x.lower_before == x.upper_after);
    CHECK(x.upper_before == x.lower_after);
    CHECK(x.min_gap > 0.0);
    CHECK(x.omega_sq_c >= c.omega_min);
    CHECK(x.omega_sq_c <= c.omega_max);
    CHECK(x.width == doctest::Approx(x.min_gap / x.slope_difference));
    if (x.width < kVeryNarrowWidth) CHECK(x.cls == CrossingClass::VeryNarrow);
    else if (x.lower_level == 0) CHECK(x.cls == CrossingClass::Wide);
    else CHECK(x.cls == CrossingClass::Narrow);
    // the gap really is a local minimum
    const ScanPoint at = spectrum_at(m, x.omega_sq_c, x.lower_level + 2, c.parity);
    const double g = at.energies[x.lower_level + 1] - at.energies[x.lower_level];
    // located to the refinement tolerance
    CHECK(g == doctest::Approx(x.min_gap).epsilon(1e-2));
    for (double d : {-0.01, 0.01}) {
      const ScanPoint side = spectrum_at(m, x.omega_sq_c + d * x.width, x.lower_level + 2, c.parity);
      CHECK(side.energies[x.lower_level + 1] - side.energies[x.lower_level] >= g * (1.0 - 1e-2));
    }
  }
}

TEST_CASE("ground state crossing of the centred state in the lowest band") {
  ScanConfig c;
  c.n_points = 81;
  c.n_states = 9;
  const Model& m = lowest_band();
  const auto crossings = detect_crossings(m, scan_spectrum(m, c));
  const StateLabel centre{NumberState{{0, 4, 0}}, Combination::None};
  const auto it = std::find_if(crossings.begin(), crossings.end(), [&](const AvoidedCrossing& x) {
    return x.lower_level == 0 && (x.lower_after == centre || x.lower_before == centre);
  });
  REQUIRE(it != crossings.end());
  CHECK(it->cls == CrossingClass::Wide);
}
