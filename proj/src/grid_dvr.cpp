#include "latquench/grid_dvr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lq {

void PotentialSpec::validate() const {
  if (v0 < 0.0) throw std::invalid_argument("v0 must be non-negative");
  if (omega_sq < 0.0) throw std::invalid_argument("omega_sq must be non-negative");
  if (g < 0.0) throw std::invalid_argument("g must be non-negative");
  if (n_sites < 1 || n_sites % 2 == 0) throw std::invalid_argument("n_sites must be a positive odd integer");
}

Grid build_grid(int n_points, int n_sites) {
  if (n_points < 2) throw std::invalid_argument("build_grid: n_points must be >= 2");
  if (n_sites < 1 || n_sites % 2 == 0) throw std::invalid_argument("build_grid: n_sites must be a positive odd integer");
  Grid grid;
  grid.n_points = n_points;
  grid.x_max = n_sites * std::numbers::pi / 2.0;
  grid.x_min = -grid.x_max;
  grid.weight = grid.length() / (n_points + 1);
  grid.points.resize(n_points);
  for (int j = 0; j < n_points; ++j) {
    // symmetric construction so that points[mirror(j)] == -points[j] exactly
    grid.points[j] = grid.weight * (j + 1 - 0.5 * (n_points + 1));
  }
  return grid;
}

Vector region_weights(const Grid& grid, const std::optional<Interval>& region) {
  Vector w = Vector::Constant(grid.n_points, grid.weight);
  if (!region) return w;
  const double tol = 1e-12 * grid.length();
  for (int j = 0; j < grid.n_points; ++j) {
    const double x = grid.points[j];
    if (std::abs(x - region->lo) <= tol || std::abs(x - region->hi) <= tol) {
      w[j] = 0.5 * grid.weight;
    } else if (x < region->lo || x > region->hi) {
      w[j] = 0.0;
    }
  }
  return w;
}

Matrix kinetic_matrix(const Grid& grid) {
  // Colbert-Miller sine-DVR kinetic energy for hbar^2/2m = 1.
  const int n = grid.n_points;
  const int big_n = n + 1;
  const double pi = std::numbers::pi;
  const double pref = pi * pi / (2.0 * grid.length() * grid.length());
  Matrix t(n, n);
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      double value;
      if (a == b) {
        const double s = std::sin(pi * a / big_n);
        value = pref * ((2.0 * big_n * big_n + 1.0) / 3.0 - 1.0 / (s * s));
      } else {
        const double sm = std::sin(pi * (a - b) / (2.0 * big_n));
        const double sp = std::sin(pi * (a + b) / (2.0 * big_n));
        const double sign = ((a - b) % 2 == 0) ? 1.0 : -1.0;
        value = pref * sign * (1.0 / (sm * sm) - 1.0 / (sp * sp));
      }
      t(a - 1, b - 1) = value;
    }
  }
  // exact symmetry
  return 0.5 * (t + t.transpose());
}

Vector potential_on_grid(const Grid& grid, const PotentialSpec& spec) {
  Vector v(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) {
    const double x = grid.points[j];
    const double s = std::sin(x);
    v[j] = spec.v0 * s * s + 0.25 * spec.omega_sq * x * x;
  }
  return v;
}

Matrix one_body_grid_hamiltonian(const Grid& grid, const PotentialSpec& spec) {
  Matrix h = kinetic_matrix(grid);
  h.diagonal() += potential_on_grid(grid, spec);
  return h;
}

namespace {

// Rotate columns [first, last) of `vecs` (DVR coefficients) onto reflection
// eigenvectors.
void resolve_parity_cluster(const Grid& grid, Matrix& vecs, int first, int last) {
  const int size = last - first;
  Matrix refl(size, size);
  for (int a = 0; a < size; ++a) {
    for (int b = 0; b < size; ++b) {
      double acc = 0.0;
      for (int j = 0; j < grid.n_points; ++j) acc += vecs(j, first + a) * vecs(grid.mirror(j), first + b);
      refl(a, b) = acc;
    }
  }
  refl = 0.5 * (refl + refl.transpose());
  const EigenDecomposition rot = symmetric_eigen(refl);
  vecs.middleCols(first, size) = vecs.middleCols(first, size) * rot.vectors;
}

}  // namespace

OrbitalSet single_particle_eigs(const Grid& grid, const PotentialSpec& spec, int n_states) {
  if (n_states < 1 || n_states > grid.n_points) {
    throw std::invalid_argument("single_particle_eigs: n_states must lie in [1, n_points]");
  }
  const EigenDecomposition eig = symmetric_eigen_lowest(one_body_grid_hamiltonian(grid, spec), n_states);
  Matrix vecs = eig.vectors;

  constexpr double kDegenerate = 1e-9;
  int start = 0;
  for (int i = 1; i <= n_states; ++i) {
    if (i == n_states || eig.values[i] - eig.values[i - 1] >= kDegenerate) {
      if (i - start > 1) resolve_parity_cluster(grid, vecs, start, i);
      start = i;
    }
  }

  OrbitalSet out;
  out.kind = BasisKind::Eigen;
  out.weight = grid.weight;
  out.energies.assign(eig.values.data(), eig.values.data() + n_states);
  out.vectors = vecs / std::sqrt(grid.weight);
  for (int c = 0; c < n_states; ++c) {
    for (int j = 0; j < grid.n_points; ++j) {
      const double v = out.vectors(j, c);
      if (std::abs(v) > 1e-6) {
        if (v < 0.0) out.vectors.col(c) *= -1.0;
        break;
      }
    }
  }
  out.band_of.assign(n_states, -1);
  out.site_of.assign(n_states, -1);
  return out;
}

}  // namespace lq
