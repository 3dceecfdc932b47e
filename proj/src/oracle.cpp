#include "latquench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latquench/errors.hpp"

namespace lq::oracle {

std::array<double, 3> symmetric3_eigenvalues(const std::array<std::array<double, 3>, 3>& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  std::array<double, 3> e;
  if (p1 == 0.0) {
    e = {a[0][0], a[1][1], a[2][2]};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  double b[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                     b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  e = {lo, 3.0 * q - hi - lo, hi};
  std::sort(e.begin(), e.end());
  return e;
}

std::array<double, 3> two_site_two_boson(double J, double U, double eps) {
  const double t = -std::sqrt(2.0) * J;
  return symmetric3_eigenvalues({{{U, t, 0.0}, {t, eps, t}, {0.0, t, U + 2.0 * eps}}});
}

Integrals integrals(const OrbitalSet& orbitals, const Grid& grid, const PotentialSpec& spec) {
  const int m = orbitals.size();
  const int n = grid.n_points;
  const Matrix t = kinetic_matrix(grid);
  const Vector v = potential_on_grid(grid, spec);
  const Matrix& phi = orbitals.vectors;
  Integrals out;
  out.m = m;
  out.h = Matrix::Zero(m, m);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = v[i] * phi(i, q);
        for (int j = 0; j < n; ++j) row += t(i, j) * phi(j, q);
        acc += phi(i, p) * row;
      }
      out.h(p, q) = grid.weight * acc;
    }
  }
  out.w.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i) acc += phi(i, p) * phi(i, q) * phi(i, r) * phi(i, s);
          out.w[((p * m + q) * m + r) * m + s] = spec.g * grid.weight * acc;
        }
  return out;
}

namespace {

// Non-decreasing orbital tuples of length n over m orbitals.
void multisets(int n, int m, int first, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int p = first; p < m; ++p) {
    cur.push_back(p);
    multisets(n, m, p, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> distinct_permutations(std::vector<int> t) {
  std::sort(t.begin(), t.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(t);
  } while (std::next_permutation(t.begin(), t.end()));
  return out;
}

}  // namespace

Vector dense_brute_force(const Matrix& h, const std::function<double(int, int, int, int)>& w, int n_particles) {
  const int m = static_cast<int>(h.rows());
  std::vector<std::vector<int>> states;
  std::vector<int> cur;
  multisets(n_particles, m, 0, cur, states);
  const int d = static_cast<int>(states.size());
  if (d > kDenseCap) throw ResourceCapError("dense oracle limited to " + std::to_string(kDenseCap) + " states");

  std::vector<std::vector<std::vector<int>>> perms(d);
  for (int i = 0; i < d; ++i) perms[i] = distinct_permutations(states[i]);

  // <S|H|S'> = sqrt(c/c') sum_{t' in S'} <t0|H|t'>, t0 any tuple of S,
  // because H commutes with particle permutations.
  Matrix H = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const std::vector<int>& t0 = states[a];
    const double ca = static_cast<double>(perms[a].size());
    for (int b = 0; b < d; ++b) {
      double acc = 0.0;
      for (const auto& t : perms[b]) {
        int mismatched = 0;
        for (int k = 0; k < n_particles; ++k) mismatched += (t0[k] != t[k]) ? 1 : 0;
        if (mismatched > 2) continue;
        for (int i = 0; i < n_particles; ++i) {
          bool others = true;
          for (int k = 0; k < n_particles && others; ++k) others = (k == i) || t0[k] == t[k];
          if (others) acc += h(t0[i], t[i]);
        }
        for (int i = 0; i < n_particles; ++i) {
          for (int j = i + 1; j < n_particles; ++j) {
            bool others = true;
            for (int k = 0; k < n_particles && others; ++k) others = (k == i) || (k == j) || t0[k] == t[k];
            if (others) acc += w(t0[i], t0[j], t[i], t[j]);
          }
        }
      }
      H(a, b) = std::sqrt(ca / static_cast<double>(perms[b].size())) * acc;
    }
  }
  H = 0.5 * (H + H.transpose()).eval();
  return symmetric_eigenvalues(H);
}

Vector dense_brute_force(const Config& config) {
  const Grid grid = build_grid(config.n_grid, config.n_sites);
  PotentialSpec bare;
  bare.v0 = config.v0;
  bare.n_sites = config.n_sites;
  bare.g = config.g;
  bare.omega_sq = 0.0;
  const int n_orb = config.n_sites * config.n_bands;
  const OrbitalSet eig = single_particle_eigs(grid, bare, n_orb + 1);
  const OrbitalSet wan = wannier_states(eig, grid, classify_bands(eig, config.n_sites, config.n_bands));
  PotentialSpec trapped = bare;
  trapped.omega_sq = config.omega_sq;
  const Integrals ints = integrals(wan, grid, trapped);
  return dense_brute_force(ints.h, [&](int p, int q, int r, int s) { return ints.W(p, q, r, s); }, config.n_particles);
}

}  // namespace lq::oracle
