#include "latquench/orbitals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latquench/errors.hpp"

namespace lq {

BandAssignment classify_bands(const OrbitalSet& eigen, int n_sites, int n_bands) {
  if (n_sites < 1 || n_bands < 1) throw std::invalid_argument("classify_bands: need n_sites, n_bands >= 1");
  const int needed = n_sites * n_bands;
  if (eigen.size() < needed) {
    throw std::invalid_argument("classify_bands: need at least " + std::to_string(needed) + " eigenstates");
  }
  const auto& e = eigen.energies;
  BandAssignment out;
  out.n_sites = n_sites;
  out.n_bands = n_bands;
  std::vector<double> max_spacing(n_bands, 0.0);
  for (int b = 0; b < n_bands; ++b) {
    std::vector<int> band;
    for (int s = 0; s < n_sites; ++s) band.push_back(b * n_sites + s);
    for (int s = 1; s < n_sites; ++s) {
      max_spacing[b] = std::max(max_spacing[b], e[b * n_sites + s] - e[b * n_sites + s - 1]);
    }
    out.members.push_back(std::move(band));
  }
  // Band boundaries inside the truncation, plus the one just above it when
  // the eigen set is large enough to see it.
  for (int b = 0; b < n_bands; ++b) {
    const int upper = (b + 1) * n_sites;
    if (upper >= eigen.size()) break;
    const double gap = e[upper] - e[upper - 1];
    double inside = max_spacing[b];
    if (b + 1 < n_bands) inside = std::max(inside, max_spacing[b + 1]);
    if (gap <= inside) {
      std::ostringstream msg;
      msg << "band overlap between band " << b << " and band " << b + 1 << ": gap " << gap
          << " E_R not larger than intra-band spacing " << inside << " E_R";
      throw BandOverlapError(msg.str());
    }
  }
  return out;
}

BandProjection band_position_operator(const OrbitalSet& eigen, const Grid& grid,
                                      const BandAssignment& bands, int band) {
  const auto& idx = bands.band(band);
  const int s = static_cast<int>(idx.size());
  const Eigen::Map<const Vector> x(grid.points.data(), grid.n_points);
  BandProjection out;
  out.band = band;
  out.rank = s;
  out.position_matrix.resize(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = grid.weight * (eigen.vectors.col(idx[i]).array() * x.array() *
                                      eigen.vectors.col(idx[j]).array()).sum();
      out.position_matrix(i, j) = v;
      out.position_matrix(j, i) = v;
    }
  }
  return out;
}

OrbitalSet wannier_states(const OrbitalSet& eigen, const Grid& grid, const BandAssignment& bands) {
  const int n_sites = bands.n_sites;
  const int total = n_sites * bands.n_bands;
  const Eigen::Map<const Vector> x(grid.points.data(), grid.n_points);

  OrbitalSet out;
  out.kind = BasisKind::Wannier;
  out.weight = grid.weight;
  out.vectors.resize(grid.n_points, total);
  out.energies.resize(total);
  out.band_of.resize(total);
  out.site_of.resize(total);
  out.centers.resize(total);
  out.spreads.resize(total);

  for (int b = 0; b < bands.n_bands; ++b) {
    const auto& idx = bands.band(b);
    const BandProjection proj = band_position_operator(eigen, grid, bands, b);
    const EigenDecomposition xe = symmetric_eigen(proj.position_matrix);
    Matrix band_vecs(grid.n_points, n_sites);
    for (int i = 0; i < n_sites; ++i) band_vecs.col(i) = eigen.vectors.col(idx[i]);

    for (int s = 0; s < n_sites; ++s) {
      const int o = orbital_index(n_sites, b, s);
      const double center = xe.values[s];
      Vector phi = band_vecs * xe.vectors.col(s);

      const double moment = grid.weight * (phi.array() * (x.array() - center).pow(b)).sum();
      double sign_ref = moment;
      if (std::abs(moment) < 1e-12) {
        int nearest = 0;
        for (int j = 1; j < grid.n_points; ++j) {
          if (std::abs(x[j] - center) < std::abs(x[nearest] - center)) nearest = j;
        }
        sign_ref = phi[nearest];
      }
      if (sign_ref < 0.0) phi = -phi;

      double energy = 0.0;
      for (int i = 0; i < n_sites; ++i) energy += xe.vectors(i, s) * xe.vectors(i, s) * eigen.energies[idx[i]];

      const double m2 = grid.weight * (phi.array().square() * x.array().square()).sum();
      out.vectors.col(o) = phi;
      out.energies[o] = energy;
      out.band_of[o] = b;
      out.site_of[o] = s;
      out.centers[o] = center;
      out.spreads[o] = std::sqrt(std::max(0.0, m2 - center * center));
    }
  }
  return out;
}

}  // namespace lq
