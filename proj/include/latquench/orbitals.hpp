#pragma once

// Band grouping, band-projected position operators and Wannier states.

#include <vector>

#include "latquench/grid_dvr.hpp"

namespace lq {

struct BandAssignment {
  int n_sites = 0;
  int n_bands = 0;
  std::vector<std::vector<int>> members;  // per band, eigen-orbital indices by energy

  const std::vector<int>& band(int b) const { return members.at(b); }
};

/// Partition the lowest S * n_bands eigenstates into consecutive groups of S.
/// Throws BandOverlapError when a band boundary gap is not larger than the
/// largest level spacing inside either adjacent band.
BandAssignment classify_bands(const OrbitalSet& eigen, int n_sites, int n_bands);

struct BandProjection {
  int band = 0;
  int rank = 0;
  Matrix position_matrix;  // <psi_i|x|psi_j> within the band
};

BandProjection band_position_operator(const OrbitalSet& eigen, const Grid& grid,
                                      const BandAssignment& bands, int band);

/// Site-localised states from the eigenvectors of each band's position
/// operator, sorted by (band, site). Each vector is signed so that its
/// b-th moment about its own centre, sum_j w (x_j - c)^b phi(x_j), is
/// positive; this gives the reflection rule phi_{b,s}(-x) =
/// (-1)^b phi_{b,S-1-s}(x). `energies` hold <phi|h|phi>.
OrbitalSet wannier_states(const OrbitalSet& eigen, const Grid& grid, const BandAssignment& bands);

/// Index of orbital (band, site) in a band-major layout.
inline int orbital_index(int n_sites, int band, int site) { return band * n_sites + site; }

}  // namespace lq
