#pragma once

// Bosonic number-state basis over band-major (band, site) orbitals.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lq {

struct OrbitalLayout {
  int n_sites = 3;
  int n_bands = 1;

  int size() const { return n_sites * n_bands; }
  int index(int band, int site) const { return band * n_sites + site; }
  int band_of(int orbital) const { return orbital / n_sites; }
  int site_of(int orbital) const { return orbital % n_sites; }
  int center() const { return n_sites / 2; }
  /// Orbital that (band, site) maps to under x -> -x.
  int mirror(int orbital) const { return index(band_of(orbital), n_sites - 1 - site_of(orbital)); }
};

/// Occupation vector, band-major.
struct NumberState {
  std::vector<int> occupations;

  int total() const;
  bool operator==(const NumberState&) const = default;
  auto operator<=>(const NumberState&) const = default;
};

inline constexpr std::size_t kDefaultBasisCap = 2'000'000;

/// All occupation vectors of N bosons in M orbitals in ascending
/// lexicographic order. Index lookup is a combinatorial ranking, so no
/// hash table is stored.
class FockBasis {
 public:
  FockBasis(int n_particles, OrbitalLayout layout, std::size_t cap = kDefaultBasisCap);

  int n_particles() const { return n_particles_; }
  int n_orbitals() const { return layout_.size(); }
  const OrbitalLayout& layout() const { return layout_; }
  std::size_t size() const { return size_; }

  std::span<const std::uint8_t> occupations(std::size_t i) const {
    return {storage_.data() + i * n_orbitals(), static_cast<std::size_t>(n_orbitals())};
  }
  NumberState state(std::size_t i) const;

  /// Rank of an occupation vector; no validation beyond the total count.
  std::size_t rank(std::span<const std::uint8_t> occ) const;
  std::optional<std::size_t> find(const NumberState& s) const;
  std::size_t index(const NumberState& s) const;  // throws std::out_of_range

  /// Number of states of `n` bosons in `m` orbitals.
  static std::size_t count(int n, int m);

 private:
  int n_particles_;
  OrbitalLayout layout_;
  std::size_t size_ = 0;
  std::vector<std::uint8_t> storage_;
  // completions_[r][k]: states of r bosons in k trailing orbitals
  std::vector<std::vector<std::size_t>> completions_;
};

/// Site-reversed occupations and the phase picked up by the Wannier
/// orbitals: (-1) per boson in an odd band.
struct Reflection {
  NumberState state;
  int sign = 1;
};
Reflection reflect_state(const NumberState& s, const OrbitalLayout& layout);

struct ParityInfo {
  std::vector<std::size_t> partner;
  std::vector<std::int8_t> sign;

  bool self_symmetric(std::size_t i) const { return partner[i] == i; }
};
ParityInfo build_parity(const FockBasis& basis);

enum class IClass { SinglePair, DoublePair, Triplet, Quadruplet, Mixed, Undefined };

struct StateClass {
  int h_class = 0;  // sum over bosons of (site - centre)^2
  IClass i_class = IClass::Undefined;
};

/// h: bosons outside the centre weighted by squared distance. i: occupation
/// multiset of a four-boson, three-site lowest-band state; Mixed with any
/// higher-band quanta; Undefined for other sizes.
StateClass classify_state(const NumberState& s, const OrbitalLayout& layout);
std::string to_string(IClass c);

enum class Combination { None, Symmetric, Antisymmetric };

/// A number state or a parity combination |n>_S / |n>_A.
struct StateLabel {
  NumberState state;
  Combination combo = Combination::None;

  bool operator==(const StateLabel&) const = default;
};

/// "|1,3,0>", "|1,3,0>_S", "|1,1(0)x1(1),1>".
std::string format_label(const NumberState& s, const OrbitalLayout& layout);
std::string format_label(const StateLabel& label, const OrbitalLayout& layout);
/// Inverse of format_label. Throws std::invalid_argument.
StateLabel parse_label(const std::string& text, const OrbitalLayout& layout);

}  // namespace lq
