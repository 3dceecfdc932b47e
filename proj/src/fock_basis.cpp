#include "latquench/fock_basis.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "latquench/errors.hpp"

namespace lq {

int NumberState::total() const { return std::accumulate(occupations.begin(), occupations.end(), 0); }

std::size_t FockBasis::count(int n, int m) {
  if (n < 0 || m < 1) return 0;
  // C(n + m - 1, n) with saturation
  long double c = 1.0L;
  for (int k = 1; k <= n; ++k) c = c * (m - 1 + k) / k;
  if (c > 1e18L) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(c + 0.5L);
}

FockBasis::FockBasis(int n_particles, OrbitalLayout layout, std::size_t cap)
    : n_particles_(n_particles), layout_(layout) {
  const int m = layout_.size();
  if (n_particles < 1 || m < 1) throw std::invalid_argument("FockBasis: need N >= 1 and M >= 1");
  if (n_particles > 255) throw std::invalid_argument("FockBasis: N above 255 not supported");
  size_ = count(n_particles, m);
  if (size_ > cap) {
    throw ResourceCapError("Fock basis of " + std::to_string(n_particles) + " bosons in " + std::to_string(m) +
                           " orbitals exceeds the cap of " + std::to_string(cap) + " states");
  }
  completions_.assign(n_particles + 1, std::vector<std::size_t>(m + 1, 0));
  for (int r = 0; r <= n_particles; ++r) {
    for (int k = 1; k <= m; ++k) completions_[r][k] = count(r, k);
  }

  storage_.resize(size_ * m);
  std::vector<std::uint8_t> occ(m, 0);
  std::size_t next = 0;
  // ascending lexicographic: each position runs 0..remaining, last takes the rest
  auto fill = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == m - 1) {
      occ[pos] = static_cast<std::uint8_t>(remaining);
      std::copy(occ.begin(), occ.end(), storage_.begin() + next * m);
      ++next;
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      occ[pos] = static_cast<std::uint8_t>(v);
      self(self, pos + 1, remaining - v);
    }
  };
  fill(fill, 0, n_particles);
}

NumberState FockBasis::state(std::size_t i) const {
  const auto occ = occupations(i);
  return NumberState{std::vector<int>(occ.begin(), occ.end())};
}

std::size_t FockBasis::rank(std::span<const std::uint8_t> occ) const {
  const int m = n_orbitals();
  std::size_t r = 0;
  int remaining = n_particles_;
  for (int pos = 0; pos < m - 1; ++pos) {
    const int trailing = m - pos - 1;
    for (int v = 0; v < occ[pos]; ++v) r += completions_[remaining - v][trailing];
    remaining -= occ[pos];
  }
  return r;
}

std::optional<std::size_t> FockBasis::find(const NumberState& s) const {
  if (static_cast<int>(s.occupations.size()) != n_orbitals()) return std::nullopt;
  std::vector<std::uint8_t> occ(s.occupations.size());
  for (std::size_t k = 0; k < occ.size(); ++k) {
    if (s.occupations[k] < 0) return std::nullopt;
    occ[k] = static_cast<std::uint8_t>(s.occupations[k]);
  }
  if (s.total() != n_particles_) return std::nullopt;
  return rank(occ);
}

std::size_t FockBasis::index(const NumberState& s) const {
  const auto i = find(s);
  if (!i) throw std::out_of_range("number state not in basis");
  return *i;
}

Reflection reflect_state(const NumberState& s, const OrbitalLayout& layout) {
  Reflection out;
  out.state.occupations.resize(s.occupations.size());
  int odd_quanta = 0;
  for (int o = 0; o < layout.size(); ++o) {
    out.state.occupations[layout.mirror(o)] = s.occupations[o];
    if (layout.band_of(o) % 2 == 1) odd_quanta += s.occupations[o];
  }
  out.sign = (odd_quanta % 2 == 0) ? 1 : -1;
  return out;
}

ParityInfo build_parity(const FockBasis& basis) {
  const OrbitalLayout& layout = basis.layout();
  const int m = layout.size();
  ParityInfo out;
  out.partner.resize(basis.size());
  out.sign.resize(basis.size());
  std::vector<std::uint8_t> mirrored(m);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto occ = basis.occupations(i);
    int odd_quanta = 0;
    for (int o = 0; o < m; ++o) {
      mirrored[layout.mirror(o)] = occ[o];
      if (layout.band_of(o) % 2 == 1) odd_quanta += occ[o];
    }
    out.partner[i] = basis.rank(mirrored);
    out.sign[i] = (odd_quanta % 2 == 0) ? 1 : -1;
  }
  return out;
}

StateClass classify_state(const NumberState& s, const OrbitalLayout& layout) {
  StateClass out;
  const int c = layout.center();
  bool higher = false;
  for (int o = 0; o < layout.size(); ++o) {
    const int d = layout.site_of(o) - c;
    out.h_class += s.occupations[o] * d * d;
    if (layout.band_of(o) > 0 && s.occupations[o] > 0) higher = true;
  }
  if (higher) {
    out.i_class = IClass::Mixed;
  } else if (layout.n_sites == 3 && s.total() == 4) {
    std::vector<int> occ(s.occupations.begin(), s.occupations.begin() + 3);
    std::sort(occ.rbegin(), occ.rend());
    if (occ == std::vector<int>{2, 1, 1}) out.i_class = IClass::SinglePair;
    else if (occ == std::vector<int>{2, 2, 0}) out.i_class = IClass::DoublePair;
    else if (occ == std::vector<int>{3, 1, 0}) out.i_class = IClass::Triplet;
    else out.i_class = IClass::Quadruplet;
  }
  return out;
}

std::string to_string(IClass c) {
  switch (c) {
    case IClass::SinglePair: return "SP";
    case IClass::DoublePair: return "DP";
    case IClass::Triplet: return "T";
    case IClass::Quadruplet: return "Q";
    case IClass::Mixed: return "mixed";
    case IClass::Undefined: break;
  }
  return "undefined";
}

std::string format_label(const NumberState& s, const OrbitalLayout& layout) {
  std::ostringstream out;
  out << '|';
  for (int site = 0; site < layout.n_sites; ++site) {
    if (site > 0) out << ',';
    bool only_band0 = true;
    for (int b = 1; b < layout.n_bands; ++b) {
      if (s.occupations[layout.index(b, site)] > 0) only_band0 = false;
    }
    if (only_band0) {
      out << s.occupations[layout.index(0, site)];
      continue;
    }
    bool first = true;
    for (int b = 0; b < layout.n_bands; ++b) {
      const int n = s.occupations[layout.index(b, site)];
      if (n == 0) continue;
      if (!first) out << 'x';
      out << n << '(' << b << ')';
      first = false;
    }
  }
  out << '>';
  return out.str();
}

std::string format_label(const StateLabel& label, const OrbitalLayout& layout) {
  std::string text = format_label(label.state, layout);
  if (label.combo == Combination::Symmetric) text += "_S";
  if (label.combo == Combination::Antisymmetric) text += "_A";
  return text;
}

StateLabel parse_label(const std::string& text, const OrbitalLayout& layout) {
  auto fail = [&](const std::string& why) {
    return std::invalid_argument("cannot parse state label '" + text + "': " + why);
  };
  StateLabel out;
  std::string body = text;
  if (body.size() >= 2 && body[body.size() - 2] == '_') {
    const char k = body.back();
    if (k == 'S') out.combo = Combination::Symmetric;
    else if (k == 'A') out.combo = Combination::Antisymmetric;
    else throw fail("unknown suffix");
    body.resize(body.size() - 2);
  }
  if (body.size() < 3 || body.front() != '|' || body.back() != '>') throw fail("expected |...>");
  body = body.substr(1, body.size() - 2);

  out.state.occupations.assign(layout.size(), 0);
  std::vector<std::string> sites;
  std::stringstream ss(body);
  for (std::string part; std::getline(ss, part, ',');) sites.push_back(part);
  if (static_cast<int>(sites.size()) != layout.n_sites) throw fail("wrong number of sites");

  for (int site = 0; site < layout.n_sites; ++site) {
    std::stringstream terms(sites[site]);
    for (std::string term; std::getline(terms, term, 'x');) {
      int band = 0;
      const auto open = term.find('(');
      std::string count = term;
      if (open != std::string::npos) {
        if (term.back() != ')') throw fail("unbalanced band superscript");
        count = term.substr(0, open);
        try {
          band = std::stoi(term.substr(open + 1, term.size() - open - 2));
        } catch (const std::exception&) {
          throw fail("bad band index");
        }
      }
      int n = 0;
      try {
        std::size_t used = 0;
        n = std::stoi(count, &used);
        if (used != count.size()) throw fail("trailing characters");
      } catch (const std::invalid_argument&) {
        throw fail("bad occupation");
      }
      if (band < 0 || band >= layout.n_bands || n < 0) throw fail("band or occupation out of range");
      out.state.occupations[layout.index(band, site)] += n;
    }
  }
  return out;
}

}  // namespace lq
