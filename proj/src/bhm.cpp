#include "latquench/bhm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lq {

BhmParams extract_params(const OneBodyIntegrals& lattice, const TwoBodyIntegrals& w, double omega_sq, int n_sites) {
  if (n_sites < 3 || n_sites % 2 == 0) throw std::invalid_argument("extract_params: need an odd site count >= 3");
  if (lattice.h.rows() < n_sites) throw std::invalid_argument("extract_params: fewer orbitals than sites");
  const int c = n_sites / 2;
  const Matrix h = lattice.h.topLeftCorner(n_sites, n_sites) + 0.25 * omega_sq * lattice.x2.topLeftCorner(n_sites, n_sites);
  const Matrix& h0 = lattice.h;
  const Matrix& x2 = lattice.x2;

  BhmParams p;
  p.n_sites = n_sites;
  p.omega_sq = omega_sq;
  const double j_left = -h(c, c - 1);
  const double j_right = -h(c, c + 1);
  p.J = 0.5 * (j_left + j_right);
  p.hopping_asymmetry = std::abs(j_left - j_right);
  if (p.hopping_asymmetry > 1e-8) {
    std::ostringstream msg;
    msg << "left/right hopping differ by " << p.hopping_asymmetry << " E_R (broken parity)";
    p.warnings.push_back(msg.str());
  }
  p.U = w(c, c, c, c);
  p.eps_wall = 0.5 * (h0(c - 1, c - 1) + h0(c + 1, c + 1)) - h0(c, c);
  p.eps_per_omega_sq = 0.25 * (0.5 * (x2(c - 1, c - 1) + x2(c + 1, c + 1)) - x2(c, c));
  p.eps = p.eps_wall + p.eps_per_omega_sq * omega_sq;
  p.e0 = h(c, c);
  return p;
}

Matrix bhm_one_body(const BhmParams& params) {
  const int s = params.n_sites;
  const int c = s / 2;
  Matrix h = Matrix::Zero(s, s);
  for (int i = 0; i < s; ++i) {
    h(i, i) = params.e0 + params.eps * (i - c) * (i - c);
    if (i + 1 < s) {
      h(i, i + 1) = -params.J;
      h(i + 1, i) = -params.J;
    }
  }
  return h;
}

ManyBodyOperator assemble_bhm(const FockBasis& basis, const BhmParams& params) {
  if (basis.layout().n_bands != 1 || basis.layout().n_sites != params.n_sites) {
    throw std::invalid_argument("assemble_bhm: basis must be a single band over the BHM sites");
  }
  TwoBodyIntegrals w(params.n_sites);
  for (int i = 0; i < params.n_sites; ++i) w(i, i, i, i) = params.U;
  return assemble_operator(basis, bhm_one_body(params), &w);
}

DiagonalEnergy diagonal_energy(const NumberState& s, const BhmParams& params) {
  const int c = params.n_sites / 2;
  DiagonalEnergy e;
  for (int i = 0; i < params.n_sites; ++i) {
    const int n = s.occupations.at(i);
    e.intercept += 0.5 * params.U * n * (n - 1) + params.e0 * n;
    e.slope += static_cast<double>((i - c) * (i - c) * n);
  }
  return e;
}

double diagonal_crossing(const NumberState& a, const NumberState& b, const BhmParams& params) {
  const DiagonalEnergy ea = diagonal_energy(a, params);
  const DiagonalEnergy eb = diagonal_energy(b, params);
  if (ea.slope == eb.slope) throw std::domain_error("no crossing: diagonal energies are parallel in eps");
  return (eb.intercept - ea.intercept) / (ea.slope - eb.slope);
}

double bhm_matrix_element(const StateLabel& a, const StateLabel& b, const FockBasis& basis, const BhmParams& params) {
  const ManyBodyOperator h = assemble_bhm(basis, params);
  const ParityInfo parity = build_parity(basis);
  auto vec = [&](const StateLabel& l) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
    const std::size_t i = basis.index(l.state);
    if (l.combo == Combination::None) {
      v[i] = 1.0;
      return v;
    }
    const std::size_t j = parity.partner[i];
    if (j == i) throw std::invalid_argument("parity combination of a self-mirrored state");
    const double s = parity.sign[i] * (l.combo == Combination::Symmetric ? 1.0 : -1.0);
    v[i] = 1.0 / std::sqrt(2.0);
    v[j] = s / std::sqrt(2.0);
    return v;
  };
  const Vector va = vec(a);
  const Vector vb = vec(b);
  return va.dot(h.matrix * vb);
}

}  // namespace lq
