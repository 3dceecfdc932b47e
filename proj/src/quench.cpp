#include "latquench/quench.hpp"

#include <cmath>
#include <sstream>

#include "latquench/errors.hpp"

namespace lq {

void QuenchProtocol::validate() const {
  if (omega_i_sq < 0.0 || omega_f_sq < 0.0) throw ConfigError("trap strengths must be non-negative");
  if (omega_f_sq > omega_i_sq) throw ConfigError("quench must lower the trap: omega_f_sq <= omega_i_sq");
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(dt_sample > 0.0)) throw ConfigError("dt_sample must be positive");
  if (dt_sample > t_final) throw ConfigError("dt_sample must not exceed t_final");
}

std::vector<double> QuenchProtocol::sample_times() const {
  const auto n = static_cast<long>(std::floor(t_final / dt_sample + 1e-9));
  std::vector<double> t(n + 1);
  for (long i = 0; i <= n; ++i) t[i] = i * dt_sample;
  return t;
}

GroundState ground_state(const Model& model, double omega_sq) {
  const Matrix h = model.block(omega_sq, Parity::Even);
  EigenDecomposition eig = symmetric_eigen_lowest(h, std::min<Eigen::Index>(2, h.rows()));
  fix_column_signs(eig.vectors);
  GroundState gs;
  gs.vector = eig.vectors.col(0);
  gs.energy = eig.values[0];
  gs.gap = eig.values.size() > 1 ? eig.values[1] - eig.values[0] : std::numeric_limits<double>::infinity();
  if (gs.gap < 1e-10) {
    std::ostringstream msg;
    msg << "degenerate ground state at omega_sq=" << omega_sq << " (gap " << gs.gap << " E_R)";
    throw ConvergenceError(msg.str());
  }
  gs.dominant = dominant_label(gs.vector, model.block_labels(Parity::Even));
  return gs;
}

EigenBasis even_eigenbasis(const Model& model, double omega_sq, int count) {
  const Matrix h = model.block(omega_sq, Parity::Even);
  EigenBasis out;
  out.omega_sq = omega_sq;
  EigenDecomposition eig = (count <= 0 || count >= h.rows()) ? symmetric_eigen(h) : symmetric_eigen_lowest(h, count);
  fix_column_signs(eig.vectors);
  out.energies = std::move(eig.values);
  out.vectors = std::move(eig.vectors);
  out.complete = out.vectors.cols() == h.rows();
  return out;
}

QuenchResult evolve(const EigenBasis& basis, const QuenchProtocol& protocol, const Vector& psi0,
                    double defect_threshold) {
  protocol.validate();
  if (psi0.size() != basis.vectors.rows()) throw std::invalid_argument("evolve: state does not match the block");
  QuenchResult r;
  r.protocol = protocol;
  r.energies = basis.energies;
  r.vectors = basis.vectors;
  r.psi0 = psi0;
  r.coefficients = basis.vectors.transpose() * psi0;
  r.defect = std::max(0.0, psi0.squaredNorm() - r.coefficients.squaredNorm());
  r.k = static_cast<int>(basis.vectors.cols());
  r.full = basis.complete;
  r.times = protocol.sample_times();
  if (r.defect > defect_threshold) {
    std::ostringstream msg;
    msg << "completeness defect " << r.defect << " with K=" << r.k
        << " post-quench states exceeds " << defect_threshold << "; increase K or diagonalise the full block";
    throw ConvergenceError(msg.str());
  }
  return r;
}

QuenchResult evolve(const Model& model, const QuenchProtocol& protocol, const Vector& psi0,
                    const SpectralOptions& options) {
  protocol.validate();
  const auto dim = static_cast<int>(model.block_dimension(Parity::Even));
  if (dim <= options.full_limit) return evolve(even_eigenbasis(model, protocol.omega_f_sq), protocol, psi0, options.defect_threshold);
  const Matrix h = model.block(protocol.omega_f_sq, Parity::Even);
  int k = std::min(options.initial_k, dim);
  while (true) {
    EigenBasis basis;
    basis.omega_sq = protocol.omega_f_sq;
    EigenDecomposition eig = k >= dim ? symmetric_eigen(h) : symmetric_eigen_lowest(h, k);
    fix_column_signs(eig.vectors);
    basis.energies = std::move(eig.values);
    basis.vectors = std::move(eig.vectors);
    basis.complete = k >= dim;
    const Vector c = basis.vectors.transpose() * psi0;
    const double defect = psi0.squaredNorm() - c.squaredNorm();
    if (defect <= options.defect_threshold || basis.complete) {
      return evolve(basis, protocol, psi0, basis.complete ? 1.0 : options.defect_threshold);
    }
    const int next = next_k(k, dim);
    if (options.max_k > 0 && next > options.max_k) {
      std::ostringstream msg;
      msg << "completeness defect " << defect << " with K=" << k << " and max_k=" << options.max_k
          << "; raise max_k or diagonalise the full block";
      throw ConvergenceError(msg.str());
    }
    k = next;
  }
}

int next_k(int k, int dim) {
  const int next = 2 * k;
  return next > dim / 2 ? dim : next;
}

ComplexVector QuenchResult::eigen_amplitudes(double t) const {
  ComplexVector z(k);
  for (int i = 0; i < k; ++i) z[i] = coefficients[i] * std::polar(1.0, -energies[i] * t);
  return z;
}

ComplexVector QuenchResult::state_at(double t) const { return vectors.cast<std::complex<double>>() * eigen_amplitudes(t); }

Matrix QuenchResult::in_eigenbasis(const SparseMatrix& block_operator) const {
  const Matrix ov = block_operator * vectors;
  Matrix m = vectors.transpose() * ov;
  return 0.5 * (m + m.transpose());
}

std::vector<double> QuenchResult::expectation_series(const Matrix& op_eigen) const {
  // eigenstates the initial state does not populate cannot contribute
  std::vector<int> active;
  for (int i = 0; i < k; ++i)
    if (std::abs(coefficients[i]) > kNegligibleCoefficient) active.push_back(i);
  const auto n_a = static_cast<Eigen::Index>(active.size());
  const auto n_t = static_cast<Eigen::Index>(times.size());
  Matrix re(n_a, n_t), im(n_a, n_t);
  for (Eigen::Index j = 0; j < n_t; ++j) {
    for (Eigen::Index a = 0; a < n_a; ++a) {
      const int i = active[a];
      const double ph = energies[i] * times[j];
      re(a, j) = coefficients[i] * std::cos(ph);
      im(a, j) = -coefficients[i] * std::sin(ph);
    }
  }
  const Matrix op = op_eigen(active, active);
  const Matrix ore = op * re;
  const Matrix oim = op * im;
  std::vector<double> out(n_t);
  for (Eigen::Index j = 0; j < n_t; ++j) out[j] = re.col(j).dot(ore.col(j)) + im.col(j).dot(oim.col(j));
  return out;
}

std::vector<double> population_timeseries(const QuenchResult& result, const ParityBasis::Locator& target) {
  std::vector<double> out(result.times.size(), 0.0);
  if (!target.even) return out;
  const Vector row = result.vectors.row(target.column).transpose().cwiseProduct(result.coefficients);
  for (std::size_t j = 0; j < result.times.size(); ++j) {
    std::complex<double> amp = 0.0;
    for (int i = 0; i < result.k; ++i) amp += row[i] * std::polar(1.0, -result.energies[i] * result.times[j]);
    out[j] = std::norm(target.amplitude * amp);
  }
  return out;
}

std::optional<double> state_prep_search(const std::vector<double>& times, const std::vector<double>& populations,
                                        double threshold) {
  for (std::size_t j = 0; j < times.size() && j < populations.size(); ++j) {
    if (populations[j] >= threshold) return times[j];
  }
  return std::nullopt;
}

}  // namespace lq
