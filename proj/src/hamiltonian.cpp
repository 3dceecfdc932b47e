#include "latquench/hamiltonian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "latquench/errors.hpp"

namespace lq {

double TwoBodyIntegrals::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

OneBodyIntegrals one_body_integrals(const OrbitalSet& orbitals, const Grid& grid, const PotentialSpec& spec,
                                    const std::optional<Interval>& region) {
  const Matrix& phi = orbitals.vectors;
  const Eigen::Map<const Vector> x(grid.points.data(), grid.n_points);
  const Vector w = region_weights(grid, region);

  OneBodyIntegrals out;
  const Matrix hgrid = one_body_grid_hamiltonian(grid, spec);
  out.h = grid.weight * phi.transpose() * hgrid * phi;
  out.h = 0.5 * (out.h + out.h.transpose()).eval();
  auto weighted = [&](const Vector& f) {
    Matrix m = phi.transpose() * (w.cwiseProduct(f)).asDiagonal() * phi;
    return Matrix(0.5 * (m + m.transpose()));
  };
  out.number = weighted(Vector::Ones(grid.n_points));
  out.x1 = weighted(x);
  out.x2 = weighted(x.cwiseProduct(x));
  return out;
}

TwoBodyIntegrals two_body_integrals(const OrbitalSet& orbitals, double g) {
  const int m = orbitals.size();
  TwoBodyIntegrals w(m);
  if (g == 0.0) return w;
  const Matrix& phi = orbitals.vectors;
  const double scale = g * orbitals.weight;
  Vector pq(phi.rows());
  for (int p = 0; p < m; ++p) {
    for (int q = p; q < m; ++q) {
      pq = phi.col(p).cwiseProduct(phi.col(q));
      for (int r = 0; r < m; ++r) {
        for (int s = r; s < m; ++s) {
          if (r * m + s < p * m + q) continue;
          const double v = scale * pq.dot(phi.col(r).cwiseProduct(phi.col(s)));
          // every index permutation of a contact integral is the same number
          const int idx[4] = {p, q, r, s};
          int perm[4] = {0, 1, 2, 3};
          do {
            w(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]) = v;
          } while (std::next_permutation(perm, perm + 4));
        }
      }
    }
  }
  return w;
}

Integrals compute_integrals(const OrbitalSet& orbitals, const Grid& grid, const PotentialSpec& spec,
                            const std::optional<Interval>& region) {
  return Integrals{one_body_integrals(orbitals, grid, spec, region), two_body_integrals(orbitals, spec.g)};
}

namespace {

struct RowBuffer {
  std::vector<double> accum;
  std::vector<char> touched;
  std::vector<std::size_t> cols;

  explicit RowBuffer(std::size_t d) : accum(d, 0.0), touched(d, 0) {}

  void add(std::size_t c, double v) {
    if (!touched[c]) {
      touched[c] = 1;
      cols.push_back(c);
    }
    accum[c] += v;
  }
};

struct RowEntries {
  std::vector<int> cols;
  std::vector<double> vals;
};

}  // namespace

ManyBodyOperator assemble_operator(const FockBasis& basis, const Matrix& one_body, const TwoBodyIntegrals* two_body,
                                   int threads, std::size_t max_nonzeros) {
  const int m = basis.n_orbitals();
  if (one_body.rows() != m || one_body.cols() != m) {
    throw std::invalid_argument("assemble_operator: one-body matrix does not match the orbital count");
  }
  if (two_body && two_body->size() != m) {
    throw std::invalid_argument("assemble_operator: two-body tensor does not match the orbital count");
  }
  const std::size_t d = basis.size();
  constexpr double kSkip = 1e-14;
  const double w_cut = two_body ? kSkip * std::max(1.0, two_body->max_abs()) : 0.0;
  const double h_cut = kSkip * std::max(1.0, one_body.cwiseAbs().maxCoeff());

  std::vector<RowEntries> rows(d);
  std::atomic<std::size_t> nnz{0};
  std::atomic<bool> over_cap{false};

  auto work = [&](std::size_t begin, std::size_t end) {
    RowBuffer buf(d);
    std::vector<std::uint8_t> occ(m), tmp(m);
    for (std::size_t row = begin; row < end && !over_cap; ++row) {
      const auto src = basis.occupations(row);
      std::copy(src.begin(), src.end(), occ.begin());
      // By symmetry of H, the row <row|H|col> equals the column H|row>.
      for (int q = 0; q < m; ++q) {
        if (occ[q] == 0) continue;
        for (int p = 0; p < m; ++p) {
          const double hpq = one_body(p, q);
          if (std::abs(hpq) <= h_cut) continue;
          tmp = occ;
          double amp = std::sqrt(static_cast<double>(tmp[q]));
          --tmp[q];
          amp *= std::sqrt(static_cast<double>(tmp[p] + 1));
          ++tmp[p];
          buf.add(basis.rank(tmp), hpq * amp);
        }
      }
      if (two_body) {
        for (int r = 0; r < m; ++r) {
          if (occ[r] == 0) continue;
          for (int s = r; s < m; ++s) {
            if (occ[s] == 0 || (s == r && occ[r] < 2)) continue;
            const double a_rs = std::sqrt(static_cast<double>(occ[s])) *
                                std::sqrt(static_cast<double>(s == r ? occ[r] - 1 : occ[r]));
            const double mult_rs = (r == s) ? 1.0 : 2.0;
            std::vector<std::uint8_t> lowered = occ;
            --lowered[s];
            --lowered[r];
            for (int p = 0; p < m; ++p) {
              for (int q = p; q < m; ++q) {
                const double w = (*two_body)(p, q, r, s);
                if (std::abs(w) <= w_cut) continue;
                tmp = lowered;
                double amp = std::sqrt(static_cast<double>(tmp[q] + 1));
                ++tmp[q];
                amp *= std::sqrt(static_cast<double>(tmp[p] + 1));
                ++tmp[p];
                const double mult_pq = (p == q) ? 1.0 : 2.0;
                buf.add(basis.rank(tmp), 0.5 * mult_rs * mult_pq * w * a_rs * amp);
              }
            }
          }
        }
      }
      std::sort(buf.cols.begin(), buf.cols.end());
      RowEntries& out = rows[row];
      for (std::size_t c : buf.cols) {
        if (buf.accum[c] != 0.0) {
          out.cols.push_back(static_cast<int>(c));
          out.vals.push_back(buf.accum[c]);
        }
        buf.accum[c] = 0.0;
        buf.touched[c] = 0;
      }
      buf.cols.clear();
      if (nnz.fetch_add(out.cols.size()) + out.cols.size() > max_nonzeros) over_cap = true;
    }
  };

  const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(d)));
  if (n_workers == 1) {
    work(0, d);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_workers; ++t) {
      pool.emplace_back(work, d * t / n_workers, d * (t + 1) / n_workers);
    }
  }
  if (over_cap) {
    throw ResourceCapError("many-body operator exceeds " + std::to_string(max_nonzeros) + " stored entries");
  }

  SparseMatrix mat(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  Eigen::VectorXi per_row(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) per_row[i] = static_cast<int>(rows[i].cols.size());
  mat.reserve(per_row);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < rows[i].cols.size(); ++k) mat.insert(i, rows[i].cols[k]) = rows[i].vals[k];
  }
  mat.makeCompressed();
  return ManyBodyOperator{std::move(mat)};
}

SparseMatrix reflection_operator(const FockBasis& basis, const ParityInfo& parity) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) t.emplace_back(parity.partner[i], i, parity.sign[i]);
  SparseMatrix r(basis.size(), basis.size());
  r.setFromTriplets(t.begin(), t.end());
  return r;
}

ParityBasis build_parity_basis(const FockBasis& basis, const ParityInfo& parity) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Triplet<double>> te, to;
  ParityBasis out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::size_t j = parity.partner[i];
    const double s = parity.sign[i];
    if (j == i) {
      if (s > 0) {
        te.emplace_back(i, out.even_rep.size(), 1.0);
        out.even_rep.push_back(i);
        out.even_labels.push_back({basis.state(i), Combination::None});
      } else {
        to.emplace_back(i, out.odd_rep.size(), 1.0);
        out.odd_rep.push_back(i);
        out.odd_labels.push_back({basis.state(i), Combination::None});
      }
      continue;
    }
    // ascending order: the partner with the larger index is the larger vector
    if (j > i) continue;
    te.emplace_back(i, out.even_rep.size(), inv_sqrt2);
    te.emplace_back(j, out.even_rep.size(), s * inv_sqrt2);
    out.even_rep.push_back(i);
    out.even_labels.push_back({basis.state(i), Combination::Symmetric});
    to.emplace_back(i, out.odd_rep.size(), inv_sqrt2);
    to.emplace_back(j, out.odd_rep.size(), -s * inv_sqrt2);
    out.odd_rep.push_back(i);
    out.odd_labels.push_back({basis.state(i), Combination::Antisymmetric});
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  out.even.resize(d, static_cast<Eigen::Index>(out.even_rep.size()));
  out.even.setFromTriplets(te.begin(), te.end());
  out.odd.resize(d, static_cast<Eigen::Index>(out.odd_rep.size()));
  out.odd.setFromTriplets(to.begin(), to.end());
  return out;
}

std::optional<ParityBasis::Locator> ParityBasis::locate(const StateLabel& label, const FockBasis& basis,
                                                        const ParityInfo& parity) const {
  const auto i = basis.find(label.state);
  if (!i) return std::nullopt;
  const std::size_t j = parity.partner[*i];
  const std::size_t rep = std::max(*i, j);
  const bool self = (j == *i);
  Locator loc;
  if (self) {
    if (label.combo != Combination::None) return std::nullopt;
    loc.even = parity.sign[*i] > 0;
    loc.amplitude = 1.0;
  } else {
    if (label.combo == Combination::Antisymmetric) loc.even = false;
    loc.amplitude = (label.combo == Combination::None) ? 1.0 / std::sqrt(2.0) : 1.0;
    // seen from the smaller member, the columns pick up the partner sign
    // (even) or minus it (odd)
    if (*i != rep && parity.sign[*i] < 0) loc.amplitude = -loc.amplitude;
    if (label.combo == Combination::Antisymmetric && *i != rep) loc.amplitude = -loc.amplitude;
  }
  const auto& reps = loc.even ? even_rep : odd_rep;
  const auto it = std::lower_bound(reps.begin(), reps.end(), rep);
  if (it == reps.end() || *it != rep) return std::nullopt;
  loc.column = static_cast<Eigen::Index>(it - reps.begin());
  return loc;
}

double commutator_norm(const SparseMatrix& op, const SparseMatrix& reflection) {
  const SparseMatrix c = SparseMatrix(op * reflection) - SparseMatrix(reflection * op);
  double m = 0.0;
  for (int k = 0; k < c.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(c, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

ParityBlocks parity_blocks(const ManyBodyOperator& op, const ParityBasis& pb, const SparseMatrix& reflection,
                           double tolerance) {
  const double comm = commutator_norm(op.matrix, reflection);
  if (comm > tolerance) {
    throw SymmetryError("operator breaks reflection symmetry: |HR - RH|_max = " + std::to_string(comm));
  }
  ParityBlocks out;
  out.even = SparseMatrix(pb.even.transpose() * (op.matrix * pb.even)).pruned();
  out.odd = SparseMatrix(pb.odd.transpose() * (op.matrix * pb.odd)).pruned();
  return out;
}

}  // namespace lq
