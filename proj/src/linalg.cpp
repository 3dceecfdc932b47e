#include "latquench/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "latquench/errors.hpp"

namespace lq {

namespace {

void require_square(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigensolver: matrix is not square");
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& a) {
  require_square(a);
  EigenDecomposition out;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  out.vectors = a;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n, out.values.data());
  if (info != 0) {
    throw ConvergenceError("dsyevd failed with info=" + std::to_string(info) +
                           " (dimension " + std::to_string(n) + ")");
  }
  return out;
}

EigenDecomposition symmetric_eigen_lowest(const Matrix& a, int count) {
  require_square(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  const lapack_int k = std::min<lapack_int>(std::max(count, 0), n);
  EigenDecomposition out;
  if (k == 0) return out;
  if (k == n) return symmetric_eigen(a);

  Matrix work = a;
  Vector w(n);
  out.vectors.resize(n, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, work.data(), n, 0.0, 0.0, 1, k, 0.0,
                     &found, w.data(), out.vectors.data(), n, isuppz.data());
  if (info != 0 || found != k) {
    throw ConvergenceError("dsyevr failed with info=" + std::to_string(info) + " (found " +
                           std::to_string(found) + " of " + std::to_string(k) + ")");
  }
  out.values = w.head(k);
  return out;
}

Vector symmetric_eigenvalues(const Matrix& a) {
  require_square(a);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Matrix work = a;
  Vector w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, work.data(), n, w.data());
  if (info != 0) throw ConvergenceError("dsyevd (values only) failed with info=" + std::to_string(info));
  return w;
}

void fix_column_signs(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double v = std::abs(vectors(r, c));
      // strict comparison with a relative guard keeps the lowest index on ties
      if (v > best_abs * (1.0 + 1e-12)) {
        best_abs = v;
        best = r;
      }
    }
    if (vectors.rows() > 0 && vectors(best, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

std::vector<int> max_weight_assignment(const Matrix& weights) {
  if (weights.rows() != weights.cols()) throw std::invalid_argument("assignment: matrix is not square");
  const int n = static_cast<int>(weights.rows());
  if (n == 0) return {};
  // Minimise cost = max - weight; classic O(n^3) potentials formulation,
  // 1-based with a virtual column 0.
  const double top = weights.maxCoeff();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - weights(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

}  // namespace lq
