#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns, orthonormal
};

/// Full spectrum of a dense symmetric matrix (LAPACK dsyevd).
EigenDecomposition symmetric_eigen(const Matrix& a);

/// Lowest `count` eigenpairs (LAPACK dsyevr). `count` is clamped to the
/// matrix dimension.
EigenDecomposition symmetric_eigen_lowest(const Matrix& a, int count);

/// Eigenvalues only.
Vector symmetric_eigenvalues(const Matrix& a);

/// Flip the sign of every column so that its largest-magnitude entry is
/// positive. Ties go to the lowest row index.
void fix_column_signs(Matrix& vectors);

/// Maximum-weight perfect assignment on a square matrix (Hungarian method).
/// Returns `col_of_row`.
std::vector<int> max_weight_assignment(const Matrix& weights);

}  // namespace lq
