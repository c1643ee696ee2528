#pragma once

// Dense containers and the factorization kernels everything else is built on.

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace rgsvd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Reduced QR factors: q is rows x cols with orthonormal columns, r is
/// cols x cols upper triangular with a nonnegative diagonal.
struct QrFactors {
  Matrix q;
  Matrix r;
};

/// Eigendecomposition of a symmetric matrix, values in ascending order.
struct SymEig {
  Matrix vectors;
  Vector values;
};

/// Thin singular value decomposition, sigma descending.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
};

/// Throws FiniteError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);

QrFactors qr_reduced(const Matrix& m);

/// Inputs with a relative asymmetry above 1e-12 are symmetrized before
/// factoring.
SymEig symmetric_eig(const Matrix& s);

SvdFactors thin_svd(const Matrix& m);

/// Singular values only (descending).
Vector singular_values(const Matrix& m);

/// Minimum 2-norm least-squares solution. Singular values below
/// 1e-12 * max(rows, cols) * sigma_1 are treated as zero.
Vector min_norm_lstsq(const Matrix& m, const Vector& rhs);

/// Relative cutoff used by min_norm_lstsq.
double pinv_cutoff(Index rows, Index cols);

/// Spectral norm via the largest singular value.
double norm2(const Matrix& m);

/// ||M^+||_2, i.e. the reciprocal of the smallest singular value above the
/// pseudo-inverse cutoff (0 for a zero matrix).
double pinv_norm2(const Matrix& m);

/// ||q^T q - I||_F.
double orthonormality_defect(const Matrix& q);

/// Solves r * x = rhs for upper-triangular r by back substitution, column by
/// column. Throws RankError on a zero pivot.
Matrix solve_upper(const Matrix& r, const Matrix& rhs);

/// [top; bottom] for matrices with equal column counts.
Matrix vstack(const Matrix& top, const Matrix& bottom);

}  // namespace rgsvd
