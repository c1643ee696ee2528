#include "rgsvd/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "rgsvd/errors.hpp"

namespace rgsvd {

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw FiniteError(std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw FiniteError(std::string(what) + ": non-finite entry");
  }
}

QrFactors qr_reduced(const Matrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows < cols) {
    throw DimensionError("qr_reduced: rows (" + std::to_string(rows) +
                         ") < cols (" + std::to_string(cols) + ")");
  }
  require_finite(m, "qr_reduced");

  QrFactors out;
  if (cols == 0) {
    out.q = Matrix(rows, 0);
    out.r = Matrix(0, 0);
    return out;
  }

  Matrix work = m;
  Vector tau(cols);
  const lapack_int ld = static_cast<lapack_int>(rows);
  if (LAPACKE_dgeqrf(LAPACK_COL_MAJOR, ld, static_cast<lapack_int>(cols), work.data(), ld,
                     tau.data()) != 0) {
    throw Error("qr_reduced: dgeqrf failed");
  }
  out.r = work.topRows(cols).triangularView<Eigen::Upper>();
  if (LAPACKE_dorgqr(LAPACK_COL_MAJOR, ld, static_cast<lapack_int>(cols),
                     static_cast<lapack_int>(cols), work.data(), ld, tau.data()) != 0) {
    throw Error("qr_reduced: dorgqr failed");
  }
  out.q = std::move(work);

  // Flip signs so that diag(r) >= 0; q * r is unchanged.
  for (Index k = 0; k < cols; ++k) {
    if (out.r(k, k) < 0.0) {
      out.r.row(k) *= -1.0;
      out.q.col(k) *= -1.0;
    }
  }
  return out;
}

SymEig symmetric_eig(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw DimensionError("symmetric_eig: matrix is " + std::to_string(s.rows()) +
                         "x" + std::to_string(s.cols()) + ", not square");
  }
  require_finite(s, "symmetric_eig");

  SymEig out;
  if (s.rows() == 0) {
    out.vectors = Matrix(0, 0);
    out.values = Vector(0);
    return out;
  }

  // Only the lower triangle is read by the solver, so an asymmetric input
  // is replaced by its symmetric part.
  const double norm = s.norm();
  const double asym = (s - s.transpose()).norm();
  out.vectors = asym > 1e-12 * norm ? Matrix(0.5 * (s + s.transpose())) : s;
  out.values.resize(s.rows());
  const lapack_int n = static_cast<lapack_int>(s.rows());
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                     out.values.data()) != 0) {
    throw Error("symmetric_eig: eigensolver did not converge");
  }
  return out;
}

SvdFactors thin_svd(const Matrix& m) {
  require_finite(m, "thin_svd");
  SvdFactors out;
  const Index k = std::min(m.rows(), m.cols());
  if (k == 0) {
    out.u = Matrix(m.rows(), 0);
    out.sigma = Vector(0);
    out.v = Matrix(m.cols(), 0);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = svd.matrixU();
  out.sigma = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  if (std::min(m.rows(), m.cols()) == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

double pinv_cutoff(Index rows, Index cols) {
  return 1e-12 * static_cast<double>(std::max(rows, cols));
}

Vector min_norm_lstsq(const Matrix& m, const Vector& rhs) {
  if (rhs.size() != m.rows()) {
    throw DimensionError("min_norm_lstsq: rhs length " + std::to_string(rhs.size()) +
                         " != rows " + std::to_string(m.rows()));
  }
  require_finite(rhs, "min_norm_lstsq rhs");
  const SvdFactors f = thin_svd(m);
  Vector x = Vector::Zero(m.cols());
  if (f.sigma.size() == 0 || f.sigma(0) == 0.0) return x;

  const double tau = pinv_cutoff(m.rows(), m.cols()) * f.sigma(0);
  Vector coeff = f.u.transpose() * rhs;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    coeff(i) = f.sigma(i) > tau ? coeff(i) / f.sigma(i) : 0.0;
  }
  x.noalias() = f.v * coeff;
  return x;
}

double norm2(const Matrix& m) {
  const Vector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

double pinv_norm2(const Matrix& m) {
  const Vector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  const double tau = pinv_cutoff(m.rows(), m.cols()) * s(0);
  for (Index i = s.size() - 1; i >= 0; --i) {
    if (s(i) > tau) return 1.0 / s(i);
  }
  return 0.0;
}

double orthonormality_defect(const Matrix& q) {
  if (q.cols() == 0) return 0.0;
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

Matrix solve_upper(const Matrix& r, const Matrix& rhs) {
  if (r.rows() != r.cols() || rhs.rows() != r.rows()) {
    throw DimensionError("solve_upper: shape mismatch");
  }
  for (Index k = 0; k < r.rows(); ++k) {
    if (r(k, k) == 0.0) throw RankError("solve_upper: zero pivot");
  }
  Matrix x = rhs;
  r.triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) {
    throw DimensionError("vstack: column counts differ (" + std::to_string(top.cols()) +
                         " vs " + std::to_string(bottom.cols()) + ")");
  }
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace rgsvd
