#pragma once

// GSVD of a Grassman matrix pair {A, L} (stacked matrix of full column rank)
// through a reduced QR of [A; L] and a symmetric eigendecomposition of
// Q1^T Q1.

#include <filesystem>

#include "rgsvd/dense.hpp"

namespace rgsvd {

/// {A (m x n), L (p x n)} with rank([A; L]) = n. The rank is verified on
/// construction when n <= kVerifyLimit and trusted above.
class GmpPair {
 public:
  static constexpr Index kVerifyLimit = 512;

  GmpPair(Matrix a, Matrix l);

  /// Skips the rank verification (dimensions and finiteness are still
  /// checked).
  static GmpPair trusted(Matrix a, Matrix l);

  const Matrix& a() const { return a_; }
  const Matrix& l() const { return l_; }
  Index m() const { return a_.rows(); }
  Index p() const { return l_.rows(); }
  Index n() const { return a_.cols(); }

 private:
  GmpPair(Matrix a, Matrix l, bool verify);
  Matrix a_;
  Matrix l_;
};

enum class GsvdBranch { tall, wide };

const char* to_string(GsvdBranch branch);
GsvdBranch parse_gsvd_branch(const std::string& text);

/// Economy GSVD factors.
///
/// Indices run over i = 0..n-1 with psi_i = alpha_i^2 ascending. The first
/// `zero_alpha_count()` indices have alpha = 0 and are not represented in
/// `alpha` or `u`; the last `r` indices have beta = 0 and are not
/// represented in `beta` or `v1`.
///
///   u^T A X(:, z:n) = diag(alpha),   v1^T L X(:, 0:n-r) = diag(beta)
struct GsvdFactors {
  Matrix u;       // m x k, orthonormal columns
  Matrix v1;      // p x (n - r), orthonormal columns
  Vector alpha;   // k, ascending, in (0, 1]
  Vector beta;    // n - r, descending, in (0, 1]
  Matrix x;       // n x n, nonsingular
  Matrix x_inv;   // X^{-1}, formed as S^T R without inverting X
  Index r = 0;
  GsvdBranch branch = GsvdBranch::tall;

  Index n() const { return x.cols(); }
  Index k() const { return alpha.size(); }
  Index zero_alpha_count() const { return n() - k(); }

  double alpha_at(Index i) const;
  double beta_at(Index i) const;

  /// Columns of X paired with alpha (X_2 in the wide layout, all of X when
  /// tall and A has full rank).
  auto x_alpha() const { return x.rightCols(k()); }
  /// X_1 = X(:, 0:n-r).
  auto x_beta() const { return x.leftCols(n() - r); }
};

/// GSVD of a pair whose A has full rank min(m, n). The tall branch is used
/// when n <= m, the wide branch otherwise. Throws RankError when a psi that
/// D1 needs falls below 1e-14 * n (A not of full rank) or when the stacked
/// matrix is numerically rank deficient.
GsvdFactors gsvd_full_rank(const GmpPair& pair);

/// Same algorithm, but psi values below 1e-12 * n are treated as exact
/// zeros instead of raising: those directions join the alpha = 0 block.
/// Meant for discretized ill-posed operators whose A is numerically
/// singular.
GsvdFactors gsvd_numerical_rank(const GmpPair& pair);

struct ReconstructionError {
  double err_a = 0.0;
  double err_l = 0.0;
};

/// ||U^T A X_alpha - D1||_F and ||V1^T L X_1 - D2||_F.
ReconstructionError reconstruct(const GsvdFactors& factors, const GmpPair& pair);

/// Generalized singular values gamma_i = alpha_i / beta_i over the indices
/// with alpha > 0 and beta > 0, ascending.
Vector generalized_singular_values(const GsvdFactors& factors);

/// Directory of Matrix Market files plus `manifest.csv`, `alpha.csv`,
/// `beta.csv`.
void save_gsvd(const std::filesystem::path& dir, const GsvdFactors& factors);
GsvdFactors load_gsvd(const std::filesystem::path& dir);

}  // namespace rgsvd
