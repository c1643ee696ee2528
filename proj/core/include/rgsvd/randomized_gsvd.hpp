#pragma once

// Two-sided uniformly randomized GSVD of a pair {A, L}.
//
// Both the row and the column space of A are sketched by the adaptive range
// finder, giving bases P (m x l_P) and Q (n x l_Q). The small pair
// {P^T A Q, L Q} is then factored exactly:
//
//   P P^T A Q Q^T ~ U2 D1 Z(rows paired with alpha, :)
//   L Q Q^T       = V1 D2 Z(0 : n_inner - r, :)
//
// with U2 = P * inner.u and Z = X~^{-1} Q^T.

#include <filesystem>

#include "rgsvd/gsvd.hpp"
#include "rgsvd/sampling.hpp"

namespace rgsvd {

enum class RgsvdBranch { over, under };

const char* to_string(RgsvdBranch branch);
RgsvdBranch parse_rgsvd_branch(const std::string& text);

struct ApproxGsvd {
  Matrix p;             // sketched column-space basis of A (m x l1 over, m x l2 under)
  Matrix q;             // sketched row-space basis of A (n x l2 over, n x l1 under)
  GsvdFactors inner;    // GSVD of {P^T A Q, L Q}
  Matrix u2;            // P * inner.u
  Matrix v1;            // inner.v1
  Matrix z;             // inner.x_inv * Q^T
  Matrix pt_a_q;        // P^T A Q
  Matrix l_q;           // L Q
  Index l1 = 0;
  Index l2 = 0;
  double epsilon = 0.0;
  RgsvdBranch branch = RgsvdBranch::over;
  std::uint64_t seed = 0;

  /// Either sketch came back empty; every solve then returns x = 0.
  bool degenerate() const { return p.cols() == 0 || q.cols() == 0; }

  /// Rows of Z paired with inner.alpha.
  auto z_alpha() const { return z.bottomRows(inner.k()); }
  /// Rows of Z paired with inner.beta.
  auto z_beta() const { return z.topRows(inner.n() - inner.r); }
};

/// Seed of the second sketching stage, derived from the first.
std::uint64_t stage2_seed(std::uint64_t seed);

/// m >= n: P from A, Q from A^T P, tall inner GSVD.
/// cfg.epsilon is the stage tolerance (cfg.stage2_epsilon overrides stage 2).
ApproxGsvd rgsvd_overdetermined(const Matrix& a, const Matrix& l, const SamplerConfig& cfg);

/// m < n: Q from A^T, P from A Q, inner GSVD on the wide branch when
/// l2 < l1.
ApproxGsvd rgsvd_underdetermined(const Matrix& a, const Matrix& l, const SamplerConfig& cfg);

/// Dispatches on the shape of A.
ApproxGsvd rgsvd(const Matrix& a, const Matrix& l, const SamplerConfig& cfg);

struct ApproxResiduals {
  double alpha_identity = 0.0;  // ||P P^T A Q Q^T - U2 D1 Z_alpha||_F
  double beta_identity = 0.0;   // ||L Q Q^T - V1 D2 Z_beta||_F
  double compression = 0.0;     // ||A - P P^T A Q Q^T||_F
};

ApproxResiduals approx_residuals(const ApproxGsvd& approx, const Matrix& a, const Matrix& l);

/// Inner GSVD directory layout plus p.mtx, q.mtx, u2.mtx, v1.mtx, z.mtx,
/// pt_a_q.mtx, l_q.mtx and `config.csv`.
void save_approx_gsvd(const std::filesystem::path& dir, const ApproxGsvd& approx);
ApproxGsvd load_approx_gsvd(const std::filesystem::path& dir);

}  // namespace rgsvd
