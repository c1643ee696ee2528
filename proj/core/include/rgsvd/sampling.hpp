#pragma once

// Uniform random test matrices and the blockwise adaptive range finder.

#include <cstdint>
#include <filesystem>
#include <optional>

#include "rgsvd/dense.hpp"

namespace rgsvd {

/// Counter-based 64-bit generator: the k-th output is a fixed mixing
/// function of (key, k), so streams are reproducible and cheap to fork.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double next_unit();

  /// Uniform on [-sqrt(3), sqrt(3)]: zero mean, unit variance.
  double next_uniform_unit_variance();

  /// Standard normal via Box-Muller.
  double next_normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer, used to derive independent seeds.
std::uint64_t mix64(std::uint64_t x);

/// n x l matrix with i.i.d. entries uniform on [-sqrt(3), sqrt(3)], filled
/// column by column from CounterRng(seed).
Matrix uniform_test_matrix(Index n, Index l, std::uint64_t seed);

struct SamplerConfig {
  double epsilon = 1e-2;
  Index blocksize = 4;
  std::uint64_t seed = 0;
  /// Abort (ArgumentError) instead of growing the basis beyond this.
  std::optional<Index> max_columns;
  /// Tolerance for the second sketching stage of the randomized GSVD;
  /// defaults to `epsilon`.
  std::optional<double> stage2_epsilon;
};

struct RangeBasis {
  Matrix q;
  double epsilon = 0.0;
  Index blocks_consumed = 0;
  /// |R_ll| that stopped the adaptive loop; empty when every column was used.
  std::optional<double> triggered_diag;
  std::uint64_t seed = 0;

  Index columns() const { return q.cols(); }
};

/// Blockwise adaptive uniformly randomized range finder.
///
/// Block i draws Omega_i (n x f_i, seed ^ i), forms Y = A * Omega_i, removes
/// the span of the current basis twice (classical Gram-Schmidt with
/// reorthogonalization) and takes a reduced QR Y = P R. If every |R_ll| of
/// the block exceeds epsilon the whole P is appended; otherwise the columns
/// before the first |R_ll| <= epsilon are appended and the loop stops.
/// Block lengths are (b, ..., b, n - s*b) with s = floor(n / b); an empty
/// final block is skipped.
RangeBasis adaptive_range_finder(const Matrix& a, const SamplerConfig& cfg);

struct ExpectationCheck {
  double sample_mean = 0.0;
  double target = 0.0;
};

/// Monte Carlo estimate of E ||F (C^T Omega) G||_F^2 against
/// ||F||_F^2 ||G||_F^2, with Omega uniform on [-sqrt(3), sqrt(3)].
/// F is m x k, C is n x k with orthonormal columns, G is l x q.
ExpectationCheck verify_expectation_identity(const Matrix& f, const Matrix& c,
                                             const Matrix& g, Index trials,
                                             std::uint64_t seed);

/// Writes `<dir>/q.mtx` and `<dir>/basis.csv` (epsilon, seed, columns, ...).
void save_range_basis(const std::filesystem::path& dir, const RangeBasis& basis);
RangeBasis load_range_basis(const std::filesystem::path& dir);

}  // namespace rgsvd
