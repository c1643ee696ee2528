#include "rgsvd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rgsvd/errors.hpp"
#include "rgsvd/io.hpp"

namespace rgsvd {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::next_u64() {
  return mix64(key_ + 0x9E3779B97F4A7C15ULL * counter_++);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_uniform_unit_variance() {
  constexpr double half_width = std::numbers::sqrt3;
  return -half_width + 2.0 * half_width * next_unit();
}

double CounterRng::next_normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  // 1 - u lies in (0, 1], so the logarithm is finite.
  const double u1 = 1.0 - next_unit();
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Matrix uniform_test_matrix(Index n, Index l, std::uint64_t seed) {
  if (n < 0 || l < 0) throw ArgumentError("uniform_test_matrix: negative size");
  CounterRng rng(seed);
  Matrix omega(n, l);
  for (Index j = 0; j < l; ++j) {
    for (Index i = 0; i < n; ++i) omega(i, j) = rng.next_uniform_unit_variance();
  }
  return omega;
}

RangeBasis adaptive_range_finder(const Matrix& a, const SamplerConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw ArgumentError("adaptive_range_finder: epsilon must be positive");
  }
  const Index m = a.rows();
  const Index n = a.cols();
  const Index b = cfg.blocksize;
  if (b < 1 || (n > 1 && b >= n) || (n == 1 && b != 1)) {
    throw ArgumentError("adaptive_range_finder: blocksize " + std::to_string(b) +
                        " outside [1, " + std::to_string(std::max<Index>(n - 1, 1)) + "]");
  }
  require_finite(a, "adaptive_range_finder");

  RangeBasis out;
  out.epsilon = cfg.epsilon;
  out.seed = cfg.seed;
  const Index max_rank = std::min(m, n);
  Matrix basis(m, max_rank);
  Index ell = 0;

  const Index full_blocks = n / b;
  const Index total_blocks = full_blocks + (n % b == 0 ? 0 : 1);
  const auto block_width = [&](Index i) { return i <= full_blocks ? b : n - full_blocks * b; };

  // Products with A are formed for a growing batch of upcoming blocks at
  // once and orthogonalized against the basis as it stood at the start of
  // the batch; each block is then finished against the columns the batch
  // itself added. Blocks past the stopping point are discarded.
  Index batch_blocks = 1;
  const Index max_batch_blocks = std::max<Index>(1, 64 / b);
  Index next = 1;
  bool stopped = false;
  while (!stopped && next <= total_blocks && ell < max_rank) {
    const Index count = std::min(batch_blocks, total_blocks - next + 1);
    Index width = 0;
    for (Index i = next; i < next + count; ++i) width += block_width(i);
    Matrix omega(n, width);
    for (Index i = next, off = 0; i < next + count; off += block_width(i), ++i) {
      omega.middleCols(off, block_width(i)) =
          uniform_test_matrix(n, block_width(i), cfg.seed ^ static_cast<std::uint64_t>(i));
    }
    Matrix y_batch = a * omega;
    const Index ell_start = ell;
    if (ell_start > 0) {
      const auto q = basis.leftCols(ell_start);
      for (int pass = 0; pass < 2; ++pass) y_batch.noalias() -= q * (q.transpose() * y_batch);
    }

    for (Index i = next, off = 0; i < next + count; off += block_width(i), ++i) {
      if (ell >= max_rank) {
        stopped = true;
        break;
      }
      // Columns past m - ell + 1 are necessarily dependent on the basis; the
      // diagonal test stops at or before that column anyway.
      const Index f_eff = std::min(block_width(i), m - ell + (ell > 0 ? 1 : 0));
      Matrix y = y_batch.middleCols(off, f_eff);
      if (ell > ell_start) {
        const auto q = basis.middleCols(ell_start, ell - ell_start);
        for (int pass = 0; pass < 2; ++pass) y.noalias() -= q * (q.transpose() * y);
      }
      const QrFactors qr = qr_reduced(y);
      ++out.blocks_consumed;

      Index keep = f_eff;
      for (Index l = 0; l < f_eff; ++l) {
        if (std::abs(qr.r(l, l)) <= cfg.epsilon) {
          keep = l;
          out.triggered_diag = std::abs(qr.r(l, l));
          break;
        }
      }
      keep = std::min(keep, max_rank - ell);
      if (cfg.max_columns && ell + keep > *cfg.max_columns) {
        throw ArgumentError("adaptive_range_finder: basis would grow to " +
                            std::to_string(ell + keep) + " columns, above max_columns=" +
                            std::to_string(*cfg.max_columns) + " (epsilon too small?)");
      }
      basis.middleCols(ell, keep) = qr.q.leftCols(keep);
      ell += keep;
      if (out.triggered_diag) {
        stopped = true;
        break;
      }
    }
    next += count;
    batch_blocks = std::min(2 * batch_blocks, max_batch_blocks);
  }

  out.q = basis.leftCols(ell);
  return out;
}

ExpectationCheck verify_expectation_identity(const Matrix& f, const Matrix& c,
                                             const Matrix& g, Index trials,
                                             std::uint64_t seed) {
  if (f.cols() != c.cols()) {
    throw DimensionError("verify_expectation_identity: F has " + std::to_string(f.cols()) +
                         " columns but C has " + std::to_string(c.cols()));
  }
  if (trials < 1) throw ArgumentError("verify_expectation_identity: trials < 1");
  const Index n = c.rows();
  const Index l = g.rows();

  CounterRng rng(seed);
  Matrix omega(n, l);
  double sum = 0.0;
  for (Index t = 0; t < trials; ++t) {
    for (Index j = 0; j < l; ++j) {
      for (Index i = 0; i < n; ++i) omega(i, j) = rng.next_uniform_unit_variance();
    }
    const Matrix h = c.transpose() * omega;
    sum += (f * h * g).squaredNorm();
  }
  return {sum / static_cast<double>(trials), f.squaredNorm() * g.squaredNorm()};
}

void save_range_basis(const std::filesystem::path& dir, const RangeBasis& basis) {
  std::filesystem::create_directories(dir);
  io::write_matrix_market(dir / "q.mtx", basis.q);
  io::write_key_values(
      dir / "basis.csv",
      {{"epsilon", io::format_double(basis.epsilon)},
       {"seed", std::to_string(basis.seed)},
       {"columns", std::to_string(basis.q.cols())},
       {"blocks_consumed", std::to_string(basis.blocks_consumed)},
       {"triggered_diag",
        basis.triggered_diag ? io::format_double(*basis.triggered_diag) : std::string()}});
}

RangeBasis load_range_basis(const std::filesystem::path& dir) {
  const auto kv = io::read_key_values(dir / "basis.csv");
  RangeBasis basis;
  basis.q = io::read_matrix_market(dir / "q.mtx");
  basis.epsilon = io::parse_double(kv.at("epsilon"));
  basis.seed = std::stoull(kv.at("seed"));
  basis.blocks_consumed = std::stoll(kv.at("blocks_consumed"));
  if (auto it = kv.find("triggered_diag"); it != kv.end() && !it->second.empty()) {
    basis.triggered_diag = io::parse_double(it->second);
  }
  if (std::stoll(kv.at("columns")) != basis.q.cols()) {
    throw IoError(dir.string() + ": column count does not match q.mtx");
  }
  return basis;
}

}  // namespace rgsvd
