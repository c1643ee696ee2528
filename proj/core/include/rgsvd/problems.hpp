#pragma once

// Test problems: discretized first-kind Fredholm equations, a parallel-beam
// tomography operator, the first-difference regularization matrix and
// relative-noise injection.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgsvd/io.hpp"
#include "rgsvd/tikhonov.hpp"

namespace rgsvd {

struct TestProblemSpec {
  std::string name;
  /// Number of unknowns; for "tomo" the side N of the N x N pixel grid.
  Index n = 2048;
  /// Row count; a value below the square size truncates rows.
  std::optional<Index> m;
  double delta = 1e-3;
  std::uint64_t seed = 0;
};

/// Names accepted by generate().
const std::vector<std::string>& problem_names();

struct Discretization {
  Matrix a;
  Vector x_true;
};

// Square discretizations (n x n). Size requirements: shaw and heat need an
// even n, phillips a multiple of 4; all need n >= 8.
Discretization shaw(Index n);
Discretization baart(Index n);
Discretization deriv2(Index n);
Discretization foxgood(Index n);
Discretization gravity(Index n);
Discretization heat(Index n);
Discretization phillips(Index n);

/// (n-1) x n with 1 on the diagonal and -1 on the superdiagonal.
Matrix first_difference(Index n);

/// b + delta * ||b|| * zeta / ||zeta|| with zeta standard normal drawn from
/// CounterRng(seed).
Vector add_noise(const Vector& b, double delta, std::uint64_t seed);

/// Builds A, x_true, b_clean = A x_true, L = first_difference and the noisy
/// b. "tomo" uses angles 0:12:179 degrees, 4N rays and a synthetic phantom.
TikhonovProblem generate(const TestProblemSpec& spec);

/// Keeps the first m rows of A, b and b_clean. L and x_true are unchanged.
TikhonovProblem make_underdetermined(const TikhonovProblem& prob, Index m, std::uint64_t seed);

struct SparseOperator {
  Index rows = 0;
  Index cols = 0;
  std::vector<io::Triplet> triplets;

  /// Indices in range, values finite, no duplicate (row, col).
  void validate() const;
  Matrix to_dense() const;
};

/// Intersection lengths of the line {p + s d} with the pixels of an
/// n_grid x n_grid grid of unit pixels centred at the origin. Pixel
/// (row, col) has linear index col * n_grid + row, row 0 at the top. A
/// segment lying exactly on a vertical grid line is given to the pixel with
/// the smaller index.
std::vector<std::pair<Index, double>> trace_ray(Index n_grid, double px, double py, double dx,
                                                double dy);

struct TomographyProblem {
  SparseOperator op;
  Vector phantom;
};

/// Parallel-beam geometry: for each angle theta, `rays` parallel lines with
/// direction (-sin theta, cos theta) and offsets equispaced on
/// [-sqrt(2) N / 2, sqrt(2) N / 2] along (cos theta, sin theta). Rows are
/// ordered angle-major.
TomographyProblem parallel_tomo(Index n_grid, const std::vector<double>& angles_deg,
                                Index rays, std::uint64_t phantom_seed = 0);

/// Seeded union of disks and rectangles on the pixel grid, values in [0, 1],
/// same pixel ordering as trace_ray.
Vector synthetic_phantom(Index n_grid, std::uint64_t seed);

/// a.mtx, l.mtx, b.csv, optional x_true.csv and b_clean.csv, meta.csv. A
/// and L are written in coordinate format when `sparse` is set.
void save_problem_bundle(const std::filesystem::path& dir, const TikhonovProblem& prob,
                         bool sparse = false);

/// Reads a bundle written by save_problem_bundle or produced externally
/// (meta.csv and l.mtx are optional; L defaults to first_difference(n)).
TikhonovProblem load_problem_bundle(const std::filesystem::path& dir);

}  // namespace rgsvd
