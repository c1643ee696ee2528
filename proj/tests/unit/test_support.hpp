#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "rgsvd/dense.hpp"

namespace rgsvd::support {

inline Matrix random_matrix(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
  }
  return m;
}

inline Vector random_vector(Index n, unsigned seed) { return random_matrix(n, 1, seed).col(0); }

inline Matrix random_orthonormal(Index rows, Index cols, unsigned seed) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rows, cols, seed));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

/// Matrix with prescribed singular values and random singular vectors.
inline Matrix with_singular_values(Index rows, Index cols, const Vector& sigma, unsigned seed) {
  const Index k = sigma.size();
  return random_orthonormal(rows, k, seed) * sigma.asDiagonal() *
         random_orthonormal(cols, k, seed + 7919).transpose();
}

/// Fresh per-test scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace rgsvd::support
