#include "rgsvd/gsvd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "rgsvd/errors.hpp"
#include "rgsvd/io.hpp"

namespace rgsvd {

GmpPair::GmpPair(Matrix a, Matrix l) : GmpPair(std::move(a), std::move(l), true) {}

GmpPair GmpPair::trusted(Matrix a, Matrix l) {
  return GmpPair(std::move(a), std::move(l), false);
}

GmpPair::GmpPair(Matrix a, Matrix l, bool verify) : a_(std::move(a)), l_(std::move(l)) {
  if (a_.cols() != l_.cols()) {
    throw DimensionError("GmpPair: A has " + std::to_string(a_.cols()) +
                         " columns but L has " + std::to_string(l_.cols()));
  }
  require_finite(a_, "GmpPair A");
  require_finite(l_, "GmpPair L");
  const Index n = a_.cols();
  if (a_.rows() + l_.rows() < n) {
    throw RankError("GmpPair: stacked matrix has fewer rows than columns");
  }
  if (verify && n > 0 && n <= kVerifyLimit) {
    // Same singular values as the stacked matrix, at a fraction of the cost.
    const Vector s = singular_values(qr_reduced(vstack(a_, l_)).r);
    if (!(s(n - 1) > 1e-10 * s(0))) {
      std::ostringstream msg;
      msg << "GmpPair: [A; L] is rank deficient (sigma_min/sigma_max = "
          << (s(0) > 0 ? s(n - 1) / s(0) : 0.0) << ")";
      throw RankError(msg.str());
    }
  }
}

const char* to_string(GsvdBranch branch) {
  return branch == GsvdBranch::tall ? "tall" : "wide";
}

GsvdBranch parse_gsvd_branch(const std::string& text) {
  if (text == "tall") return GsvdBranch::tall;
  if (text == "wide") return GsvdBranch::wide;
  throw IoError("unknown GSVD branch '" + text + "'");
}

double GsvdFactors::alpha_at(Index i) const {
  const Index z = zero_alpha_count();
  return i < z ? 0.0 : alpha(i - z);
}

double GsvdFactors::beta_at(Index i) const {
  return i < n() - r ? beta(i) : 0.0;
}

namespace {

GsvdFactors gsvd_impl(const GmpPair& pair, bool strict) {
  const Index m = pair.m();
  const Index p = pair.p();
  const Index n = pair.n();
  if (n == 0) throw DimensionError("gsvd: pair has no columns");

  const QrFactors qr = qr_reduced(vstack(pair.a(), pair.l()));
  const double rmax = qr.r.diagonal().cwiseAbs().maxCoeff();
  const double rmin = qr.r.diagonal().cwiseAbs().minCoeff();
  if (!(rmin > 1e-14 * static_cast<double>(n) * rmax)) {
    throw RankError("gsvd: [A; L] is numerically rank deficient (GMP violation)");
  }
  const auto q1 = qr.q.topRows(m);
  const auto q2 = qr.q.bottomRows(p);

  Matrix gram(n, n);
  gram.noalias() = q1.transpose() * q1;
  const SymEig eig = symmetric_eig(gram);
  Vector psi = eig.values.cwiseMax(0.0).cwiseMin(1.0);

  const double tol = 1e-12 * static_cast<double>(n);
  Index r = 0;
  while (r < n && psi(n - 1 - r) > 1.0 - tol) ++r;
  Index zeros = 0;
  while (zeros < n && psi(zeros) < tol) ++zeros;

  GsvdFactors f;
  f.branch = n <= m ? GsvdBranch::tall : GsvdBranch::wide;
  const Index expected_zeros = f.branch == GsvdBranch::tall ? 0 : n - m;
  Index z = expected_zeros;
  if (strict) {
    const double rank_tol = 1e-14 * static_cast<double>(n);
    if (expected_zeros < n && psi(expected_zeros) < rank_tol) {
      std::ostringstream msg;
      msg << "gsvd_full_rank: A is not of full rank (psi[" << expected_zeros
          << "] = " << psi(expected_zeros) << " below tolerance " << rank_tol << ")";
      throw RankError(msg.str());
    }
  } else {
    z = std::max(zeros, expected_zeros);
  }
  const Index k = n - z;
  f.r = std::min(r, k);
  psi.head(z).setZero();

  f.alpha = psi.tail(k).cwiseSqrt();
  f.beta = (Vector::Ones(n - f.r) - psi.head(n - f.r)).cwiseSqrt();

  const Matrix& s = eig.vectors;
  f.u.noalias() = q1 * s.rightCols(k);
  for (Index j = 0; j < k; ++j) f.u.col(j) /= f.alpha(j);
  f.v1.noalias() = q2 * s.leftCols(n - f.r);
  for (Index j = 0; j < n - f.r; ++j) f.v1.col(j) /= f.beta(j);

  f.x = solve_upper(qr.r, s);
  f.x_inv.noalias() = s.transpose() * qr.r.triangularView<Eigen::Upper>();
  return f;
}

}  // namespace

GsvdFactors gsvd_full_rank(const GmpPair& pair) { return gsvd_impl(pair, true); }

GsvdFactors gsvd_numerical_rank(const GmpPair& pair) { return gsvd_impl(pair, false); }

ReconstructionError reconstruct(const GsvdFactors& f, const GmpPair& pair) {
  if (f.n() != pair.n() || f.u.rows() != pair.m() || f.v1.rows() != pair.p() ||
      f.u.cols() != f.k() || f.v1.cols() != f.n() - f.r) {
    throw DimensionError("reconstruct: factors do not match the pair");
  }
  ReconstructionError e;
  const Matrix da = f.u.transpose() * (pair.a() * f.x_alpha());
  e.err_a = (da - Matrix(f.alpha.asDiagonal())).norm();
  const Matrix dl = f.v1.transpose() * (pair.l() * f.x_beta());
  e.err_l = (dl - Matrix(f.beta.asDiagonal())).norm();
  return e;
}

Vector generalized_singular_values(const GsvdFactors& f) {
  const Index z = f.zero_alpha_count();
  const Index count = std::max<Index>(0, f.n() - f.r - z);
  Vector gamma(count);
  for (Index j = 0; j < count; ++j) gamma(j) = f.alpha(j) / f.beta(z + j);
  return gamma;
}

void save_gsvd(const std::filesystem::path& dir, const GsvdFactors& f) {
  std::filesystem::create_directories(dir);
  io::write_matrix_market(dir / "u.mtx", f.u);
  io::write_matrix_market(dir / "v1.mtx", f.v1);
  io::write_matrix_market(dir / "x.mtx", f.x);
  io::write_matrix_market(dir / "x_inv.mtx", f.x_inv);
  io::write_csv(dir / "alpha.csv", f.alpha);
  io::write_csv(dir / "beta.csv", f.beta);
  io::write_key_values(dir / "manifest.csv",
                       {{"n", std::to_string(f.n())},
                        {"k", std::to_string(f.k())},
                        {"r", std::to_string(f.r)},
                        {"branch", to_string(f.branch)}});
}

GsvdFactors load_gsvd(const std::filesystem::path& dir) {
  const auto kv = io::read_key_values(dir / "manifest.csv");
  GsvdFactors f;
  f.u = io::read_matrix_market(dir / "u.mtx");
  f.v1 = io::read_matrix_market(dir / "v1.mtx");
  f.x = io::read_matrix_market(dir / "x.mtx");
  f.x_inv = io::read_matrix_market(dir / "x_inv.mtx");
  f.alpha = io::read_csv_vector(dir / "alpha.csv");
  f.beta = io::read_csv_vector(dir / "beta.csv");
  f.r = std::stoll(kv.at("r"));
  f.branch = parse_gsvd_branch(kv.at("branch"));
  if (std::stoll(kv.at("n")) != f.n() || std::stoll(kv.at("k")) != f.k()) {
    throw IoError(dir.string() + ": manifest does not match stored factors");
  }
  return f;
}

}  // namespace rgsvd
