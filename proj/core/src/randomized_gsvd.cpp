#include "rgsvd/randomized_gsvd.hpp"

#include <algorithm>
#include <string>

#include "rgsvd/errors.hpp"
#include "rgsvd/io.hpp"

namespace rgsvd {

const char* to_string(RgsvdBranch branch) {
  return branch == RgsvdBranch::over ? "over" : "under";
}

RgsvdBranch parse_rgsvd_branch(const std::string& text) {
  if (text == "over") return RgsvdBranch::over;
  if (text == "under") return RgsvdBranch::under;
  throw IoError("unknown randomized GSVD branch '" + text + "'");
}

std::uint64_t stage2_seed(std::uint64_t seed) { return mix64(seed + 1); }

namespace {

void check_inputs(const Matrix& a, const Matrix& l, const SamplerConfig& cfg) {
  if (a.cols() != l.cols()) {
    throw DimensionError("rgsvd: A has " + std::to_string(a.cols()) + " columns but L has " +
                         std::to_string(l.cols()));
  }
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("rgsvd: empty A");
  if (!(cfg.epsilon > 0.0)) throw ArgumentError("rgsvd: epsilon must be positive");
  require_finite(a, "rgsvd A");
  require_finite(l, "rgsvd L");
}

SamplerConfig stage2_config(const SamplerConfig& cfg, Index l1) {
  SamplerConfig s2 = cfg;
  s2.epsilon = cfg.stage2_epsilon.value_or(cfg.epsilon);
  s2.blocksize = std::min(cfg.blocksize, std::max<Index>(1, l1 - 1));
  s2.seed = stage2_seed(cfg.seed);
  return s2;
}

ApproxGsvd degenerate_result(Index m, Index n, const SamplerConfig& cfg, RgsvdBranch branch) {
  ApproxGsvd out;
  out.p = Matrix(m, 0);
  out.q = Matrix(n, 0);
  out.u2 = Matrix(m, 0);
  out.z = Matrix(0, n);
  out.epsilon = cfg.epsilon;
  out.branch = branch;
  out.seed = cfg.seed;
  return out;
}

void finish(ApproxGsvd& out, const Matrix& l) {
  out.l_q = l * out.q;
  out.inner = gsvd_full_rank(GmpPair(out.pt_a_q, out.l_q));
  out.u2 = out.p * out.inner.u;
  out.v1 = out.inner.v1;
  out.z = out.inner.x_inv * out.q.transpose();
}

}  // namespace

ApproxGsvd rgsvd_overdetermined(const Matrix& a, const Matrix& l, const SamplerConfig& cfg) {
  check_inputs(a, l, cfg);
  if (a.rows() < a.cols()) {
    throw DimensionError("rgsvd_overdetermined: requires m >= n");
  }
  ApproxGsvd out = degenerate_result(a.rows(), a.cols(), cfg, RgsvdBranch::over);

  out.p = adaptive_range_finder(a, cfg).q;
  out.l1 = out.p.cols();
  if (out.l1 == 0) return out;

  const Matrix at_p = a.transpose() * out.p;
  out.q = adaptive_range_finder(at_p, stage2_config(cfg, out.l1)).q;
  out.l2 = out.q.cols();
  if (out.l2 == 0) {
    out.p = Matrix(a.rows(), 0);
    return out;
  }
  out.pt_a_q = at_p.transpose() * out.q;
  finish(out, l);
  return out;
}

ApproxGsvd rgsvd_underdetermined(const Matrix& a, const Matrix& l, const SamplerConfig& cfg) {
  check_inputs(a, l, cfg);
  if (a.rows() >= a.cols()) {
    throw DimensionError("rgsvd_underdetermined: requires m < n");
  }
  ApproxGsvd out = degenerate_result(a.rows(), a.cols(), cfg, RgsvdBranch::under);

  out.q = adaptive_range_finder(a.transpose(), cfg).q;
  out.l1 = out.q.cols();
  if (out.l1 == 0) return out;

  const Matrix a_q = a * out.q;
  out.p = adaptive_range_finder(a_q, stage2_config(cfg, out.l1)).q;
  out.l2 = out.p.cols();
  if (out.l2 == 0) {
    out.q = Matrix(a.cols(), 0);
    return out;
  }
  out.pt_a_q = out.p.transpose() * a_q;
  finish(out, l);
  return out;
}

ApproxGsvd rgsvd(const Matrix& a, const Matrix& l, const SamplerConfig& cfg) {
  return a.rows() >= a.cols() ? rgsvd_overdetermined(a, l, cfg)
                              : rgsvd_underdetermined(a, l, cfg);
}

ApproxResiduals approx_residuals(const ApproxGsvd& approx, const Matrix& a, const Matrix& l) {
  ApproxResiduals res;
  if (approx.degenerate()) {
    res.compression = a.norm();
    return res;
  }
  const Matrix compressed = approx.p * approx.pt_a_q * approx.q.transpose();
  res.compression = (a - compressed).norm();
  const Matrix alpha_part = approx.u2 * approx.inner.alpha.asDiagonal() * approx.z_alpha();
  res.alpha_identity = (compressed - alpha_part).norm();
  const Matrix beta_part = approx.v1 * approx.inner.beta.asDiagonal() * approx.z_beta();
  res.beta_identity = (l * approx.q * approx.q.transpose() - beta_part).norm();
  return res;
}

void save_approx_gsvd(const std::filesystem::path& dir, const ApproxGsvd& approx) {
  std::filesystem::create_directories(dir);
  io::write_matrix_market(dir / "p.mtx", approx.p);
  io::write_matrix_market(dir / "q.mtx", approx.q);
  io::write_matrix_market(dir / "u2.mtx", approx.u2);
  io::write_matrix_market(dir / "v1.mtx", approx.v1);
  io::write_matrix_market(dir / "z.mtx", approx.z);
  io::write_matrix_market(dir / "pt_a_q.mtx", approx.pt_a_q);
  io::write_matrix_market(dir / "l_q.mtx", approx.l_q);
  if (!approx.degenerate()) save_gsvd(dir / "inner", approx.inner);
  io::write_key_values(dir / "config.csv",
                       {{"l1", std::to_string(approx.l1)},
                        {"l2", std::to_string(approx.l2)},
                        {"epsilon", io::format_double(approx.epsilon)},
                        {"branch", to_string(approx.branch)},
                        {"seed", std::to_string(approx.seed)}});
}

ApproxGsvd load_approx_gsvd(const std::filesystem::path& dir) {
  const auto kv = io::read_key_values(dir / "config.csv");
  ApproxGsvd approx;
  approx.p = io::read_matrix_market(dir / "p.mtx");
  approx.q = io::read_matrix_market(dir / "q.mtx");
  approx.u2 = io::read_matrix_market(dir / "u2.mtx");
  approx.v1 = io::read_matrix_market(dir / "v1.mtx");
  approx.z = io::read_matrix_market(dir / "z.mtx");
  approx.pt_a_q = io::read_matrix_market(dir / "pt_a_q.mtx");
  approx.l_q = io::read_matrix_market(dir / "l_q.mtx");
  approx.l1 = std::stoll(kv.at("l1"));
  approx.l2 = std::stoll(kv.at("l2"));
  approx.epsilon = io::parse_double(kv.at("epsilon"));
  approx.branch = parse_rgsvd_branch(kv.at("branch"));
  approx.seed = std::stoull(kv.at("seed"));
  if (!approx.degenerate()) approx.inner = load_gsvd(dir / "inner");
  return approx;
}

}  // namespace rgsvd
