#include "rgsvd/tikhonov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "rgsvd/errors.hpp"
#include "rgsvd/io.hpp"

namespace rgsvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lambda(double lambda, const char* where) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << where << ": lambda must be positive and finite (got " << lambda << ")";
    throw ArgumentError(msg.str());
  }
}

void require_rhs(const Vector& b, Index rows, const char* where) {
  if (b.size() != rows) {
    throw DimensionError(std::string(where) + ": b has " + std::to_string(b.size()) +
                         " entries, expected " + std::to_string(rows));
  }
  require_finite(b, where);
}

// Filter expansion shared by the exact and inner GSVD solvers. Returns the
// coefficients of x in the basis x_alpha().
struct FilterSolve {
  Vector coef;
  double residual_sq = 0.0;
  double seminorm_sq = 0.0;
};

FilterSolve filter_solve(const FilterModel& model, double lambda) {
  FilterSolve out;
  const Index k = model.alpha.size();
  out.coef.resize(k);
  out.residual_sq = model.residual_floor;
  for (Index j = 0; j < k; ++j) {
    const double a2 = model.alpha(j) * model.alpha(j);
    const double lb = lambda * model.beta(j);
    const double denom = a2 + lb * lb;
    const double f = a2 / denom;
    const double one_minus_f = lb * lb / denom;
    out.coef(j) = f * model.eta(j) / model.alpha(j);
    out.residual_sq += one_minus_f * one_minus_f * model.eta(j) * model.eta(j);
    const double s = out.coef(j) * model.beta(j);
    out.seminorm_sq += s * s;
  }
  return out;
}

FilterModel model_from_factors(const GsvdFactors& f, const Vector& b) {
  FilterModel model;
  const Index k = f.k();
  const Index z = f.zero_alpha_count();
  model.alpha = f.alpha;
  model.beta.resize(k);
  for (Index j = 0; j < k; ++j) model.beta(j) = f.beta_at(z + j);
  model.eta = f.u.transpose() * b;
  model.residual_floor = (b - f.u * model.eta).squaredNorm();
  model.rows = static_cast<double>(f.u.rows());
  return model;
}

double golden_section_min(const std::function<double(double)>& g, double lo, double hi,
                          double tol) {
  const double inv_phi = 1.0 / std::numbers::phi;
  double a = lo, b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double gc = g(c), gd = g(d);
  while (b - a > tol) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - (b - a) * inv_phi;
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + (b - a) * inv_phi;
      gd = g(d);
    }
  }
  return gc <= gd ? c : d;
}

double log_norm(double squared) { return 0.5 * std::log(squared); }

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void TikhonovProblem::validate() const {
  if (a.cols() != l.cols()) {
    throw DimensionError(name + ": A has " + std::to_string(a.cols()) + " columns but L has " +
                         std::to_string(l.cols()));
  }
  require_rhs(b, a.rows(), "TikhonovProblem");
  if (x_true && x_true->size() != a.cols()) {
    throw DimensionError(name + ": x_true has the wrong length");
  }
  if (!(delta >= 0.0)) throw ArgumentError(name + ": negative noise level");
  GmpPair pair(a, l);
}

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::exact: return "exact";
    case SolveMethod::gsvd: return "gsvd";
    case SolveMethod::rgsvd: return "rgsvd";
    case SolveMethod::tgsvd: return "tgsvd";
  }
  return "unknown";
}

double relative_error(const Vector& x, const Vector& x_true) {
  if (x.size() != x_true.size()) throw DimensionError("relative_error: length mismatch");
  const double scale = x_true.norm();
  if (scale == 0.0) throw ArgumentError("relative_error: x_true is zero");
  return (x - x_true).norm() / scale;
}

void evaluate_against(RegularizedSolution& sol, const TikhonovProblem& prob) {
  sol.residual_norm = (prob.a * sol.x - prob.b).norm();
  sol.seminorm = (prob.l * sol.x).norm();
  if (prob.x_true) sol.rel_error = relative_error(sol.x, *prob.x_true);
}

RegularizedSolution solve_exact(const TikhonovProblem& prob, double lambda) {
  require_lambda(lambda, "solve_exact");
  require_rhs(prob.b, prob.a.rows(), "solve_exact");
  if (prob.a.cols() != prob.l.cols()) throw DimensionError("solve_exact: A and L differ in width");

  const Matrix stacked = vstack(prob.a, lambda * prob.l);
  Vector rhs = Vector::Zero(stacked.rows());
  rhs.head(prob.b.size()) = prob.b;

  const Vector s = singular_values(stacked);
  const Index n = prob.a.cols();
  if (n > 0 && !(s(n - 1) > pinv_cutoff(stacked.rows(), n) * s(0))) {
    throw RankError("solve_exact: [A; lambda L] is rank deficient (GMP violation)");
  }

  RegularizedSolution sol;
  sol.x = min_norm_lstsq(stacked, rhs);
  sol.lambda = lambda;
  sol.method = SolveMethod::exact;
  evaluate_against(sol, prob);
  return sol;
}

RegularizedSolution solve_gsvd(const GsvdFactors& factors, const Vector& b, double lambda) {
  require_lambda(lambda, "solve_gsvd");
  require_rhs(b, factors.u.rows(), "solve_gsvd");
  const FilterSolve fs = filter_solve(model_from_factors(factors, b), lambda);

  RegularizedSolution sol;
  sol.x = factors.x_alpha() * fs.coef;
  sol.lambda = lambda;
  sol.method = SolveMethod::gsvd;
  sol.residual_norm = std::sqrt(fs.residual_sq);
  sol.seminorm = std::sqrt(fs.seminorm_sq);
  return sol;
}

RegularizedSolution solve_rgsvd(const ApproxGsvd& approx, const Vector& b, double lambda,
                                RgsvdSolvePath path) {
  require_lambda(lambda, "solve_rgsvd");
  require_rhs(b, approx.p.rows(), "solve_rgsvd");

  RegularizedSolution sol;
  sol.lambda = lambda;
  sol.method = SolveMethod::rgsvd;
  if (approx.degenerate()) {
    sol.x = Vector::Zero(approx.q.rows());
    sol.residual_norm = b.norm();
    return sol;
  }

  const Vector b_hat = approx.p.transpose() * b;
  const double outside_sq = (b - approx.p * b_hat).squaredNorm();
  Vector y;
  if (path == RgsvdSolvePath::pseudo_inverse) {
    const Matrix stacked = vstack(approx.pt_a_q, lambda * approx.l_q);
    Vector rhs = Vector::Zero(stacked.rows());
    rhs.head(b_hat.size()) = b_hat;
    y = min_norm_lstsq(stacked, rhs);
    sol.residual_norm = std::sqrt((approx.pt_a_q * y - b_hat).squaredNorm() + outside_sq);
    sol.seminorm = (approx.l_q * y).norm();
  } else {
    const FilterSolve fs = filter_solve(model_from_factors(approx.inner, b_hat), lambda);
    y = approx.inner.x_alpha() * fs.coef;
    sol.residual_norm = std::sqrt(fs.residual_sq + outside_sq);
    sol.seminorm = std::sqrt(fs.seminorm_sq);
  }
  sol.x = approx.q * y;
  return sol;
}

RegularizedSolution solve_tgsvd(const GsvdFactors& factors, const Vector& b, Index k) {
  const Index total = factors.k();
  if (k < 1 || k > total) {
    throw ArgumentError("solve_tgsvd: k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(total) + "]");
  }
  require_rhs(b, factors.u.rows(), "solve_tgsvd");
  const FilterModel model = model_from_factors(factors, b);

  // gamma is increasing in the stored order, and beta = 0 components sit at
  // the end, so the retained set is a suffix.
  const Index kept = std::max(k, std::min(factors.r, total));
  Vector coef = Vector::Zero(total);
  double residual_sq = model.residual_floor;
  double seminorm_sq = 0.0;
  for (Index j = 0; j < total; ++j) {
    if (j >= total - kept) {
      coef(j) = model.eta(j) / model.alpha(j);
      seminorm_sq += std::pow(coef(j) * model.beta(j), 2);
    } else {
      residual_sq += model.eta(j) * model.eta(j);
    }
  }

  RegularizedSolution sol;
  sol.x = factors.x_alpha() * coef;
  sol.lambda = 0.0;
  sol.method = SolveMethod::tgsvd;
  sol.residual_norm = std::sqrt(residual_sq);
  sol.seminorm = std::sqrt(seminorm_sq);
  sol.truncation = kept;
  return sol;
}

Index tgsvd_truncation_for_lambda(const GsvdFactors& factors, double lambda) {
  require_lambda(lambda, "tgsvd_truncation_for_lambda");
  const Index z = factors.zero_alpha_count();
  Index count = 0;
  for (Index j = 0; j < factors.k(); ++j) {
    const double beta = factors.beta_at(z + j);
    if (beta == 0.0 || factors.alpha(j) > lambda * beta) ++count;
  }
  return std::max<Index>(count, 1);
}

const char* to_string(GcvRows rows) {
  return rows == GcvRows::projected ? "projected" : "ambient";
}

GcvRows parse_gcv_rows(const std::string& text) {
  if (text == "projected") return GcvRows::projected;
  if (text == "ambient") return GcvRows::ambient;
  throw ArgumentError("gcv rows must be 'projected' or 'ambient', got '" + text + "'");
}

double FilterModel::filter(Index i, double lambda) const {
  const double a2 = alpha(i) * alpha(i);
  const double lb = lambda * beta(i);
  return a2 / (a2 + lb * lb);
}

double FilterModel::residual_sq(double lambda) const {
  return filter_solve(*this, lambda).residual_sq;
}

double FilterModel::seminorm_sq(double lambda) const {
  return filter_solve(*this, lambda).seminorm_sq;
}

double FilterModel::trace(double lambda) const {
  double t = 0.0;
  for (Index i = 0; i < alpha.size(); ++i) t += filter(i, lambda);
  return t;
}

double FilterModel::gcv(double lambda) const {
  const double denom = rows - trace(lambda);
  if (!(denom > 1e-12 * std::max(rows, 1.0))) return kInf;
  return residual_sq(lambda) / (denom * denom);
}

FilterModel filter_model(const GsvdFactors& factors, const Vector& b) {
  require_rhs(b, factors.u.rows(), "filter_model");
  return model_from_factors(factors, b);
}

FilterModel filter_model(const ApproxGsvd& approx, const Vector& b, GcvRows rows) {
  require_rhs(b, approx.p.rows(), "filter_model");
  if (approx.degenerate()) {
    FilterModel model;
    model.residual_floor = b.squaredNorm();
    model.rows = static_cast<double>(rows == GcvRows::ambient ? b.size() : 0);
    return model;
  }
  const Vector b_hat = approx.p.transpose() * b;
  FilterModel model = model_from_factors(approx.inner, b_hat);
  if (rows == GcvRows::ambient) {
    model.residual_floor += (b - approx.p * b_hat).squaredNorm();
    model.rows = static_cast<double>(b.size());
  }
  return model;
}

std::vector<double> LambdaGrid::values() const {
  if (!(lo > 0.0) || !(hi > lo) || points < 3) {
    throw ArgumentError("LambdaGrid: need 0 < lo < hi and at least 3 points");
  }
  std::vector<double> v(static_cast<std::size_t>(points));
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (Index j = 0; j < points; ++j) {
    v[static_cast<std::size_t>(j)] = lo * std::exp(step * static_cast<double>(j));
  }
  v.back() = hi;
  return v;
}

GcvChoice gcv_lambda(const FilterModel& model, const LambdaGrid& grid) {
  const std::vector<double> lambdas = grid.values();
  std::size_t best = lambdas.size();
  double best_g = kInf;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double g = model.gcv(lambdas[j]);
    if (g < best_g) {
      best_g = g;
      best = j;
    }
  }
  if (best == lambdas.size()) {
    std::ostringstream msg;
    msg << "gcv_lambda: denominator rows - trace vanishes on the whole grid (rows = "
        << model.rows << ", components = " << model.alpha.size() << ")";
    throw SelectionError(msg.str());
  }

  const double lo = std::log(lambdas[best == 0 ? 0 : best - 1]);
  const double hi = std::log(lambdas[std::min(best + 1, lambdas.size() - 1)]);
  const auto g_of_t = [&](double t) { return model.gcv(std::exp(t)); };
  const double t = golden_section_min(g_of_t, lo, hi, std::log1p(grid.refine_rel_width));

  GcvChoice choice{lambdas[best], best_g};
  const double refined = g_of_t(t);
  if (refined <= best_g) choice = {std::exp(t), refined};
  return choice;
}

GcvChoice gcv_lambda(const GsvdFactors& factors, const Vector& b, const LambdaGrid& grid) {
  return gcv_lambda(filter_model(factors, b), grid);
}

GcvChoice gcv_lambda(const ApproxGsvd& approx, const Vector& b, GcvRows rows,
                     const LambdaGrid& grid) {
  return gcv_lambda(filter_model(approx, b, rows), grid);
}

LcurveChoice lcurve_lambda(const FilterModel& model, const LambdaGrid& grid) {
  const std::vector<double> lambdas = grid.values();
  const std::size_t count = lambdas.size();
  LcurveChoice out;
  out.curve.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const FilterSolve fs = filter_solve(model, lambdas[j]);
    out.curve[j] = {lambdas[j], log_norm(fs.residual_sq), log_norm(fs.seminorm_sq),
                    std::numeric_limits<double>::quiet_NaN()};
  }

  double gamma_lo = kInf, gamma_hi = 0.0;
  for (Index i = 0; i < model.alpha.size(); ++i) {
    if (model.beta(i) > 0.0) {
      const double gamma = model.alpha(i) / model.beta(i);
      gamma_lo = std::min(gamma_lo, gamma);
      gamma_hi = std::max(gamma_hi, gamma);
    }
  }

  const double h = std::log(lambdas[1] / lambdas[0]);
  std::vector<double> speed(count, 0.0);
  double max_speed = 0.0;
  for (std::size_t j = 1; j + 1 < count; ++j) {
    const auto& prev = out.curve[j - 1];
    const auto& next = out.curve[j + 1];
    const double dx = (next.log_residual - prev.log_residual) / (2 * h);
    const double dy = (next.log_seminorm - prev.log_seminorm) / (2 * h);
    speed[j] = std::hypot(dx, dy);
    if (std::isfinite(speed[j])) max_speed = std::max(max_speed, speed[j]);
  }

  std::size_t best = count;
  double best_kappa = 0.0;
  for (std::size_t j = 1; j + 1 < count; ++j) {
    const auto& prev = out.curve[j - 1];
    const auto& cur = out.curve[j];
    const auto& next = out.curve[j + 1];
    const double dx = (next.log_residual - prev.log_residual) / (2 * h);
    const double dy = (next.log_seminorm - prev.log_seminorm) / (2 * h);
    const double ddx = (next.log_residual - 2 * cur.log_residual + prev.log_residual) / (h * h);
    const double ddy = (next.log_seminorm - 2 * cur.log_seminorm + prev.log_seminorm) / (h * h);
    const double kappa = (dx * ddy - ddx * dy) / std::pow(dx * dx + dy * dy, 1.5);
    out.curve[j].curvature = kappa;
    const bool in_span = gamma_hi == 0.0 || (cur.lambda >= gamma_lo && cur.lambda <= gamma_hi);
    if (in_span && std::isfinite(kappa) && speed[j] > 1e-8 * max_speed && kappa > best_kappa) {
      best_kappa = kappa;
      best = j;
    }
  }
  if (best == count) {
    throw SelectionError("lcurve_lambda: no point of positive curvature (flat L-curve)");
  }
  out.lambda = out.curve[best].lambda;
  out.log_residual = out.curve[best].log_residual;
  out.log_seminorm = out.curve[best].log_seminorm;
  return out;
}

LcurveChoice lcurve_lambda(const GsvdFactors& factors, const Vector& b, const LambdaGrid& grid) {
  return lcurve_lambda(filter_model(factors, b), grid);
}

LcurveChoice lcurve_lambda(const ApproxGsvd& approx, const Vector& b, const LambdaGrid& grid) {
  return lcurve_lambda(filter_model(approx, b), grid);
}

namespace {

// Residual and seminorm (squared) of the TGSVD solution for every
// retained-suffix length kept = 1..total.
void tgsvd_path(const FilterModel& model, std::vector<double>& res_sq,
                std::vector<double>& sem_sq) {
  const Index total = model.alpha.size();
  res_sq.assign(static_cast<std::size_t>(total + 1), 0.0);
  sem_sq.assign(static_cast<std::size_t>(total + 1), 0.0);
  double dropped = model.residual_floor + model.eta.squaredNorm();
  double kept_sem = 0.0;
  res_sq[0] = dropped;
  for (Index kept = 1; kept <= total; ++kept) {
    const Index j = total - kept;
    dropped -= model.eta(j) * model.eta(j);
    kept_sem += std::pow(model.eta(j) / model.alpha(j) * model.beta(j), 2);
    res_sq[static_cast<std::size_t>(kept)] = std::max(dropped, 0.0);
    sem_sq[static_cast<std::size_t>(kept)] = kept_sem;
  }
}

}  // namespace

TruncationChoice tgsvd_gcv(const GsvdFactors& factors, const Vector& b) {
  const FilterModel model = filter_model(factors, b);
  const Index total = model.alpha.size();
  std::vector<double> res_sq, sem_sq;
  tgsvd_path(model, res_sq, sem_sq);
  TruncationChoice best{0, kInf};
  for (Index kept = std::max<Index>(1, std::min(factors.r, total)); kept <= total; ++kept) {
    const double denom = model.rows - static_cast<double>(kept);
    if (denom <= 0.0) continue;
    const double g = res_sq[static_cast<std::size_t>(kept)] / (denom * denom);
    if (g < best.score) best = {kept, g};
  }
  if (best.k == 0) throw SelectionError("tgsvd_gcv: no admissible truncation index");
  return best;
}

TruncationChoice tgsvd_lcurve(const GsvdFactors& factors, const Vector& b) {
  const FilterModel model = filter_model(factors, b);
  const Index total = model.alpha.size();
  std::vector<double> res_sq, sem_sq;
  tgsvd_path(model, res_sq, sem_sq);

  struct Pt {
    Index k;
    double x, y;
  };
  // Ordered by decreasing k, i.e. increasing regularization, so that the
  // corner has positive signed curvature.
  std::vector<Pt> pts;
  for (Index kept = total; kept >= std::max<Index>(1, std::min(factors.r, total)); --kept) {
    const double x = log_norm(res_sq[static_cast<std::size_t>(kept)]);
    const double y = log_norm(sem_sq[static_cast<std::size_t>(kept)]);
    if (std::isfinite(x) && std::isfinite(y)) pts.push_back({kept, x, y});
  }
  TruncationChoice best{0, 0.0};
  for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
    const double ax = pts[j].x - pts[j - 1].x, ay = pts[j].y - pts[j - 1].y;
    const double bx = pts[j + 1].x - pts[j].x, by = pts[j + 1].y - pts[j].y;
    const double cx = pts[j + 1].x - pts[j - 1].x, cy = pts[j + 1].y - pts[j - 1].y;
    const double denom = std::hypot(ax, ay) * std::hypot(bx, by) * std::hypot(cx, cy);
    if (!(denom > 0.0)) continue;
    const double kappa = 2.0 * (ax * by - ay * bx) / denom;
    if (kappa > best.score) best = {pts[j].k, kappa};
  }
  if (best.k == 0) throw SelectionError("tgsvd_lcurve: no corner on the discrete L-curve");
  return best;
}

ErrorBoundDiagnostics error_bound_diagnostics(const TikhonovProblem& prob,
                                              const ApproxGsvd& approx, double lambda,
                                              double epsilon) {
  require_lambda(lambda, "error_bound_diagnostics");
  const Index m = prob.m();
  const Index n = prob.n();
  if (n > GmpPair::kVerifyLimit) {
    throw ArgumentError("error_bound_diagnostics: n = " + std::to_string(n) +
                        " exceeds the dense-norm limit " +
                        std::to_string(GmpPair::kVerifyLimit));
  }
  if (approx.q.rows() != n || approx.p.rows() != m) {
    throw DimensionError("error_bound_diagnostics: factorization does not match the problem");
  }
  constexpr double c = std::numbers::phi;

  ErrorBoundDiagnostics d;
  d.branch = approx.branch;
  d.lambda = lambda;
  d.epsilon = epsilon;

  const Vector x_exact = solve_exact(prob, lambda).x;
  const Vector x_rand = solve_rgsvd(approx, prob.b, lambda).x;
  const double x_norm = x_exact.norm();
  d.lhs = (x_rand - x_exact).norm() / x_norm;
  const double b_norm = prob.b.norm();
  d.nu_lambda = b_norm / x_norm;

  const Matrix stacked = vstack(prob.a, lambda * prob.l);
  const Vector s_stacked = singular_values(stacked);
  d.stacked_norm = s_stacked(0);
  d.pinv_norm = pinv_norm2(stacked);

  const Matrix& p = approx.p;
  const Matrix& q = approx.q;
  const Matrix pp_a = p * (p.transpose() * prob.a);
  const Matrix stacked_tilde = vstack(pp_a, lambda * prob.l);
  const Vector s_tilde = singular_values(stacked_tilde);
  d.xi = pinv_norm2(stacked_tilde);
  const bool tilde_full_rank =
      s_tilde(n - 1) > pinv_cutoff(stacked_tilde.rows(), n) * s_tilde(0);
  d.gamma1 = norm2(prob.l * q * q.transpose() - prob.l);

  if (approx.branch == RgsvdBranch::over) {
    const Matrix pt_a = p.transpose() * prob.a;
    d.realized_epsilon =
        std::max(norm2(prob.a - pp_a), norm2(pt_a - pt_a * q * q.transpose()));
    d.preconditions_hold = tilde_full_rank && d.realized_epsilon <= epsilon;
    d.rhs = epsilon * (c * d.xi * d.xi * d.nu_lambda +
                       std::numbers::sqrt2 * d.xi * d.pinv_norm * d.nu_lambda) +
            c * lambda * d.gamma1 * d.xi * d.xi * d.nu_lambda;
    return d;
  }

  const Matrix a_q = prob.a * q;
  d.realized_epsilon = std::max(norm2(a_q * q.transpose() - prob.a),
                                norm2(p * (p.transpose() * a_q) - a_q));
  const Index l1 = q.cols();
  const Vector s_aq = singular_values(vstack(a_q, lambda * prob.l * q));
  const bool aq_full_rank =
      l1 > 0 && s_aq(l1 - 1) > pinv_cutoff(m + prob.l.rows(), l1) * s_aq(0);
  d.preconditions_hold = tilde_full_rank && aq_full_rank && d.realized_epsilon <= epsilon;

  const GsvdFactors full = gsvd_numerical_rank(GmpPair::trusted(prob.a, prob.l));
  d.gamma2 = n - l1 > 0 ? norm2(full.x.leftCols(n - l1)) * norm2(full.x_inv) : 0.0;

  const double pinv2 = d.pinv_norm * d.pinv_norm;
  const double term_i = c * epsilon * d.xi * d.pinv_norm * b_norm;
  const double term_iia =
      c * (epsilon + lambda * d.gamma1 + d.gamma2 * d.stacked_norm) * pinv2 * b_norm;
  d.rhs = (term_i + term_iia) / x_norm + d.gamma2;
  return d;
}

void write_solutions_csv(const std::filesystem::path& path,
                         const std::vector<RegularizedSolution>& solutions) {
  auto out = open_csv(path);
  out << "method,lambda,residual_norm,seminorm,rel_error,truncation\n";
  for (const auto& s : solutions) {
    out << to_string(s.method) << ',' << io::format_double(s.lambda) << ','
        << io::format_double(s.residual_norm) << ',' << io::format_double(s.seminorm) << ','
        << (s.rel_error ? io::format_double(*s.rel_error) : std::string("nan")) << ','
        << (s.truncation ? std::to_string(*s.truncation) : std::string()) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<ErrorBoundDiagnostics>& rows) {
  auto out = open_csv(path);
  out << "branch,lambda,epsilon,xi,nu_lambda,gamma1,gamma2,pinv_norm,stacked_norm,"
         "realized_epsilon,preconditions_hold,lhs,rhs\n";
  for (const auto& d : rows) {
    out << to_string(d.branch) << ',' << io::format_double(d.lambda) << ','
        << io::format_double(d.epsilon) << ',' << io::format_double(d.xi) << ','
        << io::format_double(d.nu_lambda) << ',' << io::format_double(d.gamma1) << ','
        << io::format_double(d.gamma2) << ',' << io::format_double(d.pinv_norm) << ','
        << io::format_double(d.stacked_norm) << ',' << io::format_double(d.realized_epsilon)
        << ',' << (d.preconditions_hold ? 1 : 0) << ',' << io::format_double(d.lhs) << ','
        << io::format_double(d.rhs) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rgsvd
