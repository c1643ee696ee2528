#pragma once

// Tikhonov regularization min ||A x - b||^2 + lambda^2 ||L x||^2: the direct
// least-squares oracle, GSVD filter solvers, TGSVD, and the GCV / L-curve
// parameter choice rules.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rgsvd/gsvd.hpp"
#include "rgsvd/randomized_gsvd.hpp"

namespace rgsvd {

struct TikhonovProblem {
  std::string name;
  Matrix a;
  Matrix l;
  Vector b;
  std::optional<Vector> x_true;
  std::optional<Vector> b_clean;
  double delta = 0.0;
  std::map<std::string, std::string> metadata;

  Index m() const { return a.rows(); }
  Index n() const { return a.cols(); }

  /// Shape and finiteness checks; for n <= GmpPair::kVerifyLimit also
  /// verifies that [A; L] has full column rank.
  void validate() const;
};

enum class SolveMethod { exact, gsvd, rgsvd, tgsvd };

const char* to_string(SolveMethod method);

struct RegularizedSolution {
  Vector x;
  double lambda = 0.0;
  SolveMethod method = SolveMethod::exact;
  /// ||A x - b|| for the operator the solution was computed from (the
  /// sketched operator P P^T A Q Q^T for the randomized solver).
  double residual_norm = 0.0;
  double seminorm = 0.0;
  std::optional<double> rel_error;
  /// Number of retained components (TGSVD only).
  std::optional<Index> truncation;
};

/// ||x - x_true|| / ||x_true||.
double relative_error(const Vector& x, const Vector& x_true);

/// Recomputes residual_norm and seminorm from the problem's A and L and
/// fills rel_error when x_true is known.
void evaluate_against(RegularizedSolution& sol, const TikhonovProblem& prob);

/// Minimum-norm least-squares solution of [A; lambda L] x = [b; 0].
RegularizedSolution solve_exact(const TikhonovProblem& prob, double lambda);

RegularizedSolution solve_gsvd(const GsvdFactors& factors, const Vector& b, double lambda);

enum class RgsvdSolvePath { pseudo_inverse, filter };

/// x = Q [P^T A Q; lambda L Q]^+ [P^T b; 0], or the same vector through the
/// filter expansion of the inner GSVD.
RegularizedSolution solve_rgsvd(const ApproxGsvd& approx, const Vector& b, double lambda,
                                RgsvdSolvePath path = RgsvdSolvePath::pseudo_inverse);

/// Keeps the components with beta = 0 and the k largest generalized
/// singular values; 1 <= k <= factors.k().
RegularizedSolution solve_tgsvd(const GsvdFactors& factors, const Vector& b, Index k);

/// Number of components TGSVD keeps for a cutoff lambda: gamma_i > lambda
/// or beta_i = 0 (at least 1).
Index tgsvd_truncation_for_lambda(const GsvdFactors& factors, double lambda);

/// Row count entering the GCV denominator of the randomized solver.
enum class GcvRows { projected, ambient };

const char* to_string(GcvRows rows);
GcvRows parse_gcv_rows(const std::string& text);

/// Everything the choice rules need, in filter-factor form. For component i
/// the filter is f_i = alpha_i^2 / (alpha_i^2 + lambda^2 beta_i^2) and
///
///   ||A x - b||^2 = residual_floor + sum (1 - f_i)^2 eta_i^2
///   ||L x||^2     = sum (f_i eta_i beta_i / alpha_i)^2
struct FilterModel {
  Vector alpha;
  Vector beta;
  Vector eta;
  double residual_floor = 0.0;
  double rows = 0.0;

  double filter(Index i, double lambda) const;
  double residual_sq(double lambda) const;
  double seminorm_sq(double lambda) const;
  double trace(double lambda) const;
  /// +inf where the denominator rows - trace is not positive.
  double gcv(double lambda) const;
};

FilterModel filter_model(const GsvdFactors& factors, const Vector& b);
FilterModel filter_model(const ApproxGsvd& approx, const Vector& b,
                         GcvRows rows = GcvRows::projected);

struct LambdaGrid {
  double lo = 1e-10;
  double hi = 1e2;
  Index points = 200;
  /// Golden-section refinement stops at hi/lo <= 1 + refine_rel_width.
  double refine_rel_width = 1e-3;

  std::vector<double> values() const;
};

struct GcvChoice {
  double lambda = 0.0;
  double gcv_value = 0.0;
};

GcvChoice gcv_lambda(const FilterModel& model, const LambdaGrid& grid = {});
GcvChoice gcv_lambda(const GsvdFactors& factors, const Vector& b, const LambdaGrid& grid = {});
GcvChoice gcv_lambda(const ApproxGsvd& approx, const Vector& b,
                     GcvRows rows = GcvRows::projected, const LambdaGrid& grid = {});

struct LcurvePoint {
  double lambda = 0.0;
  double log_residual = 0.0;
  double log_seminorm = 0.0;
  /// Signed curvature; NaN at the two end points.
  double curvature = 0.0;
};

struct LcurveChoice {
  double lambda = 0.0;
  double log_residual = 0.0;
  double log_seminorm = 0.0;
  /// The evaluated curve, ordered by increasing lambda.
  std::vector<LcurvePoint> curve;
};

/// Maximum-curvature point of (log ||A x - b||, log ||L x||) with
/// derivatives in log(lambda) taken by centered differences. The search is
/// limited to lambda within the span of the generalized singular values.
LcurveChoice lcurve_lambda(const FilterModel& model, const LambdaGrid& grid = {});
LcurveChoice lcurve_lambda(const GsvdFactors& factors, const Vector& b,
                           const LambdaGrid& grid = {});
LcurveChoice lcurve_lambda(const ApproxGsvd& approx, const Vector& b,
                           const LambdaGrid& grid = {});

struct TruncationChoice {
  Index k = 0;
  double score = 0.0;
};

/// Discrete GCV over the truncation index: ||A x_k - b||^2 / (m - k)^2.
TruncationChoice tgsvd_gcv(const GsvdFactors& factors, const Vector& b);

/// Discrete L-curve corner over the truncation index (largest Menger
/// curvature of consecutive points).
TruncationChoice tgsvd_lcurve(const GsvdFactors& factors, const Vector& b);

struct ErrorBoundDiagnostics {
  RgsvdBranch branch = RgsvdBranch::over;
  double lambda = 0.0;
  double epsilon = 0.0;
  double xi = 0.0;              // ||[P P^T A; lambda L]^+||_2
  double nu_lambda = 0.0;       // ||b|| / ||x_lambda||
  double gamma1 = 0.0;          // ||L (Q Q^T - I)||_2
  double gamma2 = 0.0;          // ||X_1||_2 ||X^{-1}||_2 (underdetermined only)
  double pinv_norm = 0.0;       // ||[A; lambda L]^+||_2
  double stacked_norm = 0.0;    // ||[A; lambda L]||_2
  double realized_epsilon = 0.0;
  bool preconditions_hold = false;
  double lhs = 0.0;             // ||x_R - x_lambda|| / ||x_lambda||
  double rhs = 0.0;
};

/// Evaluates the a-posteriori error bound of the randomized solver against
/// the exact Tikhonov solution. For m < n the bound is the non-asymptotic
/// form (before the lambda ~ epsilon ~ sigma_{k+1} substitution). Limited
/// to n <= 512.
ErrorBoundDiagnostics error_bound_diagnostics(const TikhonovProblem& prob,
                                              const ApproxGsvd& approx, double lambda,
                                              double epsilon);

/// One row per solution: method,lambda,residual_norm,seminorm,rel_error,truncation.
void write_solutions_csv(const std::filesystem::path& path,
                         const std::vector<RegularizedSolution>& solutions);
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<ErrorBoundDiagnostics>& rows);

}  // namespace rgsvd
