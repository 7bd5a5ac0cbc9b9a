#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sabrlab/model.hpp"
#include "sabrlab/operators.hpp"

namespace sabrlab {

enum class WeightKind { AdHoc, LegendreRadial };

/// Tagged description of a candidate weight function. c and n are used by the
/// Legendre-radial family only.
struct WeightSpec {
  WeightKind kind = WeightKind::AdHoc;
  ModelParams params;
  double c = 1.0;
  int n = 1;
};

/// psi(x,y) = y + 2 x^(1-beta) + x^(2-2 beta) / y, beta < 1.
double adhoc_weight(double beta, double x, double y);

/// Closed-form value of y^2 (x^2b d_xx + 2 rho x^b d_xy + d_yy) psi for the
/// weight above (the operator of the sub-eigen inequality, twice the SABR
/// generator). Requires x > 0 when beta > 0.
double adhoc_generator_value(double beta, double rho, double x, double y);

/// Sub-eigen gap 2 psi - (operator value); nonnegative on the whole quadrant
/// for every beta in [0,1], rho in [-1,1].
double adhoc_subeigen_gap(const ModelParams& p, double x, double y);

/// Radial coordinate r_c(x,y) = (1+y^2)/(2y) + (x^(1-b)/(1-b) - rho y - c)^2 / ((1-rho^2) 2y).
/// Always >= 1.
double radial_r(const ModelParams& p, double c, double x, double y);

/// Legendre-radial weight psi_{c,n} = P_n(r_c).
double radial_weight(const WeightSpec& spec, double x, double y);

/// Weight as a value-only field (derivatives by finite differences).
ScalarField radial_weight_field(const WeightSpec& spec);

/// Relative eigen-residual |L psi_{c,n} - n(n+1) psi_{c,n}| / max(1, psi) where
/// L is the metric Laplacian, evaluated with a Richardson-extrapolated stencil.
double eigen_residual(const WeightSpec& spec, double x, double y, double h = 1e-2);

/// Value of the drift expression dP_n/dr (r_c) * (beta/(1-rho^2)) *
/// (y/(1-beta) - x^(beta-1) y (rho y + c)); the drift condition with
/// lambda_hat = 0 asks this to be >= 0.
double drift_condition_expression(const WeightSpec& spec, double x, double y);

struct DriftConditionResult {
  bool holds = true;
  std::optional<std::array<double, 2>> witness;  // first violating point
};

DriftConditionResult drift_condition_check(const WeightSpec& spec,
                                           const std::vector<std::array<double, 2>>& grid);

enum class RegimeClause { C_ge_1, RhoPositive, C_gt_AbsRho, DyadicBetaException, Rejected };

struct RegimeVerdict {
  bool admissible = false;
  RegimeClause clause = RegimeClause::Rejected;
  std::string note;
};

/// Parameter-regime table for the Legendre-radial weights: c >= 1 always
/// works; c in [0,1) works for rho > 0, or for c > |rho|, or - when rho < 0
/// and c <= |rho| - exactly when beta is 0 or of the form (2m-1)/(2m).
RegimeVerdict regime_verdict(double c, int n, const ModelParams& p);

/// True when beta is 0 or (2m-1)/(2m) for some positive integer m.
bool dyadic_exception_beta(double beta);

/// Smallest n with beta <= (2n-1)/(2n); weights of that order grow at least
/// linearly in x.
int min_linear_growth_order(double beta);

enum class SublevelStatus { Empty, Bracketed, NotCoercive };

struct SublevelReport {
  SublevelStatus status = SublevelStatus::Empty;
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  double min_value = 0.0;     ///< smallest weight value seen on the scan
  std::string leak;           ///< escape direction when not coercive
};

/**
 * Brackets the sublevel set {psi <= R} inside a box by a logarithmic scan of
 * (1e-3, 1e3)^2. x -> 0 is a genuine boundary of the state space, so sublevel
 * points reaching the smallest scanned x extend the box to x = 0; escapes
 * toward x -> inf, y -> 0 or y -> inf are reported as NotCoercive. Numerical
 * evidence only.
 */
SublevelReport sublevel_probe(const WeightSpec& spec, double R);

}  // namespace sabrlab
