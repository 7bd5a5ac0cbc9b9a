#include "sabrlab/weights.hpp"

#include <cmath>

#include "sabrlab/geometry.hpp"

namespace sabrlab {

double adhoc_weight(double beta, double x, double y) {
  if (!(y > 0.0)) throw std::domain_error("adhoc_weight: require y > 0");
  if (!(x >= 0.0)) throw std::domain_error("adhoc_weight: require x >= 0");
  if (beta >= 1.0) throw std::domain_error("adhoc_weight: beta must be < 1");
  return y + 2.0 * pow_conv(x, 1.0 - beta) + pow_conv(x, 2.0 - 2.0 * beta) / y;
}

double adhoc_generator_value(double beta, double rho, double x, double y) {
  if (!(y > 0.0)) throw std::domain_error("adhoc_generator_value: require y > 0");
  if (beta > 0.0 && !(x > 0.0))
    throw std::domain_error("adhoc_generator_value: x^(beta-1) is singular at x = 0");
  const double mixed = beta == 0.0 ? 0.0 : -2.0 * beta * (1.0 - beta) * pow_conv(x, beta - 1.0) * y * y;
  return (2.0 - 2.0 * beta) * (1.0 - 2.0 * beta) * y + mixed -
         2.0 * rho * (2.0 - 2.0 * beta) * pow_conv(x, 1.0 - beta) +
         2.0 * pow_conv(x, 2.0 - 2.0 * beta) / y;
}

double adhoc_subeigen_gap(const ModelParams& p, double x, double y) {
  return 2.0 * adhoc_weight(p.beta, x, y) - adhoc_generator_value(p.beta, p.rho, x, y);
}

double radial_r(const ModelParams& p, double c, double x, double y) {
  if (p.beta >= 1.0) throw std::domain_error("radial_r: beta must be < 1");
  if (!(y > 0.0)) throw std::domain_error("radial_r: require y > 0");
  if (!(x >= 0.0)) throw std::domain_error("radial_r: require x >= 0");
  const double om = 1.0 - p.beta;
  const double a = pow_conv(x, om) / om - p.rho * y - c;
  return (1.0 + y * y) / (2.0 * y) + a * a / ((1.0 - p.rho * p.rho) * 2.0 * y);
}

double radial_weight(const WeightSpec& spec, double x, double y) {
  if (spec.kind != WeightKind::LegendreRadial)
    throw std::invalid_argument("radial_weight: spec must be LegendreRadial");
  return legendre_eval(spec.n, radial_r(spec.params, spec.c, x, y));
}

ScalarField radial_weight_field(const WeightSpec& spec) {
  ScalarField f;
  f.value = [spec](double x, double y) { return radial_weight(spec, x, y); };
  return f;
}

double eigen_residual(const WeightSpec& spec, double x, double y, double h) {
  const ScalarField f = radial_weight_field(spec);
  const double psi = f.value(x, y);
  if (spec.n == 0) return 0.0;  // constant weight, exact
  const double lap = metric_laplacian_richardson(spec.params, f, x, y, h);
  const double lambda = static_cast<double>(spec.n) * (spec.n + 1.0);
  return std::abs(lap - lambda * psi) / std::max(1.0, std::abs(psi));
}

double drift_condition_expression(const WeightSpec& spec, double x, double y) {
  const ModelParams& p = spec.params;
  const double r = radial_r(p, spec.c, x, y);
  const double dl = legendre_derivative(spec.n, r);
  const double bracket =
      y / (1.0 - p.beta) - pow_conv(x, p.beta - 1.0) * y * (p.rho * y + spec.c);
  return dl * (p.beta / (1.0 - p.rho * p.rho)) * bracket;
}

DriftConditionResult drift_condition_check(const WeightSpec& spec,
                                           const std::vector<std::array<double, 2>>& grid) {
  for (const auto& pt : grid) {
    if (drift_condition_expression(spec, pt[0], pt[1]) < 0.0) return {false, pt};
  }
  return {true, std::nullopt};
}

bool dyadic_exception_beta(double beta) {
  if (beta == 0.0) return true;
  if (!(beta > 0.0 && beta < 1.0)) return false;
  const double m_hat = 0.5 / (1.0 - beta);  // beta = (2m-1)/(2m)  <=>  m = 1/(2(1-beta))
  const double m = std::round(m_hat);
  return m >= 1.0 && std::abs(beta - (2.0 * m - 1.0) / (2.0 * m)) <= 1e-9;
}

int min_linear_growth_order(double beta) {
  int n = 1;
  while (beta > (2.0 * n - 1.0) / (2.0 * n)) ++n;
  return n;
}

RegimeVerdict regime_verdict(double c, int n, const ModelParams& p) {
  if (c < 0.0) throw std::invalid_argument("regime_verdict: require c >= 0");
  if (n < 0) throw std::invalid_argument("regime_verdict: require n >= 0");
  if (p.beta >= 1.0) return {false, RegimeClause::Rejected, "beta must be < 1"};
  if (c >= 1.0) return {true, RegimeClause::C_ge_1, "c >= 1 admits every (rho, beta)"};
  if (p.rho > 0.0) return {true, RegimeClause::RhoPositive, "rho in (0,1) admits c in [0,1)"};
  if (c > std::abs(p.rho))
    return {true, RegimeClause::C_gt_AbsRho, "c exceeds |rho|"};
  if (p.rho < 0.0 && dyadic_exception_beta(p.beta))
    return {true, RegimeClause::DyadicBetaException,
            "rho < 0, c <= |rho|, beta in {0} u {(2m-1)/(2m)}"};
  return {false, RegimeClause::Rejected, "reference point not realizable"};
}

SublevelReport sublevel_probe(const WeightSpec& spec, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("sublevel_probe: require R > 0");
  const auto eval = [&spec](double x, double y) {
    return spec.kind == WeightKind::AdHoc ? adhoc_weight(spec.params.beta, x, y)
                                          : radial_weight(spec, x, y);
  };

  constexpr int kPerDecade = 20;
  constexpr double kLo = -3.0, kHi = 3.0;
  const int npts = static_cast<int>((kHi - kLo) * kPerDecade) + 1;
  std::vector<double> coords(npts);
  for (int i = 0; i < npts; ++i) coords[i] = std::pow(10.0, kLo + i / double(kPerDecade));

  SublevelReport report;
  double min_value = std::numeric_limits<double>::infinity();
  bool any = false;
  int ix_lo = npts, ix_hi = -1, iy_lo = npts, iy_hi = -1;
  for (int i = 0; i < npts; ++i) {
    for (int j = 0; j < npts; ++j) {
      const double v = eval(coords[i], coords[j]);
      min_value = std::min(min_value, v);
      if (v <= R) {
        any = true;
        ix_lo = std::min(ix_lo, i);
        ix_hi = std::max(ix_hi, i);
        iy_lo = std::min(iy_lo, j);
        iy_hi = std::max(iy_hi, j);
      }
    }
  }
  report.min_value = min_value;
  if (!any) {
    report.status = SublevelStatus::Empty;
    return report;
  }

  // x -> 0 is part of the closed state space; reaching the smallest scanned x
  // just extends the box to the axis. The other three frontiers are escapes.
  report.x_lo = ix_lo == 0 ? 0.0 : coords[ix_lo - 1];
  report.x_hi = coords[std::min(ix_hi + 1, npts - 1)];
  report.y_lo = coords[std::max(iy_lo - 1, 0)];
  report.y_hi = coords[std::min(iy_hi + 1, npts - 1)];
  std::string leak;
  if (ix_hi == npts - 1) leak += "x->inf ";
  if (iy_lo == 0) leak += "y->0 ";
  if (iy_hi == npts - 1) leak += "y->inf ";
  if (!leak.empty()) {
    report.status = SublevelStatus::NotCoercive;
    report.leak = leak;
  } else {
    report.status = SublevelStatus::Bracketed;
  }
  return report;
}

}  // namespace sabrlab
