#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sabrlab/model.hpp"

namespace sabrlab {

/// Point of the Poincare upper half-plane.
struct HyperbolicPoint {
  double u = 0.0;
  double v = 1.0;  ///< > 0
};

/// Metric coefficients at a point, symmetric 2x2.
struct MetricTensor2 {
  double g_xx = 0.0;
  double g_xy = 0.0;
  double g_yy = 0.0;
};

/// Diffusion covariance matrix xi(x,y) = y^2 [[x^2b, rho x^b], [rho x^b, 1]].
/// rho = +-1 is allowed here (degenerate but well defined).
inline std::array<std::array<double, 2>, 2> xi_matrix(double beta, double rho, double x, double y) {
  const double xb = pow_conv(x, beta);
  const double y2 = y * y;
  return {{{y2 * xb * xb, y2 * rho * xb}, {y2 * rho * xb, y2}}};
}

/**
 * Local isometry from the SABR plane onto the Poincare half-plane,
 *   (x, y) -> (x^(1-beta) / (rho_bar (1-beta)) - rho y / rho_bar, y).
 * Requires beta < 1 and x > 0.
 */
inline HyperbolicPoint sabr_isometry(const ModelParams& p, double x, double y) {
  if (p.beta >= 1.0) throw std::domain_error("sabr_isometry: beta must be < 1");
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("sabr_isometry: require x > 0, y > 0");
  const double u = std::pow(x, 1.0 - p.beta) / (p.rho_bar * (1.0 - p.beta)) - p.rho * y / p.rho_bar;
  return {u, y};
}

/// cosh of the hyperbolic distance: 1 + ((u-U)^2 + (v-V)^2) / (2 v V).
inline double hyperbolic_cosh_distance(const HyperbolicPoint& Z, const HyperbolicPoint& z) {
  if (!(Z.v > 0.0 && z.v > 0.0))
    throw std::domain_error("hyperbolic_cosh_distance: points must lie in the upper half-plane");
  const double du = z.u - Z.u;
  const double dv = z.v - Z.v;
  return 1.0 + (du * du + dv * dv) / (2.0 * z.v * Z.v);
}

/**
 * cosh of the Riemannian distance on the SABR plane in closed form:
 *   1 + ((X^(1-b) - x^(1-b))/(1-b) - rho (Y-y))^2 / ((1-rho^2) 2 Y y)
 *     + (Y-y)^2 / (2 Y y).
 * Identical to hyperbolic_cosh_distance composed with the isometry.
 */
inline double sabr_cosh_distance(const ModelParams& p, double X, double Y, double x, double y) {
  if (p.beta >= 1.0) throw std::domain_error("sabr_cosh_distance: beta must be < 1");
  if (!(X > 0.0 && Y > 0.0 && x > 0.0 && y > 0.0))
    throw std::domain_error("sabr_cosh_distance: points must lie in (0,inf)^2");
  const double om = 1.0 - p.beta;
  const double a = (std::pow(X, om) - std::pow(x, om)) / om - p.rho * (Y - y);
  const double dy = Y - y;
  return 1.0 + a * a / ((1.0 - p.rho * p.rho) * 2.0 * Y * y) + dy * dy / (2.0 * Y * y);
}

/// Legendre polynomial P_n(r) by the three-term recurrence. The eigenvalue
/// magnitude attached to degree n is n(n+1).
inline double legendre_eval(int n, double r) {
  if (n < 0) throw std::domain_error("legendre_eval: n must be >= 0");
  if (n == 0) return 1.0;
  if (n == 1) return r;
  double pkm1 = 1.0, pk = r;
  for (int k = 1; k < n; ++k) {
    const double pkp1 = ((2.0 * k + 1.0) * r * pk - k * pkm1) / (k + 1.0);
    pkm1 = pk;
    pk = pkp1;
  }
  return pk;
}

/// Derivative P_n'(r) via P'_{n+1} = (2n+1) P_n + P'_{n-1}; polynomial-exact,
/// no singularity at r = 1.
inline double legendre_derivative(int n, double r) {
  if (n < 0) throw std::domain_error("legendre_derivative: n must be >= 0");
  if (n == 0) return 0.0;
  double pkm1 = 1.0, pk = r;        // P_{k-1}, P_k
  double dkm1 = 0.0, dk = 1.0;      // P'_{k-1}, P'_k
  for (int k = 1; k < n; ++k) {
    const double pkp1 = ((2.0 * k + 1.0) * r * pk - k * pkm1) / (k + 1.0);
    const double dkp1 = (2.0 * k + 1.0) * pk + dkm1;
    pkm1 = pk;
    pk = pkp1;
    dkm1 = dk;
    dk = dkp1;
  }
  return dk;
}

/// Riemannian distance of the CEV manifold, |b^(1-beta) - a^(1-beta)| / (sigma (1-beta)).
/// Finite as a -> 0 for beta < 1; +inf for beta = 1.
inline double cev_riemannian_distance(double beta, double sigma, double a, double b) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("cev_riemannian_distance: beta in [0,1]");
  if (!(sigma > 0.0)) throw std::domain_error("cev_riemannian_distance: sigma > 0");
  if (a < 0.0 || b < 0.0) throw std::domain_error("cev_riemannian_distance: endpoints >= 0");
  if (beta == 1.0) {
    if (a == b) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  const double om = 1.0 - beta;
  return std::abs(std::pow(b, om) - std::pow(a, om)) / (sigma * om);
}

/// Metric tensor of the SABR plane at an interior point; equals xi(x,y)^{-1}.
inline MetricTensor2 metric_tensor(const ModelParams& p, double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("metric_tensor: require x > 0, y > 0");
  const double xb = pow_conv(x, p.beta);
  const double y2 = y * y;
  const double c = 1.0 / (1.0 - p.rho * p.rho);
  return {c / (y2 * xb * xb), -c * p.rho / (y2 * xb), c / y2};
}

}  // namespace sabrlab
