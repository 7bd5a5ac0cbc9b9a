#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sabrlab {

/**
 * SABR parameter record.
 *
 * Model dynamics on the state space D = [0,inf) x (0,inf):
 *   dX = Y X^beta dW,   dY = nu Y dZ,   d<W,Z> = rho dt
 * with correlation realized as Z = rho*W + rho_bar*W_perp.
 *
 * sigma is the volatility of the one-dimensional CEV model dX = sigma X^beta dW,
 * used when the two-factor model degenerates (nu = 0) and by the exact
 * Stratonovich-CEV map.
 */
struct ModelParams {
  double beta = 0.5;   ///< CEV exponent, in [0,1]
  double rho = 0.0;    ///< correlation, in (-1,1)
  double nu = 1.0;     ///< vol-of-vol, >= 0
  double sigma = 1.0;  ///< 1D CEV volatility, > 0
  double rho_bar = 1.0;  ///< derived, sqrt(1 - rho^2)

  ModelParams() = default;

  ModelParams(double beta_, double rho_, double nu_, double sigma_ = 1.0)
      : beta(beta_), rho(rho_), nu(nu_), sigma(sigma_) {
    if (!(beta >= 0.0 && beta <= 1.0))
      throw std::invalid_argument("ModelParams: beta must be in [0,1], got " + std::to_string(beta));
    if (!(std::abs(rho) < 1.0))
      throw std::invalid_argument("ModelParams: |rho| must be < 1, got " + std::to_string(rho));
    if (!(nu >= 0.0))
      throw std::invalid_argument("ModelParams: nu must be >= 0, got " + std::to_string(nu));
    if (!(sigma > 0.0))
      throw std::invalid_argument("ModelParams: sigma must be > 0, got " + std::to_string(sigma));
    rho_bar = std::sqrt(1.0 - rho * rho);
  }
};

/// Point of the state space, with the forward pinned at zero once absorbed.
struct State2 {
  double x = 1.0;
  double y = 1.0;
  bool absorbed = false;
};

/// x^e with the continuity convention of the CEV diffusion coefficient:
/// x^0 = 1 everywhere, and nonzero powers evaluate to 0 at the origin.
inline double pow_conv(double x, double e) {
  if (e == 0.0) return 1.0;
  if (x <= 0.0) return 0.0;
  if (e == 1.0) return x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 2.0) return x * x;
  return std::pow(x, e);
}

struct SdeCoefficients {
  std::array<double, 2> drift{};
  std::array<std::array<double, 2>, 2> diffusion{};  // rows act on (dW, dW_perp)
};

/**
 * Drift and diffusion of the SABR system at a state.
 *
 * Diffusion rows follow the Cholesky convention Z = rho*W + rho_bar*W_perp:
 *   row x: (y x^beta, 0)
 *   row y: (nu y rho, nu y rho_bar)
 * The drifted variant adds the first-order term (y^2/2) beta x^(2 beta - 1)
 * to the forward coordinate. Absorbed states yield all-zero coefficients.
 */
inline SdeCoefficients sabr_coefficients(const ModelParams& p, const State2& s, bool drifted = false) {
  if (s.absorbed) return {};
  if (!(s.y > 0.0)) throw std::domain_error("sabr_coefficients: require y > 0");
  SdeCoefficients c;
  c.diffusion[0] = {s.y * pow_conv(s.x, p.beta), 0.0};
  c.diffusion[1] = {p.nu * s.y * p.rho, p.nu * s.y * p.rho_bar};
  if (drifted) c.drift[0] = 0.5 * s.y * s.y * p.beta * pow_conv(s.x, 2.0 * p.beta - 1.0);
  return c;
}

/**
 * Exact solution map of the Stratonovich CEV equation,
 *   x(w) = (x0^(1-beta) + sigma^2 (1-beta) w)^(1/(1-beta)),
 * clamped to 0 once the inner expression is nonpositive (absorption).
 * Undefined for beta = 1.
 */
inline double cev_exact_stratonovich(double x0, double beta, double sigma, double w) {
  if (beta >= 1.0) throw std::domain_error("cev_exact_stratonovich: beta must be < 1");
  if (!(x0 > 0.0)) throw std::domain_error("cev_exact_stratonovich: require x0 > 0");
  const double inner = std::pow(x0, 1.0 - beta) + sigma * sigma * (1.0 - beta) * w;
  if (inner <= 0.0) return 0.0;
  return std::pow(inner, 1.0 / (1.0 - beta));
}

}  // namespace sabrlab
