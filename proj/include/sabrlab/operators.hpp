#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sabrlab/model.hpp"

namespace sabrlab {

/// Test function with optional analytic derivatives. When the gradient or
/// hessian callback is absent, operators fall back to central differences.
struct ScalarField {
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> gradient;       // (fx, fy)
  std::function<std::array<double, 3>(double, double)> hessian;        // (fxx, fxy, fyy)
};

enum class GeneratorKind {
  SabrA,                       ///< (1/2) y^2 (x^2b fxx + 2 rho x^b fxy + fyy)
  TimeChangedAtilde,           ///< SabrA / y^2
  LaplaceBeltrami,             ///< (b/2) y^2 x^(2b-1) fx + SabrA   (heat generator of the drifted system)
  TimeChangedLaplaceBeltrami,  ///< LaplaceBeltrami / y^2
  WeightedLaplaceBeltrami,     ///< SabrA - rho b y^2 x^(b-1) fy
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::SabrA;
  ModelParams params;
};

inline double default_fd_step(double x, double y) {
  return 1e-4 * std::max({1.0, std::abs(x), std::abs(y)});
}

inline std::array<double, 2> fd_gradient(const std::function<double(double, double)>& f,
                                         double x, double y, double h) {
  return {(f(x + h, y) - f(x - h, y)) / (2.0 * h),
          (f(x, y + h) - f(x, y - h)) / (2.0 * h)};
}

inline std::array<double, 3> fd_hessian(const std::function<double(double, double)>& f,
                                        double x, double y, double h) {
  const double f0 = f(x, y);
  const double fxx = (f(x + h, y) - 2.0 * f0 + f(x - h, y)) / (h * h);
  const double fyy = (f(x, y + h) - 2.0 * f0 + f(x, y - h)) / (h * h);
  const double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) /
                     (4.0 * h * h);
  return {fxx, fxy, fyy};
}

namespace detail {

struct Derivs {
  double fx, fy, fxx, fxy, fyy;
};

inline Derivs field_derivs(const ScalarField& f, double x, double y, double h) {
  Derivs d{};
  if (f.gradient) {
    const auto g = f.gradient(x, y);
    d.fx = g[0];
    d.fy = g[1];
  } else {
    if (!(x > 4.0 * h && y > 4.0 * h))
      throw std::domain_error("apply_generator: stencil leaves the state space");
    const auto g = fd_gradient(f.value, x, y, h);
    d.fx = g[0];
    d.fy = g[1];
  }
  if (f.hessian) {
    const auto hs = f.hessian(x, y);
    d.fxx = hs[0];
    d.fxy = hs[1];
    d.fyy = hs[2];
  } else {
    if (!(x > 4.0 * h && y > 4.0 * h))
      throw std::domain_error("apply_generator: stencil leaves the state space");
    const auto hs = fd_hessian(f.value, x, y, h);
    d.fxx = hs[0];
    d.fxy = hs[1];
    d.fyy = hs[2];
  }
  return d;
}

}  // namespace detail

/// Applies the selected differential operator at an interior point, using
/// analytic derivatives of f when supplied, otherwise central differences
/// of order h^2 (default step 1e-4 * max(1,|x|,|y|), margin 4h).
inline double apply_generator(const GeneratorSpec& gen, const ScalarField& f,
                              double x, double y, double h = 0.0) {
  if (!(x > 0.0 && y > 0.0)) throw std::domain_error("apply_generator: interior point required");
  if (h <= 0.0) h = default_fd_step(x, y);
  const ModelParams& p = gen.params;
  const auto d = detail::field_derivs(f, x, y, h);
  const double xb = pow_conv(x, p.beta);
  const double second = 0.5 * (xb * xb * d.fxx + 2.0 * p.rho * xb * d.fxy + d.fyy);
  switch (gen.kind) {
    case GeneratorKind::SabrA:
      return y * y * second;
    case GeneratorKind::TimeChangedAtilde:
      return second;
    case GeneratorKind::LaplaceBeltrami:
      return 0.5 * p.beta * y * y * pow_conv(x, 2.0 * p.beta - 1.0) * d.fx + y * y * second;
    case GeneratorKind::TimeChangedLaplaceBeltrami:
      return 0.5 * p.beta * pow_conv(x, 2.0 * p.beta - 1.0) * d.fx + second;
    case GeneratorKind::WeightedLaplaceBeltrami:
      return y * y * second - p.rho * p.beta * y * y * pow_conv(x, p.beta - 1.0) * d.fy;
  }
  throw std::logic_error("apply_generator: unknown kind");
}

/// Laplace-Beltrami operator of the SABR metric itself (twice the heat
/// generator): b y^2 x^(2b-1) fx + y^2 (x^2b fxx + 2 rho x^b fxy + fyy).
/// Radial pullback weights satisfy metric_laplacian(psi) = n(n+1) psi.
inline double metric_laplacian(const ModelParams& p, const ScalarField& f,
                               double x, double y, double h = 0.0) {
  return 2.0 * apply_generator({GeneratorKind::LaplaceBeltrami, p}, f, x, y, h);
}

/// One Richardson halving step for the finite-difference evaluation: combines
/// steps h and h/2 into an O(h^4) estimate.
inline double apply_generator_richardson(const GeneratorSpec& gen, const ScalarField& f,
                                         double x, double y, double h) {
  const double coarse = apply_generator(gen, f, x, y, h);
  const double fine = apply_generator(gen, f, x, y, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

inline double metric_laplacian_richardson(const ModelParams& p, const ScalarField& f,
                                          double x, double y, double h) {
  return 2.0 * apply_generator_richardson({GeneratorKind::LaplaceBeltrami, p}, f, x, y, h);
}

}  // namespace sabrlab
