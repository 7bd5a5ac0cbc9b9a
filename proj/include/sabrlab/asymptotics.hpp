#pragma once

#include <cstdint>
#include <optional>

#include "sabrlab/model.hpp"
#include "sabrlab/rng.hpp"
#include "sabrlab/simulate.hpp"

namespace sabrlab {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for k successes out of n (95% by default).
WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct AbsorptionEstimate {
  double p_hat = 0.0;
  std::size_t n = 0;  ///< decided replicates (the CI base)
  WilsonInterval ci;
  double truncation_horizon = 0.0;
  double tail_fraction = 0.0;  ///< replicates still undecided at truncation
};

struct ClockDraw {
  double value = 0.0;
  bool converged = false;
  double horizon = 0.0;
};

/// One realization of the total clock integral of Y_s^2 ds to the horizon.
/// converged = true when the last decile of the horizon contributed less than
/// 0.1% of the total.
ClockDraw total_clock(const ModelParams& p, double y0, double horizon, double dt,
                      NormalSampler& rng);

/// Adaptive variant: keeps extending the same trajectory (doubling the
/// horizon) until the tail criterion holds or max_horizon is reached.
ClockDraw total_clock_adaptive(const ModelParams& p, double y0, double dt, NormalSampler& rng,
                               double initial_horizon = 25.0, double max_horizon = 400.0);

struct McConfig {
  std::size_t n = 10000;
  double dt = 0.01;
  double max_horizon = 400.0;
  std::uint64_t master_seed = 1;
};

/**
 * Monte Carlo estimate of P(X_infinity > 0) via the race between the total
 * clock and the hitting time of zero of the decoupled forward. The undrifted
 * model requires rho = 0 (clock and hitting time drawn independently); the
 * drifted variant simulates the decoupled pair jointly for any rho.
 * Undecided replicates are reported as tail_fraction, never imputed.
 */
AbsorptionEstimate absorption_probability(const ModelParams& p, double x0, double y0, bool drifted,
                                          const McConfig& mc);

enum class CaseTag { HitBeforeClockEnds, ClockEndsFirst, Simultaneous, Undecided };

/// Compares the first zero-hitting times of the two coordinates of a
/// decoupled pair (interpolated); Simultaneous within one grid step.
CaseTag case_decomposition(const ScalarPath& x_path, const ScalarPath& y_path);

struct CaseCounts {
  std::size_t hit_before_clock = 0;
  std::size_t clock_ends_first = 0;
  std::size_t simultaneous = 0;
  std::size_t undecided = 0;
};

enum class BoundaryClass { NotEntrance, Entrance };

/// Feller test at infinity for the CEV speed measure: the integral of
/// x^(1-2 beta) over [1, inf) diverges iff beta <= 1.
BoundaryClass feller_boundary_class(double beta);

/// Value of that integral: +inf for beta <= 1, else 1/(2 beta - 2).
double cev_entrance_integral(double beta);

/// Fraction of direct Euler paths absorbed by time T, with Wilson CI.
AbsorptionEstimate mass_at_zero(const ModelParams& p, double x0, double y0, double T,
                                const McConfig& mc);

}  // namespace sabrlab
