#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sabrlab/model.hpp"
#include "sabrlab/rng.hpp"

namespace sabrlab {

/// Uniform grid on [t0, horizon] with n_steps intervals.
struct TimeGrid {
  double t0 = 0.0;
  double horizon = 1.0;
  int n_steps = 1;

  TimeGrid() = default;
  TimeGrid(double t0_, double horizon_, int n_steps_) : t0(t0_), horizon(horizon_), n_steps(n_steps_) {
    if (n_steps <= 0) throw std::invalid_argument("TimeGrid: n_steps must be positive");
    if (!(horizon > t0)) throw std::invalid_argument("TimeGrid: horizon must exceed t0");
  }

  double dt() const { return (horizon - t0) / n_steps; }
  double time(int i) const { return t0 + i * dt(); }
  int size() const { return n_steps + 1; }
};

/// Sampled two-dimensional trajectory. absorption_time marks the first grid
/// time at which x was pinned to zero; truncation_time the first grid time at
/// which the state was frozen because the second coordinate left (0,inf).
struct Path {
  TimeGrid grid;
  std::vector<State2> states;
  std::optional<double> absorption_time;
  std::optional<double> truncation_time;
};

/// Sampled scalar trajectory (CEV paths, clock values, path components).
struct ScalarPath {
  TimeGrid grid;
  std::vector<double> values;
};

ScalarPath x_component(const Path& path);
ScalarPath y_component(const Path& path);

/**
 * Explicit Euler scheme for the SABR system with absorbing boundary at x = 0.
 * The volatility coordinate is stepped exactly as a geometric Brownian motion,
 * Y <- Y exp(-nu^2 dt / 2 + nu dZ), and keeps evolving after x-absorption.
 * drifted = true adds the first-order term (Y^2/2) beta X^(2 beta - 1) dt.
 */
Path simulate_sabr_euler(const ModelParams& p, const State2& init, const TimeGrid& grid,
                         bool drifted, const SeedSpec& seed);

/**
 * Decoupled system: dX = X^beta dW (Euler; exact power map when drifted),
 * dY = nu dZ with exact Brownian increments. x absorbs at zero; the path is
 * frozen and flagged at the first time y leaves (0,inf).
 */
Path simulate_decoupled(const ModelParams& p, const State2& init, const TimeGrid& grid,
                        bool drifted, const SeedSpec& seed);

/**
 * Stochastic representation of the Dirichlet-form generator:
 *   dX = Y X^beta dW,  dY = nu Y dZ - rho beta Y^2 X^(beta-1) dt.
 * Y takes the exact GBM factor plus the Euler drift increment, so the rho = 0
 * case reproduces simulate_sabr_euler bit for bit at equal seeds. The drift is
 * frozen to zero once x is absorbed. Requires init.x > 0.
 */
Path simulate_dirichlet_representation(const ModelParams& p, const State2& init,
                                       const TimeGrid& grid, const SeedSpec& seed);

/// Driftless GBM dY = nu Y dZ sampled exactly on the grid.
ScalarPath simulate_gbm(double y0, double nu, const TimeGrid& grid, NormalSampler& rng);

/// CEV dX = sigma X^beta dW by Euler with absorption at zero.
ScalarPath simulate_cev(double x0, double beta, double sigma, const TimeGrid& grid,
                        NormalSampler& rng);

/// First grid time with value <= level, linearly interpolated between the
/// bracketing nodes; nullopt when the level is never reached.
std::optional<double> first_hitting_time(const ScalarPath& path, double level);

}  // namespace sabrlab
