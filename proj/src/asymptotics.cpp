#include "sabrlab/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sabrlab/parallel.hpp"

namespace sabrlab {

WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (k == 0) ci.lo = 0.0;
  if (k == n) ci.hi = 1.0;
  return ci;
}

namespace {

struct ClockState {
  double y;
  double t = 0.0;
  double integral = 0.0;
  std::vector<double> history;  // clock value after every step
};

void advance_clock(const ModelParams& p, ClockState& st, double to_horizon, double dt,
                   NormalSampler& rng) {
  const double sqdt = std::sqrt(dt);
  const double drift = -0.5 * p.nu * p.nu * dt;
  while (st.t < to_horizon - 0.5 * dt) {
    const double yn = st.y * std::exp(drift + p.nu * sqdt * rng.normal());
    st.integral += 0.5 * dt * (st.y * st.y + yn * yn);
    st.y = yn;
    st.t += dt;
    st.history.push_back(st.integral);
  }
}

bool tail_converged(const ClockState& st) {
  if (st.history.size() < 20 || st.integral <= 0.0) return false;
  const std::size_t cut = st.history.size() - st.history.size() / 10;
  const double tail = st.integral - st.history[cut - 1];
  return tail < 1e-3 * st.integral;
}

}  // namespace

ClockDraw total_clock(const ModelParams& p, double y0, double horizon, double dt,
                      NormalSampler& rng) {
  if (!(p.nu > 0.0)) throw std::domain_error("total_clock: require nu > 0");
  if (!(y0 > 0.0)) throw std::domain_error("total_clock: require y0 > 0");
  ClockState st{y0, 0.0, 0.0, {}};
  st.history.reserve(static_cast<std::size_t>(horizon / dt) + 2);
  advance_clock(p, st, horizon, dt, rng);
  return {st.integral, tail_converged(st), st.t};
}

ClockDraw total_clock_adaptive(const ModelParams& p, double y0, double dt, NormalSampler& rng,
                               double initial_horizon, double max_horizon) {
  if (!(p.nu > 0.0)) throw std::domain_error("total_clock_adaptive: require nu > 0");
  if (!(y0 > 0.0)) throw std::domain_error("total_clock_adaptive: require y0 > 0");
  ClockState st{y0, 0.0, 0.0, {}};
  double horizon = initial_horizon;
  while (true) {
    advance_clock(p, st, horizon, dt, rng);
    if (tail_converged(st)) return {st.integral, true, st.t};
    if (horizon >= max_horizon) return {st.integral, false, st.t};
    horizon = std::min(max_horizon, 2.0 * horizon);
  }
}

namespace {

// Streams a CEV trajectory dX = X^beta dW until it hits zero or the horizon;
// returns the (interpolated) hitting time or nullopt.
std::optional<double> cev_hitting_time(double x0, double beta, double dt, double horizon,
                                       NormalSampler& rng) {
  const double sqdt = std::sqrt(dt);
  double x = x0;
  double t = 0.0;
  while (t < horizon) {
    const double xn = x + pow_conv(x, beta) * sqdt * rng.normal();
    t += dt;
    if (xn <= 0.0) {
      const double frac = x / (x - xn);
      return t - dt + frac * dt;
    }
    x = xn;
  }
  return std::nullopt;
}

}  // namespace

AbsorptionEstimate absorption_probability(const ModelParams& p, double x0, double y0, bool drifted,
                                          const McConfig& mc) {
  if (!(p.beta < 1.0)) throw std::domain_error("absorption_probability: require beta < 1");
  if (!drifted && p.rho != 0.0)
    throw std::invalid_argument(
        "absorption_probability: the undrifted race estimator requires rho = 0");
  if (!(y0 > 0.0)) throw std::domain_error("absorption_probability: require y0 > 0");

  AbsorptionEstimate est;
  est.truncation_horizon = mc.max_horizon;
  if (x0 <= 0.0) {
    est.n = mc.n;
    est.ci = wilson_interval(0, mc.n);
    return est;
  }

  // verdict per replicate: 1 positive limit, 0 absorbed, -1 undecided
  std::vector<int> verdict(mc.n, -1);
  parallel_for(mc.n, [&](std::size_t i) {
    if (!drifted) {
      NormalSampler rng_clock(SeedSpec{mc.master_seed, 2 * i});
      NormalSampler rng_cev(SeedSpec{mc.master_seed, 2 * i + 1});
      const ClockDraw lam = total_clock_adaptive(p, y0, mc.dt, rng_clock, 25.0, mc.max_horizon);
      // The clock value is heavy-tailed; cap the forward simulation so a rare
      // huge draw cannot stall a replicate. Beyond the cap the verdict is
      // reported as undecided rather than imputed.
      const double cev_cap = std::min(lam.value, 25.0 * mc.max_horizon);
      const auto t0 = cev_hitting_time(x0, p.beta, mc.dt, cev_cap, rng_cev);
      if (t0) {
        verdict[i] = 0;  // forward hit zero before the clock ran out
      } else if (lam.converged && cev_cap >= lam.value) {
        verdict[i] = 1;  // clock exhausted first, forward still positive
      }
    } else {
      // Joint race on the decoupled drifted pair for general rho.
      NormalSampler rng(SeedSpec{mc.master_seed, i});
      const double sqdt = std::sqrt(mc.dt);
      const double om = 1.0 - p.beta;
      double inner = std::pow(x0, om);
      double ytil = y0;
      double t = 0.0;
      while (t < mc.max_horizon) {
        const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
        inner += om * sqdt * xi_w;
        ytil += p.nu * sqdt * xi_z;
        t += mc.dt;
        if (inner <= 0.0) {
          verdict[i] = 0;
          break;
        }
        if (ytil <= 0.0) {
          verdict[i] = 1;
          break;
        }
      }
    }
  });

  std::size_t decided = 0, positive = 0;
  for (int v : verdict) {
    if (v >= 0) ++decided;
    if (v == 1) ++positive;
  }
  est.n = decided;
  est.p_hat = decided == 0 ? 0.0 : static_cast<double>(positive) / decided;
  est.ci = wilson_interval(positive, decided);
  est.tail_fraction = static_cast<double>(mc.n - decided) / mc.n;
  return est;
}

CaseTag case_decomposition(const ScalarPath& x_path, const ScalarPath& y_path) {
  const auto hx = first_hitting_time(x_path, 0.0);
  const auto hy = first_hitting_time(y_path, 0.0);
  if (!hx && !hy) return CaseTag::Undecided;
  const double step = std::max(x_path.grid.dt(), y_path.grid.dt());
  if (hx && hy) {
    if (std::abs(*hx - *hy) < step) return CaseTag::Simultaneous;
    return *hx < *hy ? CaseTag::HitBeforeClockEnds : CaseTag::ClockEndsFirst;
  }
  return hx ? CaseTag::HitBeforeClockEnds : CaseTag::ClockEndsFirst;
}

BoundaryClass feller_boundary_class(double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("feller_boundary_class: require beta >= 0");
  return beta <= 1.0 ? BoundaryClass::NotEntrance : BoundaryClass::Entrance;
}

double cev_entrance_integral(double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("cev_entrance_integral: require beta >= 0");
  if (beta <= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * beta - 2.0);
}

AbsorptionEstimate mass_at_zero(const ModelParams& p, double x0, double y0, double T,
                                const McConfig& mc) {
  if (!(T >= 0.0)) throw std::domain_error("mass_at_zero: require T >= 0");
  if (!(y0 > 0.0)) throw std::domain_error("mass_at_zero: require y0 > 0");
  AbsorptionEstimate est;
  est.truncation_horizon = T;
  est.n = mc.n;
  if (T == 0.0 || mc.n == 0) {
    const bool absorbed_at_start = x0 <= 0.0;
    est.p_hat = absorbed_at_start ? 1.0 : 0.0;
    est.ci = wilson_interval(absorbed_at_start ? mc.n : 0, mc.n);
    return est;
  }

  const auto n_steps = static_cast<std::size_t>(std::ceil(T / mc.dt));
  const double dt = T / static_cast<double>(n_steps);
  const double sqdt = std::sqrt(dt);
  const double gbm_drift = -0.5 * p.nu * p.nu * dt;

  std::vector<unsigned char> absorbed(mc.n, 0);
  parallel_for(mc.n, [&](std::size_t i) {
    NormalSampler rng(SeedSpec{mc.master_seed, i});
    double x = x0, y = y0;
    if (x <= 0.0) {
      absorbed[i] = 1;
      return;
    }
    for (std::size_t k = 0; k < n_steps; ++k) {
      const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
      x += y * pow_conv(x, p.beta) * sqdt * xi_w;
      if (x <= 0.0) {
        absorbed[i] = 1;
        return;
      }
      y *= std::exp(gbm_drift + p.nu * sqdt * xi_z);
    }
  });

  std::size_t k = 0;
  for (auto a : absorbed) k += a;
  est.p_hat = static_cast<double>(k) / mc.n;
  est.ci = wilson_interval(k, mc.n);
  return est;
}

}  // namespace sabrlab
