#include "sabrlab/simulate.hpp"

#include <cmath>

namespace sabrlab {

ScalarPath x_component(const Path& path) {
  ScalarPath s;
  s.grid = path.grid;
  s.values.reserve(path.states.size());
  for (const auto& st : path.states) s.values.push_back(st.x);
  return s;
}

ScalarPath y_component(const Path& path) {
  ScalarPath s;
  s.grid = path.grid;
  s.values.reserve(path.states.size());
  for (const auto& st : path.states) s.values.push_back(st.y);
  return s;
}

Path simulate_sabr_euler(const ModelParams& p, const State2& init, const TimeGrid& grid,
                         bool drifted, const SeedSpec& seed) {
  if (!(init.x >= 0.0)) throw std::domain_error("simulate_sabr_euler: require init.x >= 0");
  if (!(init.y > 0.0)) throw std::domain_error("simulate_sabr_euler: require init.y > 0");

  Path path;
  path.grid = grid;
  path.states.reserve(grid.size());

  const double dt = grid.dt();
  const double sqdt = std::sqrt(dt);
  const double gbm_drift = -0.5 * p.nu * p.nu * dt;

  State2 s = init;
  if (s.x <= 0.0) {
    s.x = 0.0;
    s.absorbed = true;
    path.absorption_time = grid.t0;
  }
  path.states.push_back(s);

  NormalSampler rng(seed);
  for (int k = 0; k < grid.n_steps; ++k) {
    const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
    const double dw = sqdt * xi_w;
    const double dz = sqdt * xi_z;
    if (!s.absorbed) {
      double xn = s.x + s.y * pow_conv(s.x, p.beta) * dw;
      if (drifted) xn += 0.5 * s.y * s.y * p.beta * pow_conv(s.x, 2.0 * p.beta - 1.0) * dt;
      if (xn <= 0.0) {
        xn = 0.0;
        s.absorbed = true;
        path.absorption_time = grid.time(k + 1);
      }
      s.x = xn;
    }
    s.y = s.y * std::exp(gbm_drift + p.nu * dz);
    path.states.push_back(s);
  }
  return path;
}

Path simulate_decoupled(const ModelParams& p, const State2& init, const TimeGrid& grid,
                        bool drifted, const SeedSpec& seed) {
  if (!(init.y > 0.0)) throw std::domain_error("simulate_decoupled: require init.y > 0");
  if (!(init.x >= 0.0)) throw std::domain_error("simulate_decoupled: require init.x >= 0");

  Path path;
  path.grid = grid;
  path.states.reserve(grid.size());

  const double dt = grid.dt();
  const double sqdt = std::sqrt(dt);
  const double om = 1.0 - p.beta;

  State2 s = init;
  if (s.x <= 0.0) {
    s.x = 0.0;
    s.absorbed = true;
    path.absorption_time = grid.t0;
  }
  path.states.push_back(s);

  bool frozen = false;
  NormalSampler rng(seed);
  for (int k = 0; k < grid.n_steps; ++k) {
    const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
    if (frozen) {
      path.states.push_back(s);
      continue;
    }
    const double dw = sqdt * xi_w;
    if (!s.absorbed) {
      double xn;
      if (!drifted) {
        xn = s.x + pow_conv(s.x, p.beta) * dw;
      } else if (p.beta == 1.0) {
        xn = s.x * std::exp(dw);  // exact map of dX = X o dW
      } else {
        const double inner = std::pow(s.x, om) + om * dw;
        xn = inner <= 0.0 ? 0.0 : std::pow(inner, 1.0 / om);
      }
      if (xn <= 0.0) {
        xn = 0.0;
        s.absorbed = true;
        path.absorption_time = grid.time(k + 1);
      }
      s.x = xn;
    }
    const double yn = s.y + p.nu * sqdt * xi_z;
    if (yn <= 0.0) {
      frozen = true;
      path.truncation_time = grid.time(k + 1);
      path.states.push_back(s);
      continue;
    }
    s.y = yn;
    path.states.push_back(s);
  }
  return path;
}

Path simulate_dirichlet_representation(const ModelParams& p, const State2& init,
                                       const TimeGrid& grid, const SeedSpec& seed) {
  if (!(init.x > 0.0))
    throw std::domain_error("simulate_dirichlet_representation: drift is singular at x = 0, require init.x > 0");
  if (!(init.y > 0.0)) throw std::domain_error("simulate_dirichlet_representation: require init.y > 0");

  Path path;
  path.grid = grid;
  path.states.reserve(grid.size());

  const double dt = grid.dt();
  const double sqdt = std::sqrt(dt);
  const double gbm_drift = -0.5 * p.nu * p.nu * dt;

  State2 s = init;
  path.states.push_back(s);

  bool frozen = false;
  NormalSampler rng(seed);
  for (int k = 0; k < grid.n_steps; ++k) {
    const auto [xi_w, xi_z] = rng.correlated_pair(p.rho, p.rho_bar);
    if (frozen) {
      path.states.push_back(s);
      continue;
    }
    const double dw = sqdt * xi_w;
    const double dz = sqdt * xi_z;
    const double y_drift =
        s.absorbed ? 0.0 : -p.rho * p.beta * s.y * s.y * pow_conv(s.x, p.beta - 1.0) * dt;
    if (!s.absorbed) {
      double xn = s.x + s.y * pow_conv(s.x, p.beta) * dw;
      if (xn <= 0.0) {
        xn = 0.0;
        s.absorbed = true;
        path.absorption_time = grid.time(k + 1);
      }
      s.x = xn;
    }
    const double yn = s.y * std::exp(gbm_drift + p.nu * dz) + y_drift;
    if (yn <= 0.0) {
      frozen = true;
      path.truncation_time = grid.time(k + 1);
      path.states.push_back(s);
      continue;
    }
    s.y = yn;
    path.states.push_back(s);
  }
  return path;
}

ScalarPath simulate_gbm(double y0, double nu, const TimeGrid& grid, NormalSampler& rng) {
  if (!(y0 > 0.0)) throw std::domain_error("simulate_gbm: require y0 > 0");
  ScalarPath path;
  path.grid = grid;
  path.values.reserve(grid.size());
  const double dt = grid.dt();
  const double sqdt = std::sqrt(dt);
  const double drift = -0.5 * nu * nu * dt;
  double y = y0;
  path.values.push_back(y);
  for (int k = 0; k < grid.n_steps; ++k) {
    y *= std::exp(drift + nu * sqdt * rng.normal());
    path.values.push_back(y);
  }
  return path;
}

ScalarPath simulate_cev(double x0, double beta, double sigma, const TimeGrid& grid,
                        NormalSampler& rng) {
  if (!(x0 >= 0.0)) throw std::domain_error("simulate_cev: require x0 >= 0");
  ScalarPath path;
  path.grid = grid;
  path.values.reserve(grid.size());
  const double sqdt = std::sqrt(grid.dt());
  double x = x0;
  path.values.push_back(x);
  for (int k = 0; k < grid.n_steps; ++k) {
    if (x > 0.0) {
      x += sigma * pow_conv(x, beta) * sqdt * rng.normal();
      if (x <= 0.0) x = 0.0;
    } else {
      rng.normal();  // keep the stream advancing uniformly
    }
    path.values.push_back(x);
  }
  return path;
}

std::optional<double> first_hitting_time(const ScalarPath& path, double level) {
  const auto& v = path.values;
  if (v.empty()) return std::nullopt;
  if (v[0] <= level) return path.grid.t0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] <= level) {
      const double t_prev = path.grid.time(static_cast<int>(k - 1));
      const double frac = (v[k - 1] - level) / (v[k - 1] - v[k]);
      return t_prev + frac * path.grid.dt();
    }
  }
  return std::nullopt;
}

}  // namespace sabrlab
