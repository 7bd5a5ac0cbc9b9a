#include "sabrlab/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sabrlab {

namespace {

double integrand_value(double y, ClockIntegrand kind) {
  if (kind == ClockIntegrand::YSquared) return y * y;
  if (!(y > 0.0)) throw std::domain_error("clock: integrand 1/y^2 requires y > 0 along the path");
  return 1.0 / (y * y);
}

AdditiveFunctional clock_from_values(const TimeGrid& grid, const std::vector<double>& y,
                                     ClockIntegrand kind) {
  AdditiveFunctional af;
  af.integrand = kind;
  af.times.reserve(y.size());
  af.values.reserve(y.size());
  const double dt = grid.dt();
  double acc = 0.0;
  double prev = integrand_value(y[0], kind);
  af.times.push_back(grid.t0);
  af.values.push_back(0.0);
  for (std::size_t k = 1; k < y.size(); ++k) {
    const double cur = integrand_value(y[k], kind);
    acc += 0.5 * dt * (prev + cur);
    af.times.push_back(grid.time(static_cast<int>(k)));
    af.values.push_back(acc);
    prev = cur;
  }
  return af;
}

}  // namespace

AdditiveFunctional clock(const ScalarPath& y_path, ClockIntegrand integrand) {
  if (y_path.values.empty()) throw std::invalid_argument("clock: empty path");
  return clock_from_values(y_path.grid, y_path.values, integrand);
}

AdditiveFunctional clock(const Path& path, ClockIntegrand integrand) {
  if (path.states.empty()) throw std::invalid_argument("clock: empty path");
  std::vector<double> y;
  y.reserve(path.states.size());
  for (const auto& s : path.states) y.push_back(s.y);
  return clock_from_values(path.grid, y, integrand);
}

std::optional<double> try_inverse_clock(const AdditiveFunctional& af, double s) {
  if (af.values.empty() || s < 0.0 || s > af.values.back()) return std::nullopt;
  if (s == 0.0) return af.times.front();
  const auto it = std::lower_bound(af.values.begin(), af.values.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - af.values.begin());
  if (j == 0) return af.times.front();
  const double v0 = af.values[j - 1];
  const double v1 = af.values[j];
  if (v1 == v0) return af.times[j - 1];  // ties resolve to the left endpoint
  const double frac = (s - v0) / (v1 - v0);
  return af.times[j - 1] + frac * (af.times[j] - af.times[j - 1]);
}

double inverse_clock(const AdditiveFunctional& af, double s) {
  const auto u = try_inverse_clock(af, s);
  if (!u) throw std::out_of_range("inverse_clock: value beyond the clock's reach");
  return *u;
}

namespace {

State2 interpolate_state(const Path& base, double u) {
  const auto& g = base.grid;
  if (u <= g.t0) return base.states.front();
  if (u >= g.horizon) return base.states.back();
  const double pos = (u - g.t0) / g.dt();
  std::size_t k = static_cast<std::size_t>(pos);
  if (k + 1 >= base.states.size()) k = base.states.size() - 2;
  const double frac = pos - static_cast<double>(k);
  const State2& a = base.states[k];
  const State2& b = base.states[k + 1];
  State2 out;
  out.absorbed = base.absorption_time && u >= *base.absorption_time;
  out.x = out.absorbed ? 0.0 : a.x + frac * (b.x - a.x);
  out.y = a.y + frac * (b.y - a.y);
  return out;
}

}  // namespace

Path time_change_path(const Path& base, const AdditiveFunctional& af, const TimeGrid& target_grid) {
  Path out;
  out.grid = target_grid;
  out.states.reserve(target_grid.size());
  const double reach = af.total();
  for (int j = 0; j <= target_grid.n_steps; ++j) {
    const double s = target_grid.time(j);
    const double u = s >= reach ? af.times.back() : inverse_clock(af, s);
    State2 st = interpolate_state(base, u);
    out.states.push_back(st);
    if (st.absorbed && !out.absorption_time) out.absorption_time = s;
  }
  if (base.truncation_time) out.truncation_time = base.truncation_time;
  return out;
}

double kolmogorov_q(double lambda) {
  if (lambda <= 1e-8) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 10 || b.size() < 10)
    throw std::invalid_argument("ks_two_sample: need at least 10 points per sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  KsReport report;
  report.statistic = d;
  report.n1 = sa.size();
  report.n2 = sb.size();
  const double ne = std::sqrt(n1 * n2 / (n1 + n2));
  report.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
  return report;
}

}  // namespace sabrlab
