#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sabrlab/simulate.hpp"

namespace sabrlab {

enum class ClockIntegrand {
  YSquared,         ///< t -> integral of Y_s^2 ds
  YInverseSquared,  ///< t -> integral of Y_s^{-2} ds
};

/// Monotone sampled clock t -> integral phi(Y_s) ds with values[0] = 0,
/// accumulated by the trapezoidal rule on the path grid.
struct AdditiveFunctional {
  std::vector<double> times;
  std::vector<double> values;
  ClockIntegrand integrand = ClockIntegrand::YSquared;

  double total() const { return values.empty() ? 0.0 : values.back(); }
};

AdditiveFunctional clock(const ScalarPath& y_path, ClockIntegrand integrand);
AdditiveFunctional clock(const Path& path, ClockIntegrand integrand);

/// Piecewise-linear inverse of the clock; flat segments resolve to their left
/// endpoint. nullopt when s exceeds the clock's reach.
std::optional<double> try_inverse_clock(const AdditiveFunctional& af, double s);

/// Throwing variant of try_inverse_clock (out_of_range past the reach).
double inverse_clock(const AdditiveFunctional& af, double s);

/// Resamples a base path through the clock: output state at target time t is
/// the base state at inverse_clock(af, t), absorption flags carried through.
/// Target times beyond the clock's reach freeze at the terminal state.
Path time_change_path(const Path& base, const AdditiveFunctional& af, const TimeGrid& target_grid);

/// Two-sample Kolmogorov-Smirnov result.
struct KsReport {
  double statistic = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// Exact sup-distance of the two empirical CDFs with the asymptotic p-value.
/// Requires at least 10 points per sample.
KsReport ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace sabrlab
